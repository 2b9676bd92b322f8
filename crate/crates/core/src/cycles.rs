//! Displacement maps on rays from anti-saddles and limit-cycle counting.
//!
//! For an anchor `x*` the displacement is `d(r) = R(r) - r`, where `R(r)`
//! is the distance from `x*` of the first return of the trajectory through
//! `(x* + r, 0)` to the ray `{(x* + s, 0) : s > 0}` in the sense of the flow
//! (clockwise, since `x' = y`). Sign changes of `d` bracket limit cycles.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::flow::{default_escape_radius, refine_crossing, FlowError, FlowOptions, Integrator, Ray};
use crate::scalar::Real;
use crate::singular::{find_finite_singularities, SingularPoint};
use crate::system::LienardSystem;

/// `|d|` at an accepted fixed point.
pub const FIXED_POINT_TOL: f64 = 1e-9;
/// Brackets whose larger `|d|` is below this are treated as noise.
pub const SIGNAL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleOptions<T> {
    /// Target accuracy of `d(r)`. Returns are integrated at `tol / 100`,
    /// with the absolute part further scaled by `min(1, r)`.
    pub tol: T,
    pub n_samples: usize,
    pub r_min: T,
    /// Upper end of the radius grid. `None` picks one per anchor.
    pub r_max: Option<T>,
    /// `None` uses `10 * max |singularity| + 10`.
    pub r_escape: Option<T>,
    /// Time allowed for one return before the sample is marked no-return.
    pub t_return: T,
    pub fixed_point_tol: T,
    pub signal_tol: T,
}

impl<T: Real> Default for CycleOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-9),
            n_samples: 64,
            r_min: T::lit(1e-3),
            r_max: None,
            r_escape: None,
            t_return: T::lit(1000.0),
            fixed_point_tol: T::lit(FIXED_POINT_TOL),
            signal_tol: T::lit(SIGNAL_TOL),
        }
    }
}

impl<T: Real> CycleOptions<T> {
    /// Brute-force variant: 400 samples on a radius range twice as wide.
    pub fn dense_oracle(&self) -> Self {
        Self { n_samples: 400, r_max: self.r_max.map(|r| r * T::lit(2.0)), ..*self }
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        self.n_samples = n;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleStatus {
    Ok,
    Escaped,
    HitOtherBasin,
    /// Time limit or convergence to a singular point before any return.
    NoReturn,
    /// Integration failure (step underflow, non-finite state).
    Failed,
}

impl SampleStatus {
    /// Samples that left the anchor's region outward; used as `d = +inf`
    /// when bracketing cycles whose outside is unbounded.
    fn is_outward(self) -> bool {
        matches!(self, SampleStatus::Escaped | SampleStatus::HitOtherBasin)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample<T> {
    pub r: T,
    pub status: SampleStatus,
    pub d: Option<T>,
}

/// First-return map on the `+x` ray of one anti-saddle.
#[derive(Debug, Clone)]
pub struct ReturnMap<'a, T> {
    sys: &'a LienardSystem<T>,
    pub anchor: SingularPoint<T>,
    /// Neighbouring singular abscissae; a return outside this window has
    /// gone around something other than the anchor.
    pub window: (Option<T>, Option<T>),
    flow: FlowOptions<T>,
    t_return: T,
}

impl<'a, T: Real> ReturnMap<'a, T> {
    pub fn new(sys: &'a LienardSystem<T>, anchor: &SingularPoint<T>, opts: &CycleOptions<T>) -> Self {
        let pts = find_finite_singularities(sys);
        let left = pts.iter().map(|p| p.x).filter(|x| *x < anchor.x).fold(None, |m: Option<T>, x| {
            Some(m.map_or(x, |m| m.max(x)))
        });
        let right = pts.iter().map(|p| p.x).filter(|x| *x > anchor.x).fold(None, |m: Option<T>, x| {
            Some(m.map_or(x, |m| m.min(x)))
        });
        let r_escape = opts.r_escape.unwrap_or_else(|| default_escape_radius(sys));
        let flow = FlowOptions::for_system(sys, opts.tol * T::lit(1e-2)).with_escape(r_escape);
        Self { sys, anchor: anchor.clone(), window: (left, right), flow, t_return: opts.t_return }
    }

    pub fn system(&self) -> &LienardSystem<T> {
        self.sys
    }

    /// Radius range that stays on the anchor's side of its right
    /// neighbour and well inside the escape radius.
    pub fn default_r_max(&self) -> T {
        let room = self.flow.r_escape - self.anchor.x.abs();
        let mut r = room * T::lit(0.5);
        if let Some(right) = self.window.1 {
            r = r.min((right - self.anchor.x) * T::lit(0.98));
        }
        r
    }

    fn outside_window(&self, x: T) -> bool {
        self.window.0.is_some_and(|l| x <= l) || self.window.1.is_some_and(|r| x >= r)
    }

    pub fn sample(&self, r: T) -> Sample<T> {
        match self.try_sample(r) {
            Ok(s) => s,
            Err(_) => Sample { r, status: SampleStatus::Failed, d: None },
        }
    }

    fn try_sample(&self, r: T) -> Result<Sample<T>, FlowError> {
        let x0 = self.anchor.x;
        let start = [x0 + r, T::zero()];
        let mut opts = self.flow;
        opts.atol = opts.atol * r.min(T::one());
        let done = |status, d| Ok(Sample { r, status, d });
        if start[0].abs() >= opts.r_escape {
            return done(SampleStatus::Escaped, None);
        }
        let mut integ = Integrator::new(self.sys, opts)?;
        integ.reset(T::zero(), start);
        let ray = Ray::positive_x(x0);
        let mut prev_y = T::zero();
        loop {
            if integ.t() >= self.t_return {
                return done(SampleStatus::NoReturn, None);
            }
            integ.step(self.t_return)?;
            let y = integ.state()[1];
            if (prev_y > T::zero() && y <= T::zero()) || (prev_y < T::zero() && y >= T::zero()) {
                let (_, p) = refine_crossing(&integ, &ray);
                if self.outside_window(p[0]) {
                    return done(SampleStatus::HitOtherBasin, None);
                }
                if prev_y > T::zero() && p[0] > x0 {
                    return done(SampleStatus::Ok, Some(p[0] - x0 - r));
                }
            }
            prev_y = y;
            match integ.check_terminal() {
                Some(crate::flow::Terminal::Escaped) => return done(SampleStatus::Escaped, None),
                Some(_) => return done(SampleStatus::NoReturn, None),
                None => {}
            }
        }
    }

    /// `d(r)` where the return exists.
    pub fn displacement(&self, r: T) -> Option<T> {
        self.sample(r).d
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisplacementProfile<T> {
    pub anchor: SingularPoint<T>,
    pub radii: Vec<T>,
    /// `d(r)`; `None` where the status is not ok.
    pub d: Vec<Option<T>>,
    pub status: Vec<SampleStatus>,
}

impl<T: Real> DisplacementProfile<T> {
    pub fn ok_count(&self) -> usize {
        self.status.iter().filter(|s| **s == SampleStatus::Ok).count()
    }

    pub fn samples(&self) -> impl Iterator<Item = Sample<T>> + '_ {
        (0..self.radii.len()).map(|i| Sample { r: self.radii[i], status: self.status[i], d: self.d[i] })
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "r,d,status")?;
        for s in self.samples() {
            let d = s.d.map(|d| d.to_string()).unwrap_or_default();
            let status = serde_json::to_value(s.status).expect("status serializes");
            writeln!(w, "{},{},{}", s.r, d, status.as_str().unwrap_or(""))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CycleError {
    #[error("anchor at x = {0} is not an anti-saddle")]
    NotAntiSaddle(f64),
    #[error("invalid radius grid: {0}")]
    InvalidGrid(String),
    #[error("no sample of the profile returned to the ray")]
    AllSamplesFailed,
}

/// Log-spaced grid of `n` radii on `[r_min, r_max]`.
pub fn log_grid<T: Real>(r_min: T, r_max: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![r_min];
    }
    let (a, b) = (r_min.ln(), r_max.ln());
    let step = (b - a) / T::from_usize(n - 1).unwrap();
    (0..n)
        .map(|i| {
            if i == n - 1 {
                r_max
            } else {
                (a + step * T::from_usize(i).unwrap()).exp()
            }
        })
        .collect()
}

pub fn displacement_profile<T: Real>(
    map: &ReturnMap<'_, T>,
    r_min: T,
    r_max: T,
    n_samples: usize,
) -> Result<DisplacementProfile<T>, CycleError> {
    if !map.anchor.is_anti_saddle() {
        return Err(CycleError::NotAntiSaddle(map.anchor.x.as_f64()));
    }
    if n_samples == 0 || !(r_min > T::zero()) || (n_samples > 1 && !(r_min < r_max)) {
        return Err(CycleError::InvalidGrid(format!("[{r_min}, {r_max}] with {n_samples} samples")));
    }
    let radii = log_grid(r_min, r_max, n_samples);
    let samples: Vec<Sample<T>> = radii.par_iter().map(|&r| map.sample(r)).collect();
    let profile = DisplacementProfile {
        anchor: map.anchor.clone(),
        d: samples.iter().map(|s| s.d).collect(),
        status: samples.iter().map(|s| s.status).collect(),
        radii,
    };
    if profile.ok_count() == 0 {
        return Err(CycleError::AllSamplesFailed);
    }
    Ok(profile)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    Stable,
    Unstable,
    SemiStable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitCycle<T> {
    /// Abscissa of the anchor.
    pub anchor: T,
    /// Fixed-point radius on the anchor's `+x` ray.
    #[serde(rename = "r")]
    pub r_star: T,
    pub stability: Stability,
    /// `d'(r_star) + 1`.
    #[serde(rename = "multiplier")]
    pub multiplier_estimate: T,
    /// `d(r_star)` at the accepted point.
    pub residual: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleCount<T> {
    pub cycles: Vec<LimitCycle<T>>,
    /// Sign changes whose magnitude stayed under the signal threshold.
    pub noise_brackets: usize,
    /// Brackets against an escaped sample that turned out to be an escape
    /// boundary rather than a fixed point.
    pub spurious_brackets: usize,
}

fn d_of<T: Real>(map: &ReturnMap<'_, T>, r: T) -> (SampleStatus, Option<T>) {
    let s = map.sample(r);
    (s.status, s.d)
}

/// Refines a bracket `[a, b]` with `d(a) > 0 > d(b)` or the reverse.
/// Non-ok values at either end count as `+inf` when outward, so the
/// bracket also works against an escape boundary.
fn refine_root<T: Real>(
    map: &ReturnMap<'_, T>,
    opts: &CycleOptions<T>,
    mut a: (T, Option<T>),
    mut b: (T, Option<T>),
) -> Option<(T, T)> {
    let val = |s: (SampleStatus, Option<T>)| match s {
        (SampleStatus::Ok, Some(d)) => Some(d),
        (st, _) if st.is_outward() => Some(T::infinity()),
        _ => None,
    };
    let fa = a.1.unwrap_or(T::infinity());
    let sign_a = fa > T::zero();
    let mut side = 0i8;
    for _ in 0..200 {
        let (ra, fa) = (a.0, a.1.unwrap_or(T::infinity()));
        let (rb, fb) = (b.0, b.1.unwrap_or(T::infinity()));
        // Illinois step when both ends are finite, bisection otherwise.
        let mut m = if fa.is_finite() && fb.is_finite() {
            let mut fa2 = fa;
            let mut fb2 = fb;
            if side == 1 {
                fb2 = fb2 / T::lit(2.0);
            } else if side == -1 {
                fa2 = fa2 / T::lit(2.0);
            }
            (ra * fb2 - rb * fa2) / (fb2 - fa2)
        } else {
            (ra + rb) / T::lit(2.0)
        };
        let lo = ra.min(rb);
        let hi = ra.max(rb);
        if !(m > lo && m < hi) {
            m = (ra + rb) / T::lit(2.0);
        }
        let fm = val(d_of(map, m))?;
        if fm.is_finite() && fm.abs() < opts.fixed_point_tol {
            return Some((m, fm));
        }
        if (fm > T::zero()) == sign_a {
            a = (m, Some(fm).filter(|v| v.is_finite()));
            side = if side == -1 { -2 } else { -1 };
        } else {
            b = (m, Some(fm).filter(|v| v.is_finite()));
            side = if side == 1 { 2 } else { 1 };
        }
        if side.abs() == 2 {
            side = 0;
        }
        if (hi - lo) <= T::lit(1e-13) * (T::one() + hi) {
            break;
        }
    }
    // Bracket collapsed without reaching the fixed-point tolerance.
    let best = [a, b]
        .into_iter()
        .filter_map(|(r, f)| f.map(|f| (r, f)))
        .min_by(|x, y| x.1.abs().partial_cmp(&y.1.abs()).unwrap())?;
    if best.1.abs() < opts.signal_tol {
        Some(best)
    } else {
        None
    }
}

fn multiplier<T: Real>(map: &ReturnMap<'_, T>, r: T) -> T {
    let h = (r * T::lit(1e-4)).max(T::lit(1e-7));
    match (map.displacement(r + h), map.displacement(r - h)) {
        (Some(p), Some(m)) => (p - m) / (h + h) + T::one(),
        _ => T::nan(),
    }
}

/// Golden-section search for the minimum of `|d|` on `[a, b]`. Returns
/// the minimizer and `d` there, or the first point found where `d` has the
/// opposite sign to `sign`.
pub(crate) fn golden_min<T: Real>(
    map: &ReturnMap<'_, T>,
    mut a: T,
    mut b: T,
    positive: bool,
) -> Option<(T, T)> {
    let invphi = T::lit(0.618_033_988_749_894_8);
    let f = |r: T| map.displacement(r);
    let mut c = b - (b - a) * invphi;
    let mut d = a + (b - a) * invphi;
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..80 {
        for (r, v) in [(c, fc), (d, fd)] {
            if (v > T::zero()) != positive && !v.is_zero() {
                return Some((r, v));
            }
        }
        if (b - a) <= T::lit(1e-12) * (T::one() + b) {
            break;
        }
        if fc.abs() < fd.abs() {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * invphi;
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * invphi;
            fd = f(d)?;
        }
    }
    Some(if fc.abs() < fd.abs() { (c, fc) } else { (d, fd) })
}

/// Golden-section search for the extremum of `d` on `[a, b]` that points
/// toward zero: the minimum when the ends are positive, the maximum when
/// they are negative.
pub(crate) fn golden_extremum<T: Real>(map: &ReturnMap<'_, T>, mut a: T, mut b: T, positive: bool) -> Option<(T, T)> {
    let invphi = T::lit(0.618_033_988_749_894_8);
    let f = |r: T| map.displacement(r).map(|d| if positive { d } else { -d });
    let mut c = b - (b - a) * invphi;
    let mut d = a + (b - a) * invphi;
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..100 {
        if (b - a) <= T::lit(1e-12) * (T::one() + b) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * invphi;
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * invphi;
            fd = f(d)?;
        }
    }
    let (r, v) = if fc < fd { (c, fc) } else { (d, fd) };
    Some((r, if positive { v } else { -v }))
}

/// Semi-stable cycle in `bracket`, located as a tangency of `d` with zero.
/// Returns `None` when `d` has opposite signs at the ends (simple cycle),
/// has no interior extremum, or its extremum is not within the fixed-point
/// tolerance of zero.
pub fn refine_semistable<T: Real>(
    map: &ReturnMap<'_, T>,
    bracket: (T, T),
    opts: &CycleOptions<T>,
) -> Option<LimitCycle<T>> {
    let (a, b) = bracket;
    let da = map.displacement(a)?;
    let db = map.displacement(b)?;
    if (da > T::zero()) != (db > T::zero()) {
        return None;
    }
    let (r, d) = golden_extremum(map, a, b, da > T::zero())?;
    let interior = (r - a).abs() > T::lit(1e-9) * (T::one() + r) && (b - r).abs() > T::lit(1e-9) * (T::one() + r);
    if !interior || d.abs() >= opts.fixed_point_tol {
        return None;
    }
    Some(LimitCycle {
        anchor: map.anchor.x,
        r_star: r,
        stability: Stability::SemiStable,
        multiplier_estimate: multiplier(map, r),
        residual: d,
    })
}

fn simple_cycle<T: Real>(map: &ReturnMap<'_, T>, r: T, d: T, below_positive: bool) -> LimitCycle<T> {
    LimitCycle {
        anchor: map.anchor.x,
        r_star: r,
        stability: if below_positive { Stability::Stable } else { Stability::Unstable },
        multiplier_estimate: multiplier(map, r),
        residual: d,
    }
}

/// Detects cycles in a profile: sign changes of `d` between adjacent ok
/// samples (and between an ok-negative sample and an outward sample that
/// follows it), plus refined tangencies.
pub fn count_cycles<T: Real>(
    map: &ReturnMap<'_, T>,
    profile: &DisplacementProfile<T>,
    opts: &CycleOptions<T>,
) -> CycleCount<T> {
    let mut out = CycleCount { cycles: Vec::new(), noise_brackets: 0, spurious_brackets: 0 };
    let s: Vec<Sample<T>> = profile.samples().collect();
    for i in 0..s.len().saturating_sub(1) {
        let (p, q) = (s[i], s[i + 1]);
        match (p.d, q.d) {
            (Some(dp), Some(dq)) if (dp > T::zero()) != (dq > T::zero()) => {
                if dp.abs().max(dq.abs()) < opts.signal_tol {
                    out.noise_brackets += 1;
                    continue;
                }
                if let Some((r, d)) = refine_root(map, opts, (p.r, Some(dp)), (q.r, Some(dq))) {
                    out.cycles.push(simple_cycle(map, r, d, dp > T::zero()));
                }
            }
            (Some(dp), None) if dp < T::zero() && q.status.is_outward() => {
                if dp.abs() < opts.signal_tol {
                    out.noise_brackets += 1;
                    continue;
                }
                match refine_root(map, opts, (p.r, Some(dp)), (q.r, None)) {
                    Some((r, d)) => out.cycles.push(simple_cycle(map, r, d, false)),
                    None => out.spurious_brackets += 1,
                }
            }
            _ => {}
        }
    }
    // Tangency candidates: every interior local minimum of |d| without a
    // sign change, with real signal on both sides. A fixed threshold on
    // |d| misses close pairs whenever the grid is coarse next to them.
    for i in 1..s.len().saturating_sub(1) {
        let (Some(a), Some(m), Some(b)) = (s[i - 1].d, s[i].d, s[i + 1].d) else {
            continue;
        };
        let same = (a > T::zero()) == (m > T::zero()) && (m > T::zero()) == (b > T::zero());
        if !same || m.abs() >= a.abs() || m.abs() >= b.abs() {
            continue;
        }
        if a.abs().min(b.abs()) < opts.signal_tol {
            continue;
        }
        let (ra, rb) = (s[i - 1].r, s[i + 1].r);
        match golden_min(map, ra, rb, a > T::zero()) {
            Some((r, d)) if (d > T::zero()) != (a > T::zero()) => {
                // Two close cycles hidden between grid points.
                for (lo, hi) in [((ra, Some(a)), (r, Some(d))), ((r, Some(d)), (rb, Some(b)))] {
                    if let Some((rc, dc)) = refine_root(map, opts, lo, hi) {
                        out.cycles.push(simple_cycle(map, rc, dc, lo.1.unwrap() > T::zero()));
                    }
                }
            }
            Some(_) => {
                if let Some(c) = refine_semistable(map, (ra, rb), opts) {
                    out.cycles.push(c);
                }
            }
            None => {}
        }
    }
    out.cycles.sort_by(|x, y| x.r_star.partial_cmp(&y.r_star).unwrap());
    let gap = opts.fixed_point_tol * T::lit(10.0);
    out.cycles.dedup_by(|b, a| (b.r_star - a.r_star).abs() <= gap);
    out
}

/// Radially adjacent cycles never share a stability class unless one of
/// them is semi-stable.
pub fn stability_alternates<T: Real>(cycles: &[LimitCycle<T>]) -> bool {
    cycles.windows(2).all(|w| {
        w[0].stability == Stability::SemiStable
            || w[1].stability == Stability::SemiStable
            || w[0].stability != w[1].stability
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnchorCensus<T> {
    pub x: T,
    pub kind: crate::singular::PointKind,
    pub cycles: Vec<LimitCycle<T>>,
    pub r_min: T,
    pub r_max: T,
    pub ok_samples: usize,
    pub alternation_ok: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub origin: usize,
    pub others: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleCensus<T> {
    pub anchors: Vec<AnchorCensus<T>>,
    pub totals: Totals,
}

impl<T: Real> CycleCensus<T> {
    pub fn totals_pair(&self) -> (usize, usize) {
        (self.totals.origin, self.totals.others)
    }

    pub fn origin(&self) -> Option<&AnchorCensus<T>> {
        self.anchors.iter().find(|a| a.x.is_zero())
    }

    pub fn all_cycles(&self) -> impl Iterator<Item = &LimitCycle<T>> {
        self.anchors.iter().flat_map(|a| a.cycles.iter())
    }
}

/// Profile and cycles around one anchor.
pub fn anchor_census<T: Real>(
    sys: &LienardSystem<T>,
    anchor: &SingularPoint<T>,
    opts: &CycleOptions<T>,
) -> (AnchorCensus<T>, Option<DisplacementProfile<T>>) {
    let map = ReturnMap::new(sys, anchor, opts);
    let r_max = opts.r_max.unwrap_or_else(|| map.default_r_max());
    let r_min = opts.r_min.min(r_max * T::lit(0.5));
    let mut census = AnchorCensus {
        x: anchor.x,
        kind: anchor.kind,
        cycles: Vec::new(),
        r_min,
        r_max,
        ok_samples: 0,
        alternation_ok: true,
        note: None,
    };
    match displacement_profile(&map, r_min, r_max, opts.n_samples) {
        Ok(profile) => {
            let count = count_cycles(&map, &profile, opts);
            census.ok_samples = profile.ok_count();
            census.alternation_ok = stability_alternates(&count.cycles);
            census.cycles = count.cycles;
            if sys.symmetry_class().forces_centers() {
                if !census.cycles.is_empty() {
                    census.note = Some(format!(
                        "symmetric field: {} candidate(s) discarded, anchor is a center",
                        census.cycles.len()
                    ));
                } else {
                    census.note = Some("symmetric field: anchor is a center".into());
                }
                census.cycles.clear();
            }
            (census, Some(profile))
        }
        Err(e) => {
            census.note = Some(format!("{e}; any cycle may have merged into a separatrix cycle"));
            (census, None)
        }
    }
}

/// Runs the profile and cycle count for every anti-saddle.
pub fn census<T: Real>(sys: &LienardSystem<T>, opts: &CycleOptions<T>) -> CycleCensus<T> {
    let anchors: Vec<SingularPoint<T>> =
        find_finite_singularities(sys).into_iter().filter(|p| p.is_anti_saddle()).collect();
    let per: Vec<AnchorCensus<T>> = anchors.par_iter().map(|a| anchor_census(sys, a, opts).0).collect();
    let origin = per.iter().filter(|a| a.x.is_zero()).map(|a| a.cycles.len()).sum();
    let others = per.iter().filter(|a| !a.x.is_zero()).map(|a| a.cycles.len()).sum();
    CycleCensus { anchors: per, totals: Totals { origin, others } }
}
