//! Successive switching-on of field rotation parameters.
//!
//! Increasing any even damping coefficient `a_{2i}` rotates the field in
//! one direction everywhere (the rotation determinant is `x^{2i} y^2 >= 0`),
//! which pushes the return map up: stable cycles expand and unstable ones
//! contract. The sweep engine records cycle censuses along monotone
//! parameter paths and localizes births and deaths; the constructor uses a
//! sign-alternating magnitude ladder to build configurations with `k`
//! cycles around the origin.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cycles::{census, golden_extremum, CycleCensus, CycleOptions, LimitCycle, ReturnMap, Stability};
use crate::scalar::Real;
use crate::singular::{find_finite_singularities, SingularPoint};
use crate::system::{CanonicalSystem, LienardSystem, Sign, SystemError};

/// A coefficient of the general system: `a{i}` is `alpha[i]`, `b{j}` is
/// `beta[j - 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Alpha(usize),
    Beta(usize),
}

impl Slot {
    pub fn get<T: Real>(self, sys: &LienardSystem<T>) -> Option<T> {
        match self {
            Slot::Alpha(i) => sys.alpha().get(i).copied(),
            Slot::Beta(j) if j >= 1 => sys.beta().get(j - 1).copied(),
            Slot::Beta(_) => None,
        }
    }

    pub fn set<T: Real>(self, sys: &LienardSystem<T>, value: T) -> LienardSystem<T> {
        match self {
            Slot::Alpha(i) => sys.with_alpha(i, value),
            Slot::Beta(j) => sys.with_beta(j, value),
        }
    }

    pub fn is_even_alpha(self) -> bool {
        matches!(self, Slot::Alpha(i) if i % 2 == 0)
    }

    fn check<T: Real>(self, sys: &LienardSystem<T>) -> Result<(), RotateError> {
        if self.get(sys).is_none() {
            return Err(RotateError::UnknownSlot(self.to_string()));
        }
        Ok(())
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Alpha(i) => write!(f, "a{i}"),
            Slot::Beta(j) => write!(f, "b{j}"),
        }
    }
}

impl FromStr for Slot {
    type Err = RotateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RotateError::UnknownSlot(s.to_string());
        let (head, tail) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
        let n: usize = tail.parse().map_err(|_| bad())?;
        match head {
            "a" => Ok(Slot::Alpha(n)),
            "b" if n >= 1 => Ok(Slot::Beta(n)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Slot {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slot {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RotateError {
    #[error("unknown parameter slot {0}")]
    UnknownSlot(String),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    Hopf,
    Fold,
    EscapeToSeparatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BifurcationEvent<T> {
    pub kind: EventKind,
    pub param_slot: Slot,
    pub param_value: T,
    pub anchor: SingularPoint<T>,
    /// Trace residual for Hopf events, cycle radius otherwise.
    pub detail: T,
    /// Width of the parameter bracket the event was localized to.
    pub bracket_width: T,
}

/// Anti-saddles of `sys`.
fn anti_saddles<T: Real>(sys: &LienardSystem<T>) -> Vec<SingularPoint<T>> {
    find_finite_singularities(sys).into_iter().filter(|p| p.is_anti_saddle()).collect()
}

/// Zeros of the trace at each anti-saddle as `slot` runs over `range`.
///
/// For a damping slot the anchors do not move and the trace
/// `f(x*) = c + a_i x*^i` is affine in the parameter, so the root is solved
/// directly. Restoring slots move the anchors; there the trace along the
/// tracked anchor is sampled and bisected to a bracket of `1e-8`.
pub fn hopf_scan<T: Real>(
    template: &LienardSystem<T>,
    slot: Slot,
    range: (T, T),
) -> Result<Vec<BifurcationEvent<T>>, RotateError> {
    slot.check(template)?;
    let (lo, hi) = (range.0.min(range.1), range.0.max(range.1));
    let mut events = Vec::new();
    match slot {
        Slot::Alpha(i) => {
            let base = template.with_alpha(i, T::zero());
            for a in anti_saddles(template) {
                let c = base.damping().eval(&a.x);
                let w = a.x.powi(i as i32);
                if w.is_zero() {
                    continue;
                }
                let v = -c / w;
                if v >= lo && v <= hi {
                    let sys = slot.set(template, v);
                    let anchor = anti_saddles(&sys)
                        .into_iter()
                        .find(|p| p.x == a.x)
                        .unwrap_or_else(|| SingularPoint { trace: T::zero(), ..a.clone() });
                    events.push(BifurcationEvent {
                        kind: EventKind::Hopf,
                        param_slot: slot,
                        param_value: v,
                        detail: sys.damping().eval(&a.x),
                        anchor,
                        bracket_width: T::zero(),
                    });
                }
            }
        }
        Slot::Beta(_) => {
            let n = 400;
            let start = slot.set(template, lo);
            for a0 in anti_saddles(&start) {
                if a0.x.is_zero() {
                    // The origin's trace is a0 whatever the restoring terms.
                    continue;
                }
                let trace_at = |v: T, near: T| -> Option<(T, SingularPoint<T>)> {
                    let pts = find_finite_singularities(&slot.set(template, v));
                    let p = pts
                        .into_iter()
                        .min_by(|p, q| (p.x - near).abs().partial_cmp(&(q.x - near).abs()).unwrap())?;
                    Some((p.trace, p))
                };
                let mut prev_v = lo;
                let Some((mut prev_t, mut prev_p)) = trace_at(lo, a0.x) else { continue };
                for s in 1..=n {
                    let v = lo + (hi - lo) * T::from_usize(s).unwrap() / T::from_usize(n).unwrap();
                    let Some((t, p)) = trace_at(v, prev_p.x) else { break };
                    if !p.is_anti_saddle() {
                        break;
                    }
                    if (t > T::zero()) != (prev_t > T::zero()) {
                        let (mut a, mut b, mut ta) = (prev_v, v, prev_t);
                        let mut near = prev_p.x;
                        while (b - a).abs() > T::lit(1e-8) {
                            let m = (a + b) / T::lit(2.0);
                            let Some((tm, pm)) = trace_at(m, near) else { break };
                            near = pm.x;
                            if (tm > T::zero()) == (ta > T::zero()) {
                                a = m;
                                ta = tm;
                            } else {
                                b = m;
                            }
                        }
                        let m = (a + b) / T::lit(2.0);
                        if let Some((tm, pm)) = trace_at(m, near) {
                            events.push(BifurcationEvent {
                                kind: EventKind::Hopf,
                                param_slot: slot,
                                param_value: m,
                                anchor: pm,
                                detail: tm,
                                bracket_width: (b - a).abs(),
                            });
                        }
                    }
                    prev_v = v;
                    prev_t = t;
                    prev_p = p;
                }
            }
        }
    }
    events.sort_by(|a, b| a.param_value.partial_cmp(&b.param_value).unwrap());
    Ok(events)
}

/// One leg of a sweep: move `slot` linearly from its current value (or
/// `from`) to `to` in `steps` steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlotSweep<T> {
    pub slot: Slot,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<T>,
    pub to: T,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_steps() -> usize {
    50
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPlan<T> {
    pub template: LienardSystem<T>,
    pub order: Vec<SlotSweep<T>>,
}

impl<T: Real> SweepPlan<T> {
    /// Standard schedule for a canonical template: `a_{2k}` first, then
    /// downwards, with targets `leading * (-ratio)^n` for rung `n`.
    pub fn alternating(template: &CanonicalSystem<T>, leading: Sign, ratio: T, steps: usize) -> Self {
        let k = template.k;
        let order = (0..=k)
            .map(|n| {
                let mag = ratio.powi(n as i32);
                let sign = if n % 2 == 0 { leading } else { leading.flip() };
                SlotSweep { slot: Slot::Alpha(2 * (k - n)), from: None, to: sign.value::<T>() * mag, steps }
            })
            .collect();
        Self { template: template.expand(), order }
    }

    pub fn validate(&self) -> Result<(), RotateError> {
        let mut seen = Vec::new();
        for leg in &self.order {
            leg.slot.check(&self.template)?;
            if seen.contains(&leg.slot) {
                return Err(RotateError::InvalidPlan(format!("slot {} swept twice", leg.slot)));
            }
            seen.push(leg.slot);
            if leg.steps == 0 {
                return Err(RotateError::InvalidPlan(format!("slot {} has zero steps", leg.slot)));
            }
            if !leg.to.is_finite() || leg.from.is_some_and(|f| !f.is_finite()) {
                return Err(RotateError::InvalidPlan(format!("slot {} has a non-finite bound", leg.slot)));
            }
        }
        Ok(())
    }

    /// Whether the plan sweeps even damping slots from the top down with
    /// strictly alternating target signs.
    pub fn is_alternating(&self) -> bool {
        let mut prev: Option<(usize, bool)> = None;
        for leg in &self.order {
            let Slot::Alpha(i) = leg.slot else { return false };
            if i % 2 == 1 || leg.to.is_zero() {
                return false;
            }
            let pos = leg.to > T::zero();
            if let Some((pi, ppos)) = prev {
                if i >= pi || pos == ppos {
                    return false;
                }
            }
            prev = Some((i, pos));
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot<T> {
    pub slot: Slot,
    pub param_value: T,
    pub system: LienardSystem<T>,
    pub census: CycleCensus<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepLog<T> {
    pub snapshots: Vec<Snapshot<T>>,
    pub events: Vec<BifurcationEvent<T>>,
    /// Tracked cycles that moved against the rotation rule between
    /// consecutive snapshots.
    pub monotonicity_violations: Vec<String>,
    /// Count jumps that stayed too large after step halving.
    pub parity_violations: Vec<String>,
    /// Set when the sweep stopped early.
    pub aborted: Option<String>,
}

/// Relative gate for matching cycles across parameter steps.
pub const TRACK_GATE: f64 = 0.3;

fn counts_per_anchor<T: Real>(c: &CycleCensus<T>) -> Vec<(T, usize)> {
    c.anchors.iter().map(|a| (a.x, a.cycles.len())).collect()
}

fn anchor_count<T: Real>(c: &CycleCensus<T>, x: T) -> usize {
    c.anchors
        .iter()
        .filter(|a| (a.x - x).abs() < T::lit(1e-6) * (T::one() + x.abs()))
        .map(|a| a.cycles.len())
        .sum()
}

/// Nearest cycle with the same stability within the relative gate.
fn track<'a, T: Real>(c: &LimitCycle<T>, pool: &'a [LimitCycle<T>]) -> Option<&'a LimitCycle<T>> {
    pool.iter()
        .filter(|o| o.stability == c.stability)
        .map(|o| ((o.r_star - c.r_star).abs() / c.r_star, o))
        .filter(|(rel, _)| *rel <= T::lit(TRACK_GATE))
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
        .map(|(_, o)| o)
}

/// Expected sign of `dr/dparam` under an even damping slot.
fn expected_motion(s: Stability) -> Option<i8> {
    match s {
        Stability::Stable => Some(1),
        Stability::Unstable => Some(-1),
        Stability::SemiStable => None,
    }
}

fn monotone_between<T: Real>(
    a: &CycleCensus<T>,
    b: &CycleCensus<T>,
    dparam: T,
    slot: Slot,
    out: &mut Vec<String>,
) {
    if !slot.is_even_alpha() || dparam.is_zero() {
        return;
    }
    for (ca, cb) in a.anchors.iter().zip(&b.anchors) {
        for c in &ca.cycles {
            let (Some(next), Some(dir)) = (track(c, &cb.cycles), expected_motion(c.stability)) else {
                continue;
            };
            let moved = (next.r_star - c.r_star) * dparam.signum();
            let want = T::from_i8(dir).unwrap();
            // Allow motion at the level of the integration noise.
            let noise = T::lit(1e-7) * (T::one() + c.r_star);
            if moved * want < -noise {
                out.push(format!(
                    "{} cycle at anchor {} moved from r = {} to {} as {} changed by {}",
                    serde_json::to_value(c.stability).unwrap().as_str().unwrap_or(""),
                    c.anchor,
                    c.r_star,
                    next.r_star,
                    slot,
                    dparam
                ));
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn classify_change<T: Real>(
    sys_lo: &LienardSystem<T>,
    slot: Slot,
    lo: (T, &CycleCensus<T>),
    hi: (T, &CycleCensus<T>),
    anchor_x: T,
    opts: &CycleOptions<T>,
    width: T,
    hopf_logged: bool,
) -> Option<BifurcationEvent<T>> {
    // Bisection on the integer count at this anchor.
    let n_lo = anchor_count(lo.1, anchor_x);
    let n_hi = anchor_count(hi.1, anchor_x);
    let (mut a, mut b) = (lo.0, hi.0);
    let mut ca = lo.1.clone();
    let mut cb = hi.1.clone();
    let template = sys_lo;
    while (b - a).abs() > width {
        let m = (a + b) / T::lit(2.0);
        let cm = census(&slot.set(template, m), opts);
        if anchor_count(&cm, anchor_x) == n_lo {
            a = m;
            ca = cm;
        } else {
            b = m;
            cb = cm;
        }
    }
    let anchor_of = |sys: &LienardSystem<T>| {
        anti_saddles(sys)
            .into_iter()
            .min_by(|p, q| (p.x - anchor_x).abs().partial_cmp(&(q.x - anchor_x).abs()).unwrap())
    };
    let pb = anchor_of(&slot.set(template, b))?;
    let (na, nb) = (anchor_count(&ca, anchor_x), anchor_count(&cb, anchor_x));
    // Radii on the side where the extra cycles still exist.
    let (more, fewer) = if na > nb { (&ca, &cb) } else { (&cb, &ca) };
    let cycles_more: Vec<LimitCycle<T>> = more
        .anchors
        .iter()
        .filter(|x| (x.x - anchor_x).abs() < T::lit(1e-6) * (T::one() + anchor_x.abs()))
        .flat_map(|x| x.cycles.clone())
        .collect();
    let cycles_fewer: Vec<LimitCycle<T>> = fewer
        .anchors
        .iter()
        .filter(|x| (x.x - anchor_x).abs() < T::lit(1e-6) * (T::one() + anchor_x.abs()))
        .flat_map(|x| x.cycles.clone())
        .collect();
    let lost: Vec<&LimitCycle<T>> = cycles_more.iter().filter(|c| track(c, &cycles_fewer).is_none()).collect();
    let diff = n_lo.abs_diff(n_hi);
    // The innermost cycle appearing or vanishing after a logged trace zero
    // is the Hopf cycle crossing the detection threshold.
    if diff == 1 && hopf_logged && lost.len() == 1 && cycles_more.first().map(|c| c.r_star) == Some(lost[0].r_star) {
        return None;
    }
    let kind = if diff == 2 && lost.len() >= 2 { EventKind::Fold } else { EventKind::EscapeToSeparatrix };
    let detail = if lost.is_empty() {
        T::nan()
    } else {
        lost.iter().fold(T::zero(), |s, c| s + c.r_star) / T::from_usize(lost.len()).unwrap()
    };
    let (a_more, a_fewer) = if na > nb { (a, b) } else { (b, a) };
    if kind == EventKind::Fold {
        let others: Vec<T> = cycles_more.iter().filter(|c| track(c, &cycles_fewer).is_some()).map(|c| c.r_star).collect();
        if let Some((mu, r)) = refine_fold(template, slot, (a_more, a_fewer), anchor_x, &lost, &others, opts) {
            return Some(BifurcationEvent {
                kind,
                param_slot: slot,
                param_value: mu,
                anchor: anchor_of(&slot.set(template, mu))?,
                detail: r,
                bracket_width: (b - a).abs(),
            });
        }
    }
    Some(BifurcationEvent {
        kind,
        param_slot: slot,
        param_value: (a + b) / T::lit(2.0),
        anchor: pb,
        detail,
        bracket_width: (b - a).abs(),
    })
}

/// Moves a fold bracket onto the tangency itself: bisects the parameter on
/// the sign of the extremal displacement between the merging pair until
/// that extremum is below the fixed-point tolerance. Returns the parameter
/// and the tangency radius.
fn refine_fold<T: Real>(
    template: &LienardSystem<T>,
    slot: Slot,
    (mut more, mut fewer): (T, T),
    anchor_x: T,
    lost: &[&LimitCycle<T>],
    others: &[T],
    opts: &CycleOptions<T>,
) -> Option<(T, T)> {
    let r_lo = lost.iter().map(|c| c.r_star).fold(T::infinity(), T::min);
    let r_hi = lost.iter().map(|c| c.r_star).fold(T::neg_infinity(), T::max);
    let w = (r_hi - r_lo).max(T::lit(0.05) * (r_lo + r_hi) / T::lit(2.0));
    let mut lo = r_lo - w;
    let mut hi = r_hi + w;
    for &r in others {
        if r < r_lo {
            lo = lo.max((r + r_lo) / T::lit(2.0));
        } else if r > r_hi {
            hi = hi.min((r + r_hi) / T::lit(2.0));
        }
    }
    let lo = lo.max(r_lo / T::lit(2.0));
    // Signed extremum of d on [lo, hi]: negative while the pair exists.
    let gap = |mu: T| -> Option<(T, T)> {
        let sys = slot.set(template, mu);
        let anchor = anti_saddles(&sys)
            .into_iter()
            .min_by(|p, q| (p.x - anchor_x).abs().partial_cmp(&(q.x - anchor_x).abs()).unwrap())?;
        let map = ReturnMap::new(&sys, &anchor, opts);
        let d_lo = map.displacement(lo)?;
        let d_hi = map.displacement(hi)?;
        if (d_lo > T::zero()) != (d_hi > T::zero()) {
            return None;
        }
        let up = d_lo > T::zero();
        let (r, d) = golden_extremum(&map, lo, hi, up)?;
        Some((r, if up { d } else { -d }))
    };
    for _ in 0..200 {
        let mu = (more + fewer) / T::lit(2.0);
        let (r, g) = gap(mu)?;
        if g.abs() < opts.fixed_point_tol / T::lit(2.0) {
            return Some((mu, r));
        }
        if g < T::zero() {
            more = mu;
        } else {
            fewer = mu;
        }
        if (more - fewer).abs() <= T::epsilon() * (T::one() + mu.abs()) {
            return Some((mu, r));
        }
    }
    None
}

/// Largest number of times a sweep step is halved to resolve a count jump.
pub const MAX_HALVINGS: usize = 6;

/// Runs the plan leg by leg, recording a census at every step and
/// localizing every change of a per-anchor cycle count.
pub fn sweep<T: Real>(plan: &SweepPlan<T>, opts: &CycleOptions<T>) -> Result<SweepLog<T>, RotateError> {
    plan.validate()?;
    let mut log = SweepLog {
        snapshots: Vec::new(),
        events: Vec::new(),
        monotonicity_violations: Vec::new(),
        parity_violations: Vec::new(),
        aborted: None,
    };
    let mut sys = plan.template.clone();
    for leg in &plan.order {
        let from = leg.from.unwrap_or_else(|| leg.slot.get(&sys).expect("slot validated"));
        let range = (leg.to - from).abs();
        let width = (T::lit(1e-6) * range).max(T::lit(1e-12));
        let values: Vec<T> = (0..=leg.steps)
            .map(|i| from + (leg.to - from) * T::from_usize(i).unwrap() / T::from_usize(leg.steps).unwrap())
            .collect();
        let mut prev: Option<(T, CycleCensus<T>)> = None;
        for &v in &values {
            let cur_sys = leg.slot.set(&sys, v);
            let cur = census(&cur_sys, opts);
            if cur.anchors.iter().all(|a| a.ok_samples == 0) && !cur.anchors.is_empty() {
                log.aborted = Some(format!("census failed at {} = {}", leg.slot, v));
                log.snapshots.push(Snapshot { slot: leg.slot, param_value: v, system: leg.slot.set(&sys, v), census: cur });
                return Ok(log);
            }
            if let Some((pv, pc)) = prev.take() {
                refine_step(&sys, leg.slot, (pv, &pc), (v, &cur), opts, width, 0, &mut log);
            }
            log.snapshots.push(Snapshot { slot: leg.slot, param_value: v, system: leg.slot.set(&sys, v), census: cur.clone() });
            prev = Some((v, cur));
        }
        sys = leg.slot.set(&sys, leg.to);
    }
    Ok(log)
}

#[allow(clippy::too_many_arguments)]
fn refine_step<T: Real>(
    sys: &LienardSystem<T>,
    slot: Slot,
    lo: (T, &CycleCensus<T>),
    hi: (T, &CycleCensus<T>),
    opts: &CycleOptions<T>,
    width: T,
    depth: usize,
    log: &mut SweepLog<T>,
) {
    let a = counts_per_anchor(lo.1);
    let b = counts_per_anchor(hi.1);
    let jump = a.iter().zip(&b).map(|(x, y)| x.1.abs_diff(y.1)).max().unwrap_or(0);
    let (s0, s1) = if lo.0 < hi.0 { (lo.0, hi.0) } else { (hi.0, lo.0) };
    // Trace zeros in the half-open step from `lo` toward `hi`.
    let hopfs: Vec<BifurcationEvent<T>> = hopf_scan(sys, slot, (s0, s1))
        .unwrap_or_default()
        .into_iter()
        .filter(|e| e.param_value != hi.0)
        .collect();
    let hopf_inside = !hopfs.is_empty();
    let too_big = jump > 2 || (jump == 2 && hopf_inside);
    if too_big && depth < MAX_HALVINGS {
        let m = (lo.0 + hi.0) / T::lit(2.0);
        let cm = census(&slot.set(sys, m), opts);
        refine_step(sys, slot, lo, (m, &cm), opts, width, depth + 1, log);
        log.snapshots.push(Snapshot { slot, param_value: m, system: slot.set(sys, m), census: cm.clone() });
        refine_step(sys, slot, (m, &cm), hi, opts, width, depth + 1, log);
        return;
    }
    if too_big {
        log.parity_violations.push(format!(
            "count jump of {} between {} = {} and {}",
            jump, slot, lo.0, hi.0
        ));
    }
    monotone_between(lo.1, hi.1, hi.0 - lo.0, slot, &mut log.monotonicity_violations);
    log.events.extend(hopfs);
    for ((x, na), (_, nb)) in a.iter().zip(&b) {
        if na != nb {
            let s_lo = slot.set(sys, lo.0);
            let near = |e: &BifurcationEvent<T>| (e.anchor.x - *x).abs() < T::lit(1e-6) * (T::one() + x.abs());
            let hopf_logged = log.events.iter().any(|e| e.kind == EventKind::Hopf && near(e));
            if let Some(ev) = classify_change(&s_lo, slot, lo, hi, *x, opts, width, hopf_logged) {
                log.events.push(ev);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionStep<T> {
    pub alpha_even: Vec<T>,
    pub totals: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Construction<T> {
    pub system: CanonicalSystem<T>,
    pub census: CycleCensus<T>,
    /// `(k, cycles wanted around other anchors)`.
    pub target: (usize, usize),
    pub reached: bool,
    pub adjustments: usize,
    pub history: Vec<ConstructionStep<T>>,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstructOptions<T> {
    /// Ratio between consecutive rung magnitudes.
    pub ratio: T,
    /// Maximum number of ladder adjustments.
    pub budget: usize,
    /// Sign of the top rung `a_{2k}` when no other anchor constrains it.
    /// Negative makes the innermost origin cycle unstable.
    pub leading: Sign,
    /// Relative offset of `a_{2k}` from the Hopf value of the tuned
    /// non-origin anchor.
    pub hopf_offset: T,
}

impl<T: Real> Default for ConstructOptions<T> {
    fn default() -> Self {
        Self { ratio: T::lit(0.1), budget: 10, leading: Sign::Minus, hopf_offset: T::lit(0.01) }
    }
}

fn score(got: (usize, usize), target: (usize, usize)) -> (usize, usize) {
    // Lexicographic: distance to target, then overshoot.
    let miss = target.0.abs_diff(got.0) + target.1.abs_diff(got.1);
    let over = got.0.saturating_sub(target.0) + got.1.saturating_sub(target.1);
    (miss, over)
}

/// Builds a canonical system with `k` cycles around the origin (and, when
/// `l >= 1`, a cycle around the non-origin anti-saddle nearest to the
/// origin) by a sign-alternating magnitude ladder with adaptive shrinking.
pub fn construct_configuration<T: Real>(
    k: usize,
    l: usize,
    beta_odd: &[T],
    even_signs: &[Sign],
    copts: &ConstructOptions<T>,
    opts: &CycleOptions<T>,
) -> Result<Construction<T>, RotateError> {
    let zero = CanonicalSystem::new(k, l, vec![T::zero(); k + 1], beta_odd.to_vec(), even_signs.to_vec())?;
    let others: Vec<SingularPoint<T>> =
        anti_saddles(&zero.expand()).into_iter().filter(|p| !p.x.is_zero()).collect();
    let target = (k, if k >= 1 { l.min(others.len()) } else { 0 });
    let tuned = others
        .iter()
        .min_by(|a, b| a.x.abs().partial_cmp(&b.x.abs()).unwrap())
        .cloned()
        .filter(|_| target.1 > 0);

    let mut history = Vec::new();
    let mut best: Option<(CanonicalSystem<T>, CycleCensus<T>)> = None;
    let mut consider = |c: CanonicalSystem<T>, history: &mut Vec<ConstructionStep<T>>| -> bool {
        let cen = census(&c.expand(), opts);
        let got = cen.totals_pair();
        history.push(ConstructionStep { alpha_even: c.alpha_even.clone(), totals: got });
        let better = best.as_ref().is_none_or(|(_, b)| score(got, target) < score(b.totals_pair(), target));
        if better {
            best = Some((c, cen));
        }
        got == target
    };

    // Extra shrink factor per rung (rung n is a_{2(k-n)}).
    let mut scales = vec![T::one(); k + 1];
    let mut adjustments = 0;
    let mut reached = false;
    'outer: loop {
        match &tuned {
            None => {
                let mut ae = vec![T::zero(); k + 1];
                for n in 0..=k {
                    let sign = if n % 2 == 0 { copts.leading } else { copts.leading.flip() };
                    ae[k - n] = sign.value::<T>() * copts.ratio.powi(n as i32) * scales[n];
                }
                if consider(CanonicalSystem { alpha_even: ae, ..zero.clone() }, &mut history) {
                    reached = true;
                    break 'outer;
                }
            }
            Some(anchor) => {
                // The top rung parks the tuned anchor just off its Hopf
                // value; lower rungs are small and tried with both signs,
                // since the restoring terms can flip which side of the
                // origin's Hopf point carries the cycle.
                for flip in [false, true] {
                    for off_sign in [T::one(), -T::one()] {
                        let mut ae = vec![T::zero(); k + 1];
                        for n in 1..=k {
                            let base = if n % 2 == 0 { copts.leading } else { copts.leading.flip() };
                            let sign = if flip { base.flip() } else { base };
                            ae[k - n] = sign.value::<T>() * copts.ratio.powi(n as i32) * scales[n];
                        }
                        let probe = CanonicalSystem { alpha_even: ae.clone(), ..zero.clone() }.expand();
                        let ev = hopf_scan(&probe, Slot::Alpha(2 * k), (-T::lit(1e6), T::lit(1e6)))?;
                        let Some(h) = ev.iter().find(|e| (e.anchor.x - anchor.x).abs() < T::lit(1e-9)) else {
                            continue;
                        };
                        let top = h.param_value;
                        ae[k] = top + off_sign * copts.hopf_offset * top.abs().max(T::lit(1e-3));
                        // Rescale the lower rungs to the top magnitude.
                        let scale = ae[k].abs();
                        for v in ae.iter_mut().take(k) {
                            *v = *v * scale;
                        }
                        // Re-solve the top rung with the final lower rungs.
                        let probe = CanonicalSystem { alpha_even: ae.clone(), ..zero.clone() }.expand();
                        let ev = hopf_scan(&probe, Slot::Alpha(2 * k), (-T::lit(1e6), T::lit(1e6)))?;
                        if let Some(h) = ev.iter().find(|e| (e.anchor.x - anchor.x).abs() < T::lit(1e-9)) {
                            let top = h.param_value;
                            ae[k] = top + off_sign * copts.hopf_offset * top.abs().max(T::lit(1e-3));
                        }
                        if consider(CanonicalSystem { alpha_even: ae, ..zero.clone() }, &mut history) {
                            reached = true;
                            break 'outer;
                        }
                    }
                }
            }
        }
        if adjustments >= copts.budget || k == 0 {
            break;
        }
        adjustments += 1;
        // Super-geometric shrink: rung n loses another ratio^(n-1), so the
        // gap below the top rung stays fixed and deeper gaps widen.
        // With a single lower rung it simply shrinks by the ratio.
        for (n, s) in scales.iter_mut().enumerate().skip(1) {
            let e = if k == 1 { 1 } else { n as i32 - 1 };
            *s = *s * copts.ratio.powi(e);
        }
    }
    let (system, cen) = best.expect("at least one candidate evaluated");
    let diagnostic = (!reached).then(|| {
        format!(
            "reached {:?} instead of {:?} after {} adjustment(s)",
            cen.totals_pair(),
            target,
            adjustments
        )
    });
    Ok(Construction { system, census: cen, target, reached, adjustments, history, diagnostic })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleTrack<T> {
    pub anchor: T,
    pub stability: Stability,
    /// `r_star` at each parameter value, `None` once the cycle is lost.
    pub radii: Vec<Option<T>>,
    /// `+1` expanding, `-1` contracting, as the parameter increases.
    pub expected_direction: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport<T> {
    pub slot: Slot,
    pub values: Vec<T>,
    pub tracks: Vec<CycleTrack<T>>,
    pub result: Certification,
    pub reason: Option<String>,
}

/// Checks that every cycle present at `values[0]` moves monotonically as
/// the even damping slot runs through `values`: stable cycles expand and
/// unstable cycles contract as the parameter increases.
pub fn certify_rotation_monotonicity<T: Real>(
    template: &LienardSystem<T>,
    slot: Slot,
    values: &[T],
    opts: &CycleOptions<T>,
) -> Result<MonotonicityReport<T>, RotateError> {
    slot.check(template)?;
    if !slot.is_even_alpha() {
        return Err(RotateError::InvalidPlan(format!("{slot} is not an even damping slot")));
    }
    let censuses: Vec<CycleCensus<T>> = values.iter().map(|v| census(&slot.set(template, *v), opts)).collect();
    let mut report = MonotonicityReport {
        slot,
        values: values.to_vec(),
        tracks: Vec::new(),
        result: Certification::Pass,
        reason: None,
    };
    let Some(first) = censuses.first() else {
        return Ok(report);
    };
    for probe in first.all_cycles() {
        let Some(dir) = expected_motion(probe.stability) else { continue };
        let mut radii = vec![Some(probe.r_star)];
        let mut cur = *probe;
        for c in &censuses[1..] {
            let pool: Vec<LimitCycle<T>> = c.all_cycles().filter(|o| o.anchor == probe.anchor).copied().collect();
            match track(&cur, &pool) {
                Some(n) => {
                    cur = *n;
                    radii.push(Some(n.r_star));
                }
                None => radii.push(None),
            }
        }
        report.tracks.push(CycleTrack { anchor: probe.anchor, stability: probe.stability, radii, expected_direction: dir });
    }
    if report.tracks.is_empty() {
        report.result = Certification::Inconclusive;
        report.reason = Some("no probe cycles at the first parameter value".into());
        return Ok(report);
    }
    for t in &report.tracks {
        for (j, w) in t.radii.windows(2).enumerate() {
            let (Some(a), Some(b)) = (w[0], w[1]) else {
                report.result = Certification::Inconclusive;
                report.reason = Some(format!("cycle near r = {:?} lost between samples", t.radii[0]));
                continue;
            };
            let dp = values[j + 1] - values[j];
            if dp.is_zero() {
                continue;
            }
            let moved = (b - a) * dp.signum() * T::from_i8(t.expected_direction).unwrap();
            if !(moved > T::zero()) {
                report.result = Certification::Fail;
                report.reason = Some(format!(
                    "cycle moved from r = {a} to r = {b} as {slot} went from {} to {}",
                    values[j],
                    values[j + 1]
                ));
                return Ok(report);
            }
        }
    }
    Ok(report)
}
