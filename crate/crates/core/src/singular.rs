//! Finite and infinite singular points, contour indices, and the two index
//! bookkeeping checks (global balance and saddle/anti-saddle alternation).

use serde::Serialize;

use crate::poly::BivariatePoly;
use crate::roots::real_roots;
use crate::scalar::Real;
use crate::system::LienardSystem;

/// `|trace|` below this at a point with positive determinant is labelled a
/// center candidate instead of a focus.
pub const CENTER_TRACE_TOL: f64 = 1e-10;
/// `|det|` below this is treated as a degenerate linearization.
pub const DEGENERATE_DET_TOL: f64 = 1e-12;
/// Maximum residue of the accumulated winding before rounding.
pub const WINDING_RESIDUE: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointKind {
    Saddle,
    Node,
    Focus,
    CenterCandidate,
    SaddleNode,
    Degenerate,
}

impl PointKind {
    pub fn is_anti_saddle(self) -> bool {
        matches!(self, PointKind::Node | PointKind::Focus | PointKind::CenterCandidate)
    }

    /// Kind of a point with the given Jacobian trace and determinant.
    pub fn from_jacobian<T: Real>(trace: T, det: T) -> Self {
        if det.abs() < T::lit(DEGENERATE_DET_TOL) {
            PointKind::Degenerate
        } else if det < T::zero() {
            PointKind::Saddle
        } else if trace.abs() < T::lit(CENTER_TRACE_TOL) {
            PointKind::CenterCandidate
        } else if trace * trace >= T::lit(4.0) * det {
            PointKind::Node
        } else {
            PointKind::Focus
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularPoint<T> {
    /// Abscissa; finite singular points all lie on `y = 0`.
    pub x: T,
    pub trace: T,
    pub det: T,
    pub kind: PointKind,
    pub index: i32,
}

impl<T: Real> SingularPoint<T> {
    pub fn is_anti_saddle(&self) -> bool {
        self.kind.is_anti_saddle()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IndexError {
    #[error("angle increment {increment} exceeds pi/2; increase samples")]
    UnderSampled { increment: f64 },
    #[error("field vanishes on the contour near ({x}, {y})")]
    SingularOnContour { x: f64, y: f64 },
    #[error("winding {winding} is not within {WINDING_RESIDUE} of an integer")]
    Residue { winding: f64 },
    #[error("invalid contour: {0}")]
    InvalidContour(String),
}

/// Winding number of `field` around the circle of `radius` about `center`,
/// sampled at `samples` equally spaced points.
pub fn winding_number<T, F>(field: F, center: [T; 2], radius: T, samples: usize) -> Result<i32, IndexError>
where
    T: Real,
    F: Fn(T, T) -> (T, T),
{
    if samples < 4 || !(radius > T::zero()) {
        return Err(IndexError::InvalidContour(format!(
            "radius {radius} with {samples} samples"
        )));
    }
    let two_pi = T::PI() + T::PI();
    let n = T::from_usize(samples).expect("sample count fits");
    let pts: Vec<(T, T, T, T)> = (0..samples)
        .map(|i| {
            let th = two_pi * T::from_usize(i).expect("index fits") / n;
            let x = center[0] + radius * th.cos();
            let y = center[1] + radius * th.sin();
            let (p, q) = field(x, y);
            (x, y, p, q)
        })
        .collect();
    let max_mag = pts.iter().fold(T::zero(), |m, p| m.max(p.2.hypot(p.3)));
    for &(x, y, p, q) in &pts {
        let mag = p.hypot(q);
        if !mag.is_finite() || mag <= T::min_positive_value() || mag < T::lit(1e-14) * max_mag {
            return Err(IndexError::SingularOnContour { x: x.as_f64(), y: y.as_f64() });
        }
    }
    let mut total = T::zero();
    for i in 0..samples {
        let (_, _, p0, q0) = pts[i];
        let (_, _, p1, q1) = pts[(i + 1) % samples];
        // Angle from (p0, q0) to (p1, q1) in (-pi, pi].
        let inc = (p0 * q1 - q0 * p1).atan2(p0 * p1 + q0 * q1);
        if inc.abs() > T::FRAC_PI_2() {
            return Err(IndexError::UnderSampled { increment: inc.as_f64() });
        }
        total = total + inc;
    }
    let w = total / two_pi;
    let rounded = w.round();
    if (w - rounded).abs() >= T::lit(WINDING_RESIDUE) {
        return Err(IndexError::Residue { winding: w.as_f64() });
    }
    Ok(rounded.to_i32().expect("winding fits in i32"))
}

/// Contour index of the system's field on a circle.
pub fn poincare_index<T: Real>(
    sys: &LienardSystem<T>,
    center: [T; 2],
    radius: T,
    samples: usize,
) -> Result<i32, IndexError> {
    let f = sys.damping();
    let g = sys.restoring();
    winding_number(|x, y| (y, y * f.eval(&x) - g.eval(&x)), center, radius, samples)
}

/// Evaluation budget of [`adaptive_winding`].
pub const MAX_CONTOUR_EVALS: usize = 1 << 20;

/// Like [`winding_number`], but starts from 256 samples and bisects every
/// arc whose angle increment exceeds pi/4, so sharp turns of the field
/// (typical near degenerate points) are resolved locally.
pub fn adaptive_winding<T, F>(field: F, center: [T; 2], radius: T) -> Result<i32, IndexError>
where
    T: Real,
    F: Fn(T, T) -> (T, T),
{
    if !(radius > T::zero()) {
        return Err(IndexError::InvalidContour(format!("radius {radius}")));
    }
    let two_pi = T::PI() + T::PI();
    let eval = |th: T| {
        let x = center[0] + radius * th.cos();
        let y = center[1] + radius * th.sin();
        let (p, q) = field(x, y);
        (x, y, p, q)
    };
    let base = 256;
    let n = T::from_usize(base).unwrap();
    let mut pts: Vec<(T, (T, T, T, T))> = (0..=base)
        .map(|i| {
            let th = two_pi * T::from_usize(i).unwrap() / n;
            (th, eval(th))
        })
        .collect();
    pts[base].1 = pts[0].1;
    let max_mag = pts.iter().fold(T::zero(), |m, p| m.max(p.1 .2.hypot(p.1 .3)));
    let floor = T::lit(1e-14) * max_mag;
    let check = |v: &(T, T, T, T)| {
        let mag = v.2.hypot(v.3);
        if !mag.is_finite() || mag <= T::min_positive_value() || mag < floor {
            Err(IndexError::SingularOnContour { x: v.0.as_f64(), y: v.1.as_f64() })
        } else {
            Ok(())
        }
    };
    for p in &pts {
        check(&p.1)?;
    }
    let angle = |a: &(T, T, T, T), b: &(T, T, T, T)| (a.2 * b.3 - a.3 * b.2).atan2(a.2 * b.2 + a.3 * b.3);
    let mut evals = base;
    let mut total = T::zero();
    for w in pts.windows(2) {
        // Depth-first bisection of the arc [w0, w1].
        let mut stack = vec![(w[0], w[1])];
        while let Some((a, b)) = stack.pop() {
            let inc = angle(&a.1, &b.1);
            if inc.abs() <= T::FRAC_PI_4() {
                total = total + inc;
                continue;
            }
            if evals >= MAX_CONTOUR_EVALS || (b.0 - a.0) <= T::epsilon() * two_pi {
                return Err(IndexError::UnderSampled { increment: inc.as_f64() });
            }
            let th = (a.0 + b.0) / T::lit(2.0);
            let mid = (th, eval(th));
            check(&mid.1)?;
            evals += 1;
            // Pushed in reverse so the arc is summed left to right.
            stack.push((mid, b));
            stack.push((a, mid));
        }
    }
    let w = total / two_pi;
    let rounded = w.round();
    if (w - rounded).abs() >= T::lit(WINDING_RESIDUE) {
        return Err(IndexError::Residue { winding: w.as_f64() });
    }
    Ok(rounded.to_i32().expect("winding fits in i32"))
}

pub fn contour_index<T: Real>(sys: &LienardSystem<T>, center: [T; 2], radius: T) -> Result<i32, IndexError> {
    let f = sys.damping();
    let g = sys.restoring();
    adaptive_winding(|x, y| (y, y * f.eval(&x) - g.eval(&x)), center, radius)
}

/// Radius for an isolating contour around `sorted[i]`: a quarter of the gap
/// to the nearest neighbour, capped at 0.1.
fn isolating_radius<T: Real>(sorted: &[T], i: usize) -> T {
    let mut gap = T::lit(0.4);
    if i > 0 {
        gap = gap.min(sorted[i] - sorted[i - 1]);
    }
    if i + 1 < sorted.len() {
        gap = gap.min(sorted[i + 1] - sorted[i]);
    }
    gap / T::lit(4.0)
}

/// All real roots of `g`, sorted, classified from the Jacobian
/// `[[0, 1], [-g'(x), f(x)]]`. Roots closer than the separation tolerance
/// are reported as saddle-node candidates; the first point of such a
/// cluster carries the contour index of the whole cluster and the rest
/// carry 0.
pub fn find_finite_singularities<T: Real>(sys: &LienardSystem<T>) -> Vec<SingularPoint<T>> {
    let g = sys.restoring();
    let dg = g.derivative();
    let f = sys.damping();
    let found = real_roots(&g);
    let xs = found.roots;
    let mut clustered = vec![false; xs.len()];
    for &(a, b) in &found.close_pairs {
        clustered[a] = true;
        clustered[b] = true;
    }
    // Representatives of distinct clusters, for contour radii.
    let mut reps: Vec<T> = Vec::new();
    let mut rep_of = Vec::with_capacity(xs.len());
    for (i, &x) in xs.iter().enumerate() {
        let joins_prev = i > 0 && found.close_pairs.contains(&(i - 1, i));
        if !joins_prev {
            reps.push(x);
        }
        rep_of.push((reps.len() - 1, !joins_prev));
    }
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let trace = f.eval(&x);
            let det = dg.eval(&x);
            if clustered[i] {
                let (rep, first) = rep_of[i];
                let index = if first {
                    let r = isolating_radius(&reps, rep).max(T::lit(1e-5));
                    contour_index(sys, [reps[rep], T::zero()], r).unwrap_or(0)
                } else {
                    0
                };
                return SingularPoint { x, trace, det, kind: PointKind::SaddleNode, index };
            }
            let kind = PointKind::from_jacobian(trace, det);
            let index = match kind {
                PointKind::Saddle => -1,
                PointKind::Node | PointKind::Focus | PointKind::CenterCandidate => 1,
                _ => {
                    let r = isolating_radius(&reps, rep_of[i].0);
                    contour_index(sys, [x, T::zero()], r).unwrap_or(0)
                }
            };
            SingularPoint { x, trace, det, kind, index }
        })
        .collect()
}

pub fn has_saddle_node<T: Real>(points: &[SingularPoint<T>]) -> bool {
    points
        .iter()
        .any(|p| matches!(p.kind, PointKind::SaddleNode | PointKind::Degenerate))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Alternation {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "n/a")]
    NotApplicable,
}

/// Alternation check on an x-sorted sequence of kinds. Any saddle-node or
/// degenerate entry makes the check not applicable.
pub fn check_alternation_kinds(kinds: &[PointKind]) -> Alternation {
    if kinds
        .iter()
        .any(|k| matches!(k, PointKind::SaddleNode | PointKind::Degenerate))
    {
        return Alternation::NotApplicable;
    }
    let ok = kinds
        .windows(2)
        .all(|w| (w[0] == PointKind::Saddle) != (w[1] == PointKind::Saddle));
    if ok {
        Alternation::Pass
    } else {
        Alternation::Fail
    }
}

pub fn check_alternation<T: Real>(sys: &LienardSystem<T>) -> Alternation {
    let kinds: Vec<PointKind> = find_finite_singularities(sys).iter().map(|p| p.kind).collect();
    check_alternation_kinds(&kinds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    XEnds,
    YEnds,
    /// Equator point in a direction other than the axes (chart `U1`,
    /// `u = y/x` non-zero).
    Oblique,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfiniteKind {
    Node,
    Saddle,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfinitePoint<T> {
    pub axis: Axis,
    /// Whether the chart field actually vanishes there. The axis ends are
    /// always reported; a regular axis end has kind `other` and index 0.
    pub singular: bool,
    /// Chart coordinate on the equator: `u = y/x` for `x-ends` and
    /// oblique points, `v = x/y` for `y-ends`.
    pub slope: T,
    pub kind: InfiniteKind,
    pub trace: T,
    pub det: T,
    /// Eigenvalues `(re, im)` of the chart linearization.
    pub eigenvalues: [(T, T); 2],
    /// Contour index of the chart field (antipodal pair counted once).
    pub index: Option<i32>,
    /// Commonly stated picture: node at the x-ends, saddle at the y-ends.
    pub claimed_kind: Option<InfiniteKind>,
    pub matches_claim: Option<bool>,
}

/// Chart fields of the Poincare compactification, both with the common
/// power of the equator coordinate removed.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartFields<T> {
    /// `(u', z')` in chart `u = y/x, z = 1/x`.
    pub u1: (BivariatePoly<T>, BivariatePoly<T>),
    /// `(v', w')` in chart `v = x/y, w = 1/y`.
    pub u2: (BivariatePoly<T>, BivariatePoly<T>),
    /// Power removed, `max(deg g, deg f + 1) - 1`.
    pub m: u32,
}

pub fn chart_fields<T: Real>(sys: &LienardSystem<T>) -> ChartFields<T> {
    let g = sys.restoring();
    let f = sys.damping();
    let dg = g.degree().unwrap_or(1);
    let df1 = f.degree().map_or(0, |d| d + 1);
    let d = dg.max(df1).max(1) as u32;
    let m = d - 1;

    // Chart U1: u' = -sum b_j z^{m+1-j} + u sum a_i z^{m-i} - u^2 z^m, z' = -u z^{m+1}.
    let mut up = BivariatePoly::zero();
    for (j, b) in g.coeffs().iter().enumerate().skip(1) {
        up.add_term(0, m + 1 - j as u32, -*b);
    }
    for (i, a) in f.coeffs().iter().enumerate() {
        up.add_term(1, m - i as u32, *a);
    }
    up.add_term(2, m, -T::one());
    let zp = BivariatePoly::monomial(1, m + 1, -T::one());

    // Chart U2: v' = w^m + sum b_j v^{j+1} w^{m+1-j} - sum a_i v^{i+1} w^{m-i},
    //           w' = sum b_j v^j w^{m+2-j} - sum a_i v^i w^{m+1-i}.
    let mut vp = BivariatePoly::monomial(0, m, T::one());
    let mut wp = BivariatePoly::zero();
    for (j, b) in g.coeffs().iter().enumerate().skip(1) {
        let j = j as u32;
        vp.add_term(j + 1, m + 1 - j, *b);
        wp.add_term(j, m + 2 - j, *b);
    }
    for (i, a) in f.coeffs().iter().enumerate() {
        let i = i as u32;
        vp.add_term(i + 1, m - i, -*a);
        wp.add_term(i, m + 1 - i, -*a);
    }
    ChartFields { u1: (up, zp), u2: (vp, wp), m }
}

fn partial_x<T: Real>(p: &BivariatePoly<T>, x: T, y: T) -> T {
    p.terms()
        .filter(|((i, _), _)| *i > 0)
        .map(|(&(i, j), c)| *c * T::from_u32(i).unwrap() * x.powi(i as i32 - 1) * y.powi(j as i32))
        .fold(T::zero(), |a, b| a + b)
}

fn partial_y<T: Real>(p: &BivariatePoly<T>, x: T, y: T) -> T {
    p.terms()
        .filter(|((_, j), _)| *j > 0)
        .map(|(&(i, j), c)| *c * T::from_u32(j).unwrap() * x.powi(i as i32) * y.powi(j as i32 - 1))
        .fold(T::zero(), |a, b| a + b)
}

fn eigen2<T: Real>(trace: T, det: T) -> [(T, T); 2] {
    let disc = trace * trace - T::lit(4.0) * det;
    let half = T::lit(0.5);
    if disc >= T::zero() {
        let s = disc.sqrt();
        [((trace - s) * half, T::zero()), ((trace + s) * half, T::zero())]
    } else {
        let s = (-disc).sqrt();
        [(trace * half, -s * half), (trace * half, s * half)]
    }
}

fn linearize<T: Real>(
    field: &(BivariatePoly<T>, BivariatePoly<T>),
    at: [T; 2],
) -> (T, T, [(T, T); 2], InfiniteKind) {
    let (p, q) = field;
    let (a, b) = (partial_x(p, at[0], at[1]), partial_y(p, at[0], at[1]));
    let (c, d) = (partial_x(q, at[0], at[1]), partial_y(q, at[0], at[1]));
    let trace = a + d;
    let det = a * d - b * c;
    let eig = eigen2(trace, det);
    let scale = T::one().max(a.abs()).max(b.abs()).max(c.abs()).max(d.abs());
    let kind = if det.abs() < T::lit(DEGENERATE_DET_TOL) * scale * scale {
        InfiniteKind::Other
    } else if det < T::zero() {
        InfiniteKind::Saddle
    } else if trace * trace >= T::lit(4.0) * det {
        InfiniteKind::Node
    } else {
        // A focus cannot sit on the invariant equator; treat as degenerate.
        InfiniteKind::Other
    };
    (trace, det, eig, kind)
}

/// Contour index of a chart field at an equator point `(s, 0)`, on a
/// circle kept well away from `obstacles`.
fn chart_index<T: Real>(
    field: &(BivariatePoly<T>, BivariatePoly<T>),
    at: T,
    obstacles: &[[T; 2]],
) -> Option<i32> {
    // The only other zeros of a chart field are the listed obstacles, so a
    // generous radius is safe and keeps high-order center manifolds above
    // the magnitude floor.
    let mut r = T::lit(0.5);
    for o in obstacles {
        let dist = (o[0] - at).hypot(o[1]);
        if dist > T::zero() {
            r = r.min(dist / T::lit(3.0));
        }
    }
    let (p, q) = field;
    for _ in 0..4 {
        if let Ok(i) = adaptive_winding(|x, y| (p.eval(&x, &y), q.eval(&x, &y)), [at, T::zero()], r) {
            return Some(i);
        }
        r = r / T::lit(2.0);
    }
    None
}

/// Singular points on the equator of the Poincare sphere.
///
/// The two axis ends are always reported (kind `other`, index 0 when the
/// chart field does not vanish there); oblique equator points are added
/// when the leading terms of `f` and `g` balance.
pub fn classify_infinite<T: Real>(sys: &LienardSystem<T>) -> Vec<InfinitePoint<T>> {
    let charts = chart_fields(sys);
    let finite: Vec<T> = real_roots(&sys.restoring()).roots;

    // Equator points of chart U1 are the real roots of u'(u, 0).
    let mut eq = Vec::new();
    for (&(i, j), c) in charts.u1.0.terms() {
        if j == 0 {
            if eq.len() <= i as usize {
                eq.resize(i as usize + 1, T::zero());
            }
            eq[i as usize] = *c;
        }
    }
    let eq = crate::poly::Polynomial::new(eq);
    let u_roots = if eq.is_zero() { Vec::new() } else { real_roots(&eq).roots };

    // Images of finite singular points in each chart.
    let finite_u1: Vec<[T; 2]> = finite
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| [T::zero(), T::one() / *x])
        .collect();
    let mut out = Vec::new();

    let x_end_singular = u_roots.iter().any(|u| u.is_zero()) || eq.is_zero();
    let mut push = |axis: Axis, slope: T, singular: bool, field: &(BivariatePoly<T>, BivariatePoly<T>), obstacles: Vec<[T; 2]>| {
        let (trace, det, eigenvalues, mut kind) = linearize(field, [slope, T::zero()]);
        let index = if singular { chart_index(field, slope, &obstacles) } else { Some(0) };
        if !singular {
            kind = InfiniteKind::Other;
        }
        let claimed_kind = match axis {
            Axis::XEnds => Some(InfiniteKind::Node),
            Axis::YEnds => Some(InfiniteKind::Saddle),
            Axis::Oblique => None,
        };
        let matches_claim = claimed_kind.map(|c| singular && c == kind);
        out.push(InfinitePoint {
            axis,
            singular,
            slope,
            kind,
            trace,
            det,
            eigenvalues,
            index,
            claimed_kind,
            matches_claim,
        });
    };

    let mut obstacles_u1 = finite_u1.clone();
    obstacles_u1.extend(u_roots.iter().map(|u| [*u, T::zero()]));
    push(Axis::XEnds, T::zero(), x_end_singular, &charts.u1, obstacles_u1.clone());
    for &u in u_roots.iter().filter(|u| !u.is_zero()) {
        push(Axis::Oblique, u, true, &charts.u1, obstacles_u1.clone());
    }

    // Chart U2: y-ends at v = 0. Other equator points show up as v = 1/u,
    // finite points never appear (they have y = 0).
    let (vp, wp) = &charts.u2;
    let y_end_singular = vp.eval(&T::zero(), &T::zero()).is_zero() && wp.eval(&T::zero(), &T::zero()).is_zero();
    let obstacles_u2: Vec<[T; 2]> = u_roots
        .iter()
        .filter(|u| !u.is_zero())
        .map(|u| [T::one() / *u, T::zero()])
        .collect();
    push(Axis::YEnds, T::zero(), y_end_singular, &charts.u2, obstacles_u2);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LedgerStatus {
    Balanced,
    Unbalanced,
    /// A finite point is not simple, or an infinite point has index other
    /// than +1 or -1, so the node/saddle counts are not defined.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexLedger {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "Nf")]
    pub n_f: u32,
    #[serde(rename = "Nc")]
    pub n_c: u32,
    #[serde(rename = "C")]
    pub c: u32,
    #[serde(rename = "Np")]
    pub n_prime: u32,
    #[serde(rename = "Cp")]
    pub c_prime: u32,
    pub balanced: bool,
    pub status: LedgerStatus,
    /// Finite indices plus one index per antipodal pair at infinity; equals
    /// 1 whenever every contour was resolved.
    pub sphere_sum: Option<i32>,
}

/// Fills the ledger and checks `N + Nf + Nc + N' = C + C' + 1`.
///
/// Infinite points count toward `N'` or `C'` by their contour index, so
/// semi-hyperbolic and nilpotent points with index +1 or -1 are counted
/// as node-like or saddle-like.
pub fn check_first_index_theorem<T: Real>(sys: &LienardSystem<T>) -> IndexLedger {
    let finite = find_finite_singularities(sys);
    let infinite = classify_infinite(sys);
    ledger_from(&finite, &infinite)
}

pub fn ledger_from<T: Real>(finite: &[SingularPoint<T>], infinite: &[InfinitePoint<T>]) -> IndexLedger {
    let mut l = IndexLedger {
        n: 0,
        n_f: 0,
        n_c: 0,
        c: 0,
        n_prime: 0,
        c_prime: 0,
        balanced: false,
        status: LedgerStatus::Inconclusive,
        sphere_sum: None,
    };
    let mut conclusive = true;
    for p in finite {
        match p.kind {
            PointKind::Node => l.n += 1,
            PointKind::Focus => l.n_f += 1,
            PointKind::CenterCandidate => l.n_c += 1,
            PointKind::Saddle => l.c += 1,
            PointKind::SaddleNode | PointKind::Degenerate => conclusive = false,
        }
    }
    let mut sum: Option<i32> = Some(finite.iter().map(|p| p.index).sum());
    for p in infinite.iter().filter(|p| p.singular) {
        match p.index {
            Some(1) => l.n_prime += 1,
            Some(-1) => l.c_prime += 1,
            _ => conclusive = false,
        }
        sum = match (sum, p.index) {
            (Some(s), Some(i)) => Some(s + i),
            _ => None,
        };
    }
    l.sphere_sum = sum;
    if conclusive {
        l.balanced = l.n + l.n_f + l.n_c + l.n_prime == l.c + l.c_prime + 1;
        l.status = if l.balanced { LedgerStatus::Balanced } else { LedgerStatus::Unbalanced };
    }
    l
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularReport<T> {
    pub finite: Vec<SingularPoint<T>>,
    pub infinite: Vec<InfinitePoint<T>>,
    pub ledger: IndexLedger,
    pub alternation: Alternation,
}

pub fn analyze<T: Real>(sys: &LienardSystem<T>) -> SingularReport<T> {
    let finite = find_finite_singularities(sys);
    let infinite = classify_infinite(sys);
    let ledger = ledger_from(&finite, &infinite);
    let kinds: Vec<PointKind> = finite.iter().map(|p| p.kind).collect();
    SingularReport { alternation: check_alternation_kinds(&kinds), finite, infinite, ledger }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(alpha: &[f64], beta: &[f64]) -> LienardSystem<f64> {
        LienardSystem::from_coeffs(alpha.to_vec(), beta.to_vec()).unwrap()
    }

    #[test]
    fn three_points_for_quadratic_restoring() {
        let s = sys(&[0.1, 1.0, -1.0], &[-3.0, 1.0]);
        let pts = find_finite_singularities(&s);
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[0].x, 0.0);
        assert_eq!(pts[0].det, 1.0);
        assert!((pts[1].x - 0.381966011250105).abs() < 1e-12);
        assert_eq!(pts[1].kind, PointKind::Saddle);
        assert!(pts[2].is_anti_saddle());
        assert_eq!(check_alternation(&s), Alternation::Pass);
    }

    #[test]
    fn harmonic_origin_is_center_candidate() {
        let pts = find_finite_singularities(&sys(&[0.0], &[]));
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].kind, PointKind::CenterCandidate);
    }

    #[test]
    fn negative_control_alternation() {
        use PointKind::*;
        assert_eq!(check_alternation_kinds(&[Focus, Node]), Alternation::Fail);
        assert_eq!(check_alternation_kinds(&[Focus]), Alternation::Pass);
        assert_eq!(check_alternation_kinds(&[Saddle, SaddleNode]), Alternation::NotApplicable);
    }

    #[test]
    fn contour_indices() {
        let s = sys(&[0.1, 1.0, -1.0], &[-3.0, 1.0]);
        assert_eq!(poincare_index(&s, [0.0, 0.0], 0.1, 512), Ok(1));
        assert_eq!(poincare_index(&s, [0.381966, 0.0], 0.1, 512), Ok(-1));
        assert_eq!(contour_index(&s, [1.3, 0.0], 1.7), Ok(1));
        assert_eq!(poincare_index(&s, [1.2, 3.0], 0.5, 512), Ok(0));
    }

    #[test]
    fn under_sampling_is_refused() {
        let s = sys(&[0.1, 1.0, -1.0], &[-3.0, 1.0]);
        assert!(matches!(
            poincare_index(&s, [1.3, 0.0], 1.7, 4),
            Err(IndexError::UnderSampled { .. }) | Err(IndexError::Residue { .. })
        ));
    }

    #[test]
    fn linear_center_has_no_axis_singularities() {
        let inf = classify_infinite(&sys(&[0.0], &[]));
        assert_eq!(inf.len(), 2);
        assert!(inf.iter().all(|p| !p.singular && p.kind == InfiniteKind::Other));
        let l = check_first_index_theorem(&sys(&[0.0], &[]));
        assert_eq!(l.n_c, 1);
        assert!(l.balanced);
    }

    #[test]
    fn semi_hyperbolic_x_ends() {
        let inf = classify_infinite(&sys(&[0.1, 1.0, -1.0], &[]));
        let x = inf.iter().find(|p| p.axis == Axis::XEnds).unwrap();
        assert!(x.singular);
        assert_eq!(x.kind, InfiniteKind::Other);
        assert_eq!(x.trace, -1.0);
        assert_eq!(x.det, 0.0);
        let l = check_first_index_theorem(&sys(&[0.1, 1.0, -1.0], &[]));
        assert_eq!(l.sphere_sum, Some(1));
    }
}
