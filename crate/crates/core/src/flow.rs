//! Adaptive integration of the planar field.
//!
//! Dormand-Prince 5(4) with the standard fourth-order continuous extension,
//! used both for plain trajectories and for locating crossings of a ray
//! (the Poincare section behind the return map).

use std::io::{self, Write};

use serde::Serialize;

use crate::poly::Polynomial;
use crate::roots::real_roots;
use crate::scalar::Real;
use crate::system::LienardSystem;

pub type State<T> = [T; 2];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("step size underflow at t = {t}, last state ({x}, {y})")]
    StepUnderflow { t: f64, x: f64, y: f64 },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("step budget of {0} exhausted")]
    StepBudget(usize),
    #[error("invalid integrator options: {0}")]
    InvalidOptions(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowOptions<T> {
    /// Absolute local error tolerance.
    pub atol: T,
    /// Relative local error tolerance.
    pub rtol: T,
    /// Distance from the origin beyond which a trajectory counts as escaped.
    pub r_escape: T,
    pub h_max: T,
    pub max_steps: usize,
    /// Distance to a singular point that counts as convergence.
    pub converge_radius: T,
}

impl<T: Real> FlowOptions<T> {
    /// Mixed tolerance `tol` (atol = rtol) and escape radius
    /// `10 * max |singularity| + 10`.
    pub fn for_system(sys: &LienardSystem<T>, tol: T) -> Self {
        Self {
            atol: tol,
            rtol: tol,
            r_escape: default_escape_radius(sys),
            h_max: T::lit(0.5),
            max_steps: 2_000_000,
            converge_radius: T::lit(1e-9),
        }
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.atol = tol;
        self.rtol = tol;
        self
    }

    pub fn with_escape(mut self, r: T) -> Self {
        self.r_escape = r;
        self
    }

    fn validate(&self) -> Result<(), FlowError> {
        if !(self.atol > T::zero() && self.rtol > T::zero()) {
            return Err(FlowError::InvalidOptions("tolerances must be positive".into()));
        }
        if !(self.h_max > T::zero()) {
            return Err(FlowError::InvalidOptions("h_max must be positive".into()));
        }
        Ok(())
    }
}

pub fn default_escape_radius<T: Real>(sys: &LienardSystem<T>) -> T {
    let max_sing = real_roots(&sys.restoring())
        .roots
        .iter()
        .fold(T::zero(), |m, r| m.max(r.abs()));
    T::lit(10.0) * max_sing + T::lit(10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Terminal {
    TimeLimit,
    Escaped,
    ConvergedToPoint,
    EventCountReached,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory<T> {
    /// `(t, x, y)` at every accepted step.
    pub samples: Vec<(T, T, T)>,
    pub terminal: Terminal,
}

impl<T: Real> Trajectory<T> {
    pub fn last_state(&self) -> State<T> {
        let (_, x, y) = *self.samples.last().expect("trajectory has a start sample");
        [x, y]
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,x,y")?;
        for (t, x, y) in &self.samples {
            writeln!(w, "{t},{x},{y}")?;
        }
        Ok(())
    }
}

/// Ray `origin + s * direction`, `s > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ray<T> {
    pub origin: State<T>,
    pub direction: State<T>,
}

impl<T: Real> Ray<T> {
    /// Ray pointing in `+x` from `(x, 0)`.
    pub fn positive_x(x: T) -> Self {
        Self { origin: [x, T::zero()], direction: [T::one(), T::zero()] }
    }

    /// Signed distance of `p` from the ray's supporting line
    /// (`direction x (p - origin)`).
    pub fn side(&self, p: &State<T>) -> T {
        let dx = p[0] - self.origin[0];
        let dy = p[1] - self.origin[1];
        self.direction[0] * dy - self.direction[1] * dx
    }

    /// Coordinate of `p` along the ray.
    pub fn along(&self, p: &State<T>) -> T {
        (p[0] - self.origin[0]) * self.direction[0] + (p[1] - self.origin[1]) * self.direction[1]
    }

    pub fn point(&self, r: T) -> State<T> {
        [self.origin[0] + r * self.direction[0], self.origin[1] + r * self.direction[1]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossingSense {
    SameSense,
    Opposite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayEvent<T> {
    pub t: T,
    /// Distance from the ray origin.
    pub r: T,
    pub direction: CrossingSense,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingRun<T> {
    pub events: Vec<RayEvent<T>>,
    pub terminal: Terminal,
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Stepper state for one trajectory. Holds scratch buffers, so one
/// instance per thread.
pub struct Integrator<T> {
    damping: Polynomial<T>,
    restoring: Polynomial<T>,
    singular_x: Vec<T>,
    opts: FlowOptions<T>,
    t: T,
    y: State<T>,
    h: T,
    k1: State<T>,
    steps: usize,
    // Dense output of the last accepted step.
    t_prev: T,
    h_prev: T,
    rcont: [State<T>; 5],
}

impl<T: Real> Integrator<T> {
    pub fn new(sys: &LienardSystem<T>, opts: FlowOptions<T>) -> Result<Self, FlowError> {
        opts.validate()?;
        let singular_x = real_roots(&sys.restoring()).roots;
        Ok(Self {
            damping: sys.damping(),
            restoring: sys.restoring(),
            singular_x,
            opts,
            t: T::zero(),
            y: [T::zero(); 2],
            h: T::zero(),
            k1: [T::zero(); 2],
            steps: 0,
            t_prev: T::zero(),
            h_prev: T::zero(),
            rcont: [[T::zero(); 2]; 5],
        })
    }

    pub fn options(&self) -> &FlowOptions<T> {
        &self.opts
    }

    #[inline]
    fn field(&self, s: &State<T>) -> State<T> {
        let g = self.restoring.eval(&s[0]);
        let f = self.damping.eval(&s[0]);
        [s[1], s[1] * f - g]
    }

    pub fn reset(&mut self, t0: T, y0: State<T>) {
        self.t = t0;
        self.y = y0;
        self.k1 = self.field(&y0);
        self.steps = 0;
        self.h = self.initial_step(1.0);
        self.t_prev = t0;
        self.h_prev = T::zero();
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn state(&self) -> State<T> {
        self.y
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn scale(&self, a: T, b: T) -> T {
        self.opts.atol + self.opts.rtol * a.abs().max(b.abs())
    }

    fn initial_step(&self, dir: f64) -> T {
        let sc0 = self.scale(self.y[0], self.y[0]);
        let sc1 = self.scale(self.y[1], self.y[1]);
        let d0 = ((self.y[0] / sc0).powi(2) + (self.y[1] / sc1).powi(2)).sqrt();
        let d1 = ((self.k1[0] / sc0).powi(2) + (self.k1[1] / sc1).powi(2)).sqrt();
        let h = if d0 < T::lit(1e-5) || d1 < T::lit(1e-5) {
            T::lit(1e-6)
        } else {
            T::lit(0.01) * d0 / d1
        };
        (h.min(self.opts.h_max)) * T::lit(dir.signum())
    }

    /// Takes one accepted step toward `t_end` (forward or backward) and
    /// returns the new time.
    pub fn step(&mut self, t_end: T) -> Result<T, FlowError> {
        let dir = if t_end >= self.t { T::one() } else { -T::one() };
        if self.h.is_zero() || self.h.signum() != dir {
            self.h = self.initial_step(dir.as_f64());
        }
        let h_min = T::lit(1e-14);
        loop {
            if self.steps >= self.opts.max_steps {
                return Err(FlowError::StepBudget(self.opts.max_steps));
            }
            let remaining = t_end - self.t;
            let mut h = self.h.abs().min(self.opts.h_max).min(remaining.abs()) * dir;
            if h.abs() < h_min {
                if remaining.abs() < h_min {
                    // Close enough to the end: snap.
                    h = remaining;
                } else {
                    return Err(FlowError::StepUnderflow {
                        t: self.t.as_f64(),
                        x: self.y[0].as_f64(),
                        y: self.y[1].as_f64(),
                    });
                }
            }
            let mut k = [[T::zero(); 2]; 7];
            k[0] = self.k1;
            for s in 1..7 {
                let mut ys = self.y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = T::lit(A[s][j]);
                    if !a.is_zero() {
                        ys[0] = ys[0] + h * a * kj[0];
                        ys[1] = ys[1] + h * a * kj[1];
                    }
                }
                k[s] = self.field(&ys);
            }
            // Stage 7 is evaluated at the fifth-order solution (FSAL).
            let mut y_new = self.y;
            for (j, kj) in k.iter().enumerate().take(6) {
                let a = T::lit(A[6][j]);
                y_new[0] = y_new[0] + h * a * kj[0];
                y_new[1] = y_new[1] + h * a * kj[1];
            }
            let mut err = T::zero();
            for i in 0..2 {
                let mut e = T::zero();
                for (j, kj) in k.iter().enumerate() {
                    e = e + T::lit(E[j]) * kj[i];
                }
                let sc = self.scale(self.y[i], y_new[i]);
                err = err + (h * e / sc).powi(2);
            }
            let err = (err / T::lit(2.0)).sqrt();
            if !err.is_finite() || !y_new[0].is_finite() || !y_new[1].is_finite() {
                self.h = h * T::lit(0.25);
                if self.h.abs() < h_min {
                    return Err(FlowError::NonFinite { t: self.t.as_f64() });
                }
                continue;
            }
            let fac = if err.is_zero() {
                T::lit(5.0)
            } else {
                (T::lit(0.9) * err.powf(T::lit(-0.2))).max(T::lit(0.2)).min(T::lit(5.0))
            };
            if err <= T::one() {
                // Dense-output coefficients.
                let dy = [y_new[0] - self.y[0], y_new[1] - self.y[1]];
                let mut rc = [[T::zero(); 2]; 5];
                for i in 0..2 {
                    rc[0][i] = self.y[i];
                    rc[1][i] = dy[i];
                    rc[2][i] = h * k[0][i] - dy[i];
                    rc[3][i] = dy[i] - h * k[6][i] - rc[2][i];
                    let mut acc = T::zero();
                    for (j, kj) in k.iter().enumerate() {
                        acc = acc + T::lit(D[j]) * kj[i];
                    }
                    rc[4][i] = h * acc;
                }
                self.rcont = rc;
                self.t_prev = self.t;
                self.h_prev = h;
                self.t = if h == remaining { t_end } else { self.t + h };
                self.y = y_new;
                self.k1 = k[6];
                self.steps += 1;
                self.h = h * fac.min(if err > T::lit(0.5) { T::one() } else { T::lit(5.0) });
                return Ok(self.t);
            }
            self.h = h * fac.min(T::one());
            self.steps += 1;
        }
    }

    /// Continuous extension over the last accepted step, `t` in
    /// `[t_prev, t]`.
    pub fn dense(&self, t: T) -> State<T> {
        if self.h_prev.is_zero() {
            return self.y;
        }
        let th = (t - self.t_prev) / self.h_prev;
        let th1 = T::one() - th;
        let r = &self.rcont;
        let mut out = [T::zero(); 2];
        for (i, o) in out.iter_mut().enumerate() {
            *o = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
        }
        out
    }

    pub fn last_step_start(&self) -> T {
        self.t_prev
    }

    fn near_singular(&self, s: &State<T>) -> bool {
        let r = self.opts.converge_radius;
        s[1].abs() < r
            && self
                .singular_x
                .iter()
                .any(|&x| (s[0] - x).powi(2) + s[1].powi(2) < r * r)
    }

    fn escaped(&self, s: &State<T>) -> bool {
        s[0].hypot(s[1]) > self.opts.r_escape
    }

    /// Classifies the current state as a terminal condition, if any.
    pub fn check_terminal(&self) -> Option<Terminal> {
        if self.escaped(&self.y) {
            Some(Terminal::Escaped)
        } else if self.near_singular(&self.y) {
            Some(Terminal::ConvergedToPoint)
        } else {
            None
        }
    }
}

/// Integrates from `start` until `t_max` (negative for backward time),
/// escape, or convergence to a singular point.
pub fn integrate<T: Real>(
    sys: &LienardSystem<T>,
    start: State<T>,
    t_max: T,
    opts: FlowOptions<T>,
) -> Result<Trajectory<T>, FlowError> {
    if start[0].hypot(start[1]) >= opts.r_escape {
        return Err(FlowError::InvalidOptions("start lies outside the escape radius".into()));
    }
    let mut integ = Integrator::new(sys, opts)?;
    integ.reset(T::zero(), start);
    let mut samples = vec![(T::zero(), start[0], start[1])];
    let terminal = loop {
        if integ.t() == t_max {
            break Terminal::TimeLimit;
        }
        let t = integ.step(t_max)?;
        let s = integ.state();
        samples.push((t, s[0], s[1]));
        if let Some(term) = integ.check_terminal() {
            break term;
        }
    };
    Ok(Trajectory { samples, terminal })
}

/// Tolerance on the distance to the ray's line when refining a crossing.
pub const CROSSING_TOL: f64 = 1e-10;

/// Refines a sign change of `ray.side` inside the last accepted step.
pub(crate) fn refine_crossing<T: Real>(integ: &Integrator<T>, ray: &Ray<T>) -> (T, State<T>) {
    let mut lo = integ.last_step_start();
    let mut hi = integ.t();
    let f_lo = ray.side(&integ.dense(lo));
    let tol = T::lit(CROSSING_TOL);
    let mut best = (hi, integ.state());
    for _ in 0..200 {
        let mid = lo + (hi - lo) / T::lit(2.0);
        let p = integ.dense(mid);
        let f = ray.side(&p);
        best = (mid, p);
        if f.abs() < tol || (hi - lo).abs() <= T::epsilon() * (T::one() + mid.abs()) {
            break;
        }
        if (f < T::zero()) == (f_lo < T::zero()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    best
}

/// Rotation sense as seen from the ray: sign of d(side)/dt on the ray.
fn sense_on_ray<T: Real>(sys: &LienardSystem<T>, ray: &Ray<T>, r: T) -> T {
    let p = ray.point(r);
    let (dx, dy) = sys.vector_field(&p[0], &p[1]);
    (ray.direction[0] * dy - ray.direction[1] * dx).signum()
}

/// Records up to `count` same-sense crossings of `ray` by the trajectory
/// through `start`.
pub fn crossings<T: Real>(
    sys: &LienardSystem<T>,
    start: State<T>,
    ray: &Ray<T>,
    count: usize,
    t_max: T,
    opts: FlowOptions<T>,
) -> Result<CrossingRun<T>, FlowError> {
    let mut integ = Integrator::new(sys, opts)?;
    integ.reset(T::zero(), start);
    let r0 = ray.along(&start).abs().max(T::lit(1e-12));
    let sense = sense_on_ray(sys, ray, r0);
    let mut events = Vec::new();
    if count == 0 {
        return Ok(CrossingRun { events, terminal: Terminal::EventCountReached });
    }
    let mut prev_side = ray.side(&start);
    let terminal = loop {
        if integ.t() >= t_max {
            break Terminal::TimeLimit;
        }
        integ.step(t_max)?;
        let side = ray.side(&integ.state());
        let crossed = if sense > T::zero() {
            prev_side < T::zero() && side >= T::zero()
        } else {
            prev_side > T::zero() && side <= T::zero()
        };
        if crossed {
            let (t, p) = refine_crossing(&integ, ray);
            let r = ray.along(&p);
            if r > T::zero() {
                events.push(RayEvent { t, r, direction: CrossingSense::SameSense });
                if events.len() == count {
                    break Terminal::EventCountReached;
                }
            }
        }
        prev_side = side;
        if let Some(term) = integ.check_terminal() {
            break term;
        }
    };
    Ok(CrossingRun { events, terminal })
}
