//! Analysis of general Lienard polynomial systems
//!
//! ```text
//! x' = y
//! y' = -x (1 + b1 x + ... + b_{2l} x^{2l}) + y (a0 + a1 x + ... + a_{2k} x^{2k})
//! ```
//!
//! Singular points and their indices, field-rotation determinants, limit
//! cycle detection on return maps, and a continuation engine that builds
//! multi-cycle configurations by successively switching on rotation
//! parameters.

// `!(a > b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cycles;
pub mod flow;
pub mod poly;
pub mod roots;
pub mod rotate;
pub mod scalar;
pub mod singular;
pub mod system;
pub mod verify;

pub use flow::{FlowError, FlowOptions, Integrator, Ray, RayEvent, Terminal, Trajectory};
pub use poly::{BivariatePoly, ParametricPoly, Polynomial, SymbolicError};
pub use roots::{real_roots, RealRoots};
pub use scalar::{Real, Scalar};
pub use system::{
    CanonicalSystem, LienardSystem, Sign, SymmetryClass, SystemError, SystemSpec,
};

pub type Polynomial64 = Polynomial<f64>;
pub type Polynomial32 = Polynomial<f32>;
pub type System64 = LienardSystem<f64>;
pub type System32 = LienardSystem<f32>;
pub type Canonical64 = CanonicalSystem<f64>;
/// Exact rational systems, used for the symbolic determinant identities.
pub type ExactSystem = LienardSystem<num_rational::Rational64>;
pub type ExactCanonical = CanonicalSystem<num_rational::Rational64>;
