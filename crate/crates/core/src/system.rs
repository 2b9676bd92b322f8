//! Lienard polynomial systems
//!
//! ```text
//! x' = y
//! y' = -x (1 + b1 x + ... + b_{2l} x^{2l}) + y (a0 + a1 x + ... + a_{2k} x^{2k})
//! ```
//!
//! together with the canonical form (odd damping coefficients fixed to one,
//! even restoring coefficients fixed to +-1), the classical-form reduction
//! for linear restoring force, and symbolic certification of field rotation
//! parameters.

use serde::{Deserialize, Serialize};

use crate::poly::{BivariatePoly, ParametricPoly, Polynomial, SymbolicError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SystemError {
    #[error("alpha must have 2k+1 = {expected} entries, got {got}")]
    AlphaLength { expected: usize, got: usize },
    #[error("beta must have 2l = {expected} entries, got {got}")]
    BetaLength { expected: usize, got: usize },
    #[error("canonical field `{field}` must have {expected} entries, got {got}")]
    CanonicalLength { field: &'static str, expected: usize, got: usize },
    #[error("classical reduction requires g(x) = x (l = 0), got l = {0}")]
    NonLinearRestoring(usize),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("invalid system description: {0}")]
    Spec(String),
}

/// Sign of an even restoring coefficient in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value<T: Scalar>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(1.0) => Ok(Sign::Plus),
            Raw::Num(-1.0) => Ok(Sign::Minus),
            Raw::Str(s) if s == "+" || s == "+1" => Ok(Sign::Plus),
            Raw::Str(s) if s == "-" || s == "-1" => Ok(Sign::Minus),
            _ => Err(serde::de::Error::custom("sign must be +1, -1, \"+\" or \"-\"")),
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = SystemError;
    fn from_str(s: &str) -> Result<Self, SystemError> {
        match s.trim() {
            "+" | "+1" | "1" | "plus" => Ok(Sign::Plus),
            "-" | "-1" | "minus" => Ok(Sign::Minus),
            other => Err(SystemError::Spec(format!("bad sign `{other}`"))),
        }
    }
}

/// General Lienard system with `alpha = (a0..a_{2k})` and
/// `beta = (b1..b_{2l})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LienardSystem<T> {
    k: usize,
    l: usize,
    alpha: Vec<T>,
    beta: Vec<T>,
}

/// Which reflection the vector field is symmetric under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryClass {
    /// All damping coefficients vanish; direction field odd in `y`.
    XAxisSymmetric,
    /// Even damping and odd restoring coefficients vanish; direction field odd in `x`.
    YAxisSymmetric,
    None,
}

impl SymmetryClass {
    /// Both symmetries force every anti-saddle to be a center.
    pub fn forces_centers(self) -> bool {
        !matches!(self, SymmetryClass::None)
    }
}

impl<T: Scalar> LienardSystem<T> {
    pub fn new(k: usize, l: usize, alpha: Vec<T>, beta: Vec<T>) -> Result<Self, SystemError> {
        if alpha.len() != 2 * k + 1 {
            return Err(SystemError::AlphaLength { expected: 2 * k + 1, got: alpha.len() });
        }
        if beta.len() != 2 * l {
            return Err(SystemError::BetaLength { expected: 2 * l, got: beta.len() });
        }
        Ok(Self { k, l, alpha, beta })
    }

    /// Infers `k` and `l` from the coefficient lengths.
    pub fn from_coeffs(alpha: Vec<T>, beta: Vec<T>) -> Result<Self, SystemError> {
        if alpha.len().is_multiple_of(2) {
            return Err(SystemError::AlphaLength { expected: alpha.len() + 1, got: alpha.len() });
        }
        if beta.len() % 2 == 1 {
            return Err(SystemError::BetaLength { expected: beta.len() + 1, got: beta.len() });
        }
        let (k, l) = ((alpha.len() - 1) / 2, beta.len() / 2);
        Self::new(k, l, alpha, beta)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    pub fn beta(&self) -> &[T] {
        &self.beta
    }

    /// Copy with `alpha[index]` replaced.
    pub fn with_alpha(&self, index: usize, value: T) -> Self {
        let mut out = self.clone();
        out.alpha[index] = value;
        out
    }

    /// Copy with `beta[index - 1]` (i.e. `b_index`) replaced.
    pub fn with_beta(&self, index: usize, value: T) -> Self {
        let mut out = self.clone();
        out.beta[index - 1] = value;
        out
    }

    /// Damping polynomial `f(x) = a0 + a1 x + ... + a_{2k} x^{2k}`.
    pub fn damping(&self) -> Polynomial<T> {
        Polynomial::new(self.alpha.clone())
    }

    /// Restoring polynomial `g(x) = x (1 + b1 x + ... + b_{2l} x^{2l})`.
    pub fn restoring(&self) -> Polynomial<T> {
        let mut c = Vec::with_capacity(self.beta.len() + 2);
        c.push(T::zero());
        c.push(T::one());
        c.extend(self.beta.iter().cloned());
        Polynomial::new(c)
    }

    /// `(x', y')` at `(x, y)`.
    pub fn vector_field(&self, x: &T, y: &T) -> (T, T) {
        let g = self.restoring().eval(x);
        let f = self.damping().eval(x);
        (y.clone(), -g + y.clone() * f)
    }

    /// `P(x, y) = y` and `Q(x, y) = -g(x) + y f(x)` as bivariate polynomials.
    pub fn field_polys(&self) -> (BivariatePoly<T>, BivariatePoly<T>) {
        let p = BivariatePoly::y();
        let q = &(-&self.restoring().to_bivariate_x())
            + &(&self.damping().to_bivariate_x() * &BivariatePoly::y());
        (p, q)
    }

    pub fn symmetry_class(&self) -> SymmetryClass {
        if self.alpha.iter().all(|a| a.is_zero()) {
            return SymmetryClass::XAxisSymmetric;
        }
        let even_alpha_zero = self.alpha.iter().step_by(2).all(|a| a.is_zero());
        let odd_beta_zero = self.beta.iter().step_by(2).all(|b| b.is_zero());
        if even_alpha_zero && odd_beta_zero {
            SymmetryClass::YAxisSymmetric
        } else {
            SymmetryClass::None
        }
    }

    /// Coefficients `gamma_1..gamma_{2k+1}` of the classical form
    /// `x' = y, y' = -x + sum gamma_i y^i`, where `F(x) = int_0^x f`.
    pub fn to_classical(&self) -> Result<Vec<T>, SystemError> {
        if self.l > 0 {
            return Err(SystemError::NonLinearRestoring(self.l));
        }
        Ok(self
            .alpha
            .iter()
            .enumerate()
            .map(|(i, a)| a.clone() / T::from_count(i + 1))
            .collect())
    }
}

/// Canonical form: `alpha_even = (a0, a2, .., a_{2k})`,
/// `beta_odd = (b1, b3, .., b_{2l-1})`, and the signs of `b2, b4, .., b_{2l}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalSystem<T> {
    pub k: usize,
    pub l: usize,
    pub alpha_even: Vec<T>,
    pub beta_odd: Vec<T>,
    pub even_signs: Vec<Sign>,
}

impl<T: Scalar> CanonicalSystem<T> {
    pub fn new(
        k: usize,
        l: usize,
        alpha_even: Vec<T>,
        beta_odd: Vec<T>,
        even_signs: Vec<Sign>,
    ) -> Result<Self, SystemError> {
        if alpha_even.len() != k + 1 {
            return Err(SystemError::CanonicalLength {
                field: "alpha_even",
                expected: k + 1,
                got: alpha_even.len(),
            });
        }
        if beta_odd.len() != l {
            return Err(SystemError::CanonicalLength {
                field: "beta_odd",
                expected: l,
                got: beta_odd.len(),
            });
        }
        if even_signs.len() != l {
            return Err(SystemError::CanonicalLength {
                field: "even_signs",
                expected: l,
                got: even_signs.len(),
            });
        }
        Ok(Self { k, l, alpha_even, beta_odd, even_signs })
    }

    pub fn expand(&self) -> LienardSystem<T> {
        let alpha = (0..=2 * self.k)
            .map(|i| if i % 2 == 0 { self.alpha_even[i / 2].clone() } else { T::one() })
            .collect();
        let beta = (1..=2 * self.l)
            .map(|j| {
                if j % 2 == 1 {
                    self.beta_odd[j / 2].clone()
                } else {
                    self.even_signs[j / 2 - 1].value()
                }
            })
            .collect();
        LienardSystem { k: self.k, l: self.l, alpha, beta }
    }

    /// Reads a general system back into canonical form when its odd damping
    /// coefficients are one and its even restoring coefficients are +-1.
    pub fn from_system(sys: &LienardSystem<T>) -> Option<Self> {
        let odd_ok = sys.alpha.iter().skip(1).step_by(2).all(|a| a.is_one());
        if !odd_ok {
            return None;
        }
        let mut even_signs = Vec::with_capacity(sys.l);
        for b in sys.beta.iter().skip(1).step_by(2) {
            if b.is_one() {
                even_signs.push(Sign::Plus);
            } else if (-b.clone()).is_one() {
                even_signs.push(Sign::Minus);
            } else {
                return None;
            }
        }
        Some(Self {
            k: sys.k,
            l: sys.l,
            alpha_even: sys.alpha.iter().step_by(2).cloned().collect(),
            beta_odd: sys.beta.iter().step_by(2).cloned().collect(),
            even_signs,
        })
    }

    pub fn with_alpha_even(&self, slot: usize, value: T) -> Self {
        let mut out = self.clone();
        out.alpha_even[slot] = value;
        out
    }
}

/// Symbolic field `(P, Q)` with named linear parameters.
#[derive(Debug, Clone)]
pub struct ParametricField<T> {
    pub p: ParametricPoly<T>,
    pub q: ParametricPoly<T>,
    pub names: Vec<String>,
}

impl<T: Scalar> ParametricField<T> {
    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `P Q'_mu - Q P'_mu` for parameter `mu`.
    pub fn rotation_determinant(&self, param: usize) -> Result<ParametricPoly<T>, SystemError> {
        rotation_determinant(&self.p, &self.q, param)
    }
}

/// `P Q'_mu - Q P'_mu` for a parameter entering `P` and `Q` linearly.
///
/// Writing `P = P0 + mu P1`, `Q = Q0 + mu Q1`, the `mu` terms cancel and the
/// result is `P0 Q1 - Q0 P1`; it is returned as a parametric polynomial
/// because the other parameters may survive.
pub fn rotation_determinant<T: Scalar>(
    p: &ParametricPoly<T>,
    q: &ParametricPoly<T>,
    param: usize,
) -> Result<ParametricPoly<T>, SystemError> {
    for poly in [p, q] {
        let d = poly.param_degree(param)?;
        if d > 1 {
            return Err(SymbolicError::NonLinear(param, d).into());
        }
    }
    let dp = p.param_derivative(param)?;
    let dq = q.param_derivative(param)?;
    Ok(p.try_mul(&dq)?.try_sub(&q.try_mul(&dp)?)?)
}

/// Canonical field with `a0, a2, .., a_{2k}` symbolic (parameter `i` is `a_{2i}`).
pub fn canonical_field<T: Scalar>(
    k: usize,
    beta_odd: &[T],
    even_signs: &[Sign],
) -> Result<ParametricField<T>, SystemError> {
    let l = beta_odd.len();
    if even_signs.len() != l {
        return Err(SystemError::CanonicalLength {
            field: "even_signs",
            expected: l,
            got: even_signs.len(),
        });
    }
    let n = k + 1;
    let mut g = vec![T::zero(), T::one()];
    for j in 0..l {
        g.push(beta_odd[j].clone());
        g.push(even_signs[j].value());
    }
    let g = Polynomial::new(g).to_bivariate_x();
    let mut q = ParametricPoly::from_bivariate(n, -&g);
    for i in 0..=2 * k {
        let mono = BivariatePoly::monomial(i as u32, 1, T::one());
        if i % 2 == 0 {
            q = q.try_add(&ParametricPoly::param(n, i / 2)?.mul_bivariate(&mono))?;
        } else {
            q = q.try_add(&ParametricPoly::from_bivariate(n, mono))?;
        }
    }
    Ok(ParametricField {
        p: ParametricPoly::from_bivariate(n, BivariatePoly::y()),
        q,
        names: (0..=k).map(|i| format!("a{}", 2 * i)).collect(),
    })
}

/// Field with odd damping fixed to one, even damping zero, and
/// `b1, b3, .., b_{2l-1}` symbolic (parameter `j` is `b_{2j+1}`).
pub fn odd_restoring_field<T: Scalar>(
    k: usize,
    even_signs: &[Sign],
) -> Result<ParametricField<T>, SystemError> {
    let l = even_signs.len();
    let n = l;
    let mut q = ParametricPoly::from_bivariate(n, BivariatePoly::monomial(1, 0, -T::one()));
    for (j, sign) in even_signs.iter().enumerate() {
        // -b_{2j+1} x^{2j+2}
        let odd = BivariatePoly::monomial(2 * j as u32 + 2, 0, -T::one());
        q = q.try_add(&ParametricPoly::param(n, j)?.mul_bivariate(&odd))?;
        let even = BivariatePoly::monomial(2 * j as u32 + 3, 0, -sign.value::<T>());
        q = q.try_add(&ParametricPoly::from_bivariate(n, even))?;
    }
    for i in (1..2 * k).step_by(2) {
        q = q.try_add(&ParametricPoly::from_bivariate(
            n,
            BivariatePoly::monomial(i as u32, 1, T::one()),
        ))?;
    }
    Ok(ParametricField {
        p: ParametricPoly::from_bivariate(n, BivariatePoly::y()),
        q,
        names: (0..l).map(|j| format!("b{}", 2 * j + 1)).collect(),
    })
}

/// System description as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum SystemSpec {
    General {
        k: usize,
        l: usize,
        alpha: Vec<f64>,
        beta: Vec<f64>,
    },
    Canonical {
        k: usize,
        l: usize,
        alpha_even: Vec<f64>,
        beta_odd: Vec<f64>,
        even_signs: Vec<Sign>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    form: String,
    k: Option<usize>,
    l: Option<usize>,
    alpha: Option<Vec<f64>>,
    beta: Option<Vec<f64>>,
    alpha_even: Option<Vec<f64>>,
    beta_odd: Option<Vec<f64>>,
    even_signs: Option<Vec<Sign>>,
}

impl<'de> Deserialize<'de> for SystemSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawSpec::deserialize(d)?;
        SystemSpec::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<RawSpec> for SystemSpec {
    type Error = SystemError;

    fn try_from(raw: RawSpec) -> Result<Self, SystemError> {
        let general = raw.alpha.is_some() || raw.beta.is_some();
        let canonical =
            raw.alpha_even.is_some() || raw.beta_odd.is_some() || raw.even_signs.is_some();
        let spec = match raw.form.as_str() {
            "general" => {
                if canonical {
                    return Err(SystemError::Spec(
                        "general form must not carry canonical fields".into(),
                    ));
                }
                let alpha = raw.alpha.ok_or_else(|| SystemError::Spec("missing alpha".into()))?;
                let beta = raw.beta.unwrap_or_default();
                let k = raw.k.unwrap_or(alpha.len().saturating_sub(1) / 2);
                let l = raw.l.unwrap_or(beta.len() / 2);
                SystemSpec::General { k, l, alpha, beta }
            }
            "canonical" => {
                if general {
                    return Err(SystemError::Spec(
                        "canonical form must not carry general fields".into(),
                    ));
                }
                let alpha_even = raw
                    .alpha_even
                    .ok_or_else(|| SystemError::Spec("missing alpha_even".into()))?;
                let beta_odd = raw.beta_odd.unwrap_or_default();
                let even_signs = raw.even_signs.unwrap_or_default();
                let k = raw.k.unwrap_or(alpha_even.len().saturating_sub(1));
                let l = raw.l.unwrap_or(beta_odd.len());
                SystemSpec::Canonical { k, l, alpha_even, beta_odd, even_signs }
            }
            other => return Err(SystemError::Spec(format!("unknown form `{other}`"))),
        };
        spec.to_system()?;
        Ok(spec)
    }
}

impl SystemSpec {
    pub fn to_system(&self) -> Result<LienardSystem<f64>, SystemError> {
        match self {
            SystemSpec::General { k, l, alpha, beta } => {
                LienardSystem::new(*k, *l, alpha.clone(), beta.clone())
            }
            SystemSpec::Canonical { .. } => Ok(self.to_canonical()?.expect("canonical").expand()),
        }
    }

    pub fn to_canonical(&self) -> Result<Option<CanonicalSystem<f64>>, SystemError> {
        match self {
            SystemSpec::General { .. } => Ok(None),
            SystemSpec::Canonical { k, l, alpha_even, beta_odd, even_signs } => {
                CanonicalSystem::new(
                    *k,
                    *l,
                    alpha_even.clone(),
                    beta_odd.clone(),
                    even_signs.clone(),
                )
                .map(Some)
            }
        }
    }

    pub fn from_system(sys: &LienardSystem<f64>) -> Self {
        SystemSpec::General {
            k: sys.k(),
            l: sys.l(),
            alpha: sys.alpha().to_vec(),
            beta: sys.beta().to_vec(),
        }
    }

    pub fn from_canonical(c: &CanonicalSystem<f64>) -> Self {
        SystemSpec::Canonical {
            k: c.k,
            l: c.l,
            alpha_even: c.alpha_even.clone(),
            beta_odd: c.beta_odd.clone(),
            even_signs: c.even_signs.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn sys(alpha: &[f64], beta: &[f64]) -> LienardSystem<f64> {
        LienardSystem::from_coeffs(alpha.to_vec(), beta.to_vec()).unwrap()
    }

    #[test]
    fn field_at_origin_vanishes() {
        let s = sys(&[0.3, -2.0, 1.0], &[4.0, 1.0]);
        assert_eq!(s.vector_field(&0.0, &0.0), (0.0, 0.0));
    }

    #[test]
    fn harmonic_oscillator_field() {
        let s = sys(&[0.0], &[]);
        assert_eq!(s.vector_field(&1.0, &0.0), (0.0, -1.0));
    }

    #[test]
    fn hand_evaluated_field() {
        // -(1 - 3 + 1) + (0.1 + 1 - 1) = 1.1
        let s = sys(&[0.1, 1.0, -1.0], &[-3.0, 1.0]);
        let (dx, dy) = s.vector_field(&1.0, &1.0);
        assert_eq!(dx, 1.0);
        assert!((dy - 1.1).abs() < 1e-15);
    }

    #[test]
    fn length_validation() {
        assert!(matches!(
            LienardSystem::new(1, 0, vec![0.0; 2], vec![]),
            Err(SystemError::AlphaLength { expected: 3, got: 2 })
        ));
        assert!(matches!(
            LienardSystem::new(0, 1, vec![0.0], vec![1.0]),
            Err(SystemError::BetaLength { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn expand_smallest_canonical() {
        let c = CanonicalSystem::new(1, 0, vec![0.0, 0.0], vec![], vec![]).unwrap();
        let s = c.expand();
        assert_eq!(s.alpha(), &[0.0, 1.0, 0.0]);
        assert!(s.beta().is_empty());
    }

    #[test]
    fn expand_k1_l1() {
        let c = CanonicalSystem::new(1, 1, vec![0.1, -1.0], vec![-3.0], vec![Sign::Plus]).unwrap();
        let s = c.expand();
        assert_eq!(s.alpha(), &[0.1, 1.0, -1.0]);
        assert_eq!(s.beta(), &[-3.0, 1.0]);
    }

    #[test]
    fn expand_k2_l1() {
        let (a0, a2, a4, b1) = (0.25, -0.5, 2.0, 7.0);
        let c = CanonicalSystem::new(2, 1, vec![a0, a2, a4], vec![b1], vec![Sign::Minus]).unwrap();
        let s = c.expand();
        assert_eq!(s.alpha(), &[a0, 1.0, a2, 1.0, a4]);
        assert_eq!(s.beta(), &[b1, -1.0]);
        assert_eq!(CanonicalSystem::from_system(&s), Some(c));
    }

    #[test]
    fn classical_reduction() {
        assert_eq!(sys(&[0.0], &[]).to_classical().unwrap(), vec![0.0]);
        assert_eq!(sys(&[1.0], &[]).to_classical().unwrap(), vec![1.0]);
        let r = |n| Rational64::from_integer(n);
        let exact = LienardSystem::from_coeffs(vec![r(1), r(2), r(3)], vec![]).unwrap();
        assert_eq!(exact.to_classical().unwrap(), vec![r(1), r(1), r(1)]);
        assert!(matches!(
            sys(&[1.0], &[1.0, 1.0]).to_classical(),
            Err(SystemError::NonLinearRestoring(1))
        ));
    }

    #[test]
    fn symmetry_classes() {
        assert_eq!(sys(&[0.0, 0.0, 0.0], &[1.0, 1.0]).symmetry_class(), SymmetryClass::XAxisSymmetric);
        assert_eq!(sys(&[0.0, 1.0, 0.0], &[0.0, -1.0]).symmetry_class(), SymmetryClass::YAxisSymmetric);
        assert_eq!(sys(&[0.1, 1.0, -1.0], &[-3.0, 1.0]).symmetry_class(), SymmetryClass::None);
    }

    #[test]
    fn determinant_for_a0_is_y_squared() {
        let field = canonical_field::<Rational64>(2, &[Rational64::from_integer(-3)], &[Sign::Plus])
            .unwrap();
        let d = field.rotation_determinant(0).unwrap().to_bivariate().unwrap();
        assert_eq!(d, BivariatePoly::monomial(0, 2, Rational64::from_integer(1)));
        let d4 = field.rotation_determinant(2).unwrap().to_bivariate().unwrap();
        assert_eq!(d4, BivariatePoly::monomial(4, 2, Rational64::from_integer(1)));
    }

    #[test]
    fn determinant_for_b1_is_minus_x2_y() {
        let field = odd_restoring_field::<i64>(1, &[Sign::Plus]).unwrap();
        let d = field.rotation_determinant(0).unwrap().to_bivariate().unwrap();
        assert_eq!(d, BivariatePoly::monomial(2, 1, -1));
    }

    #[test]
    fn nonlinear_parameter_rejected() {
        let mu = ParametricPoly::<i64>::param(1, 0).unwrap();
        let q = mu.try_mul(&mu).unwrap().mul_bivariate(&BivariatePoly::y());
        let p = ParametricPoly::from_bivariate(1, BivariatePoly::y());
        assert!(matches!(
            rotation_determinant(&p, &q, 0),
            Err(SystemError::Symbolic(SymbolicError::NonLinear(0, 2)))
        ));
    }

    #[test]
    fn spec_json_forms() {
        let g: SystemSpec =
            serde_json::from_str(r#"{"form":"general","k":1,"l":0,"alpha":[0.1,1,-1],"beta":[]}"#)
                .unwrap();
        assert_eq!(g.to_system().unwrap().alpha(), &[0.1, 1.0, -1.0]);
        let c: SystemSpec = serde_json::from_str(
            r#"{"form":"canonical","k":1,"l":1,"alpha_even":[0.1,-1],"beta_odd":[-3],"even_signs":[1]}"#,
        )
        .unwrap();
        assert_eq!(c.to_system().unwrap().beta(), &[-3.0, 1.0]);
        let mixed = serde_json::from_str::<SystemSpec>(
            r#"{"form":"canonical","alpha":[0],"alpha_even":[0]}"#,
        );
        assert!(mixed.is_err());
        let bad_len = serde_json::from_str::<SystemSpec>(r#"{"form":"general","k":2,"alpha":[0]}"#);
        assert!(bad_len.is_err());
        let round = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<SystemSpec>(&round).unwrap(), c);
    }
}
