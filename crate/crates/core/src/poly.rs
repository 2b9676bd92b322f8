//! Dense univariate and sparse bivariate polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Dense univariate polynomial; `coeffs[i]` multiplies `x^i`.
///
/// Trailing zero coefficients are trimmed on construction, so the leading
/// stored coefficient is non-zero unless the polynomial is identically zero
/// (in which case `coeffs` is empty).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize + Clone", deserialize = "T: Deserialize<'de> + Scalar"))]
#[serde(from = "Vec<T>", into = "Vec<T>")]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> From<Vec<T>> for Polynomial<T> {
    fn from(coeffs: Vec<T>) -> Self {
        Self::new(coeffs)
    }
}

impl<T> From<Polynomial<T>> for Vec<T> {
    fn from(p: Polynomial<T>) -> Self {
        p.coeffs
    }
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^degree`
    pub fn monomial(degree: usize, c: T) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the stored length.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * T::from_count(i))
            .collect();
        Self::new(coeffs)
    }

    /// Antiderivative vanishing at zero: term `a_i x^i` becomes
    /// `a_i/(i+1) x^{i+1}`.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.clone() / T::from_count(i + 1));
        }
        Self::new(coeffs)
    }

    /// Multiplies by `x`.
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Lifts into a bivariate polynomial in `x` only.
    pub fn to_bivariate_x(&self) -> BivariatePoly<T> {
        let mut out = BivariatePoly::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            out.add_term(i as u32, 0, c.clone());
        }
        out
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Sparse polynomial in `x, y`, keyed by `(x-degree, y-degree)`.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariatePoly<T> {
    terms: BTreeMap<(u32, u32), T>,
}

impl<T: Scalar> Default for BivariatePoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> BivariatePoly<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn monomial(xd: u32, yd: u32, c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(xd, yd, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, T::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, T::one())
    }

    /// Adds `c x^xd y^yd`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, xd: u32, yd: u32, c: T) {
        if c.is_zero() {
            return;
        }
        let key = (xd, yd);
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn coeff(&self, xd: u32, yd: u32) -> T {
        self.terms.get(&(xd, yd)).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &T)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        self.terms.iter().fold(T::zero(), |acc, ((a, b), c)| {
            acc + c.clone() * pow(x, *a) * pow(y, *b)
        })
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            out.add_term(*a, *b, c.clone() * s.clone());
        }
        out
    }
}

fn pow<T: Scalar>(base: &T, e: u32) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc * base.clone();
    }
    acc
}

impl<T: Scalar> Add for &BivariatePoly<T> {
    type Output = BivariatePoly<T>;
    fn add(self, rhs: Self) -> BivariatePoly<T> {
        let mut out = self.clone();
        for ((a, b), c) in &rhs.terms {
            out.add_term(*a, *b, c.clone());
        }
        out
    }
}

impl<T: Scalar> Neg for &BivariatePoly<T> {
    type Output = BivariatePoly<T>;
    fn neg(self) -> BivariatePoly<T> {
        let mut out = BivariatePoly::zero();
        for ((a, b), c) in &self.terms {
            out.add_term(*a, *b, -c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &BivariatePoly<T> {
    type Output = BivariatePoly<T>;
    fn sub(self, rhs: Self) -> BivariatePoly<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Mul for &BivariatePoly<T> {
    type Output = BivariatePoly<T>;
    fn mul(self, rhs: Self) -> BivariatePoly<T> {
        let mut out = BivariatePoly::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &rhs.terms {
                out.add_term(a1 + a2, b1 + b2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for BivariatePoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            match a {
                0 => {}
                1 => write!(f, "*x")?,
                _ => write!(f, "*x^{a}")?,
            }
            match b {
                0 => {}
                1 => write!(f, "*y")?,
                _ => write!(f, "*y^{b}")?,
            }
        }
        Ok(())
    }
}

/// Error raised by symbolic parameter operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolicError {
    #[error("parameter {0} is out of range for a polynomial with {1} parameters")]
    UnknownParameter(usize, usize),
    #[error("parameter {0} appears with degree {1}; only linear parameters are supported")]
    NonLinear(usize, u32),
    #[error("parameter count mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
}

/// Bivariate polynomial whose coefficients are themselves polynomials in a
/// fixed set of symbolic parameters. Stored as a map from the parameter
/// exponent vector to the `(x, y)` polynomial multiplying that monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricPoly<T> {
    n_params: usize,
    parts: BTreeMap<Vec<u32>, BivariatePoly<T>>,
}

impl<T: Scalar> ParametricPoly<T> {
    pub fn zero(n_params: usize) -> Self {
        Self { n_params, parts: BTreeMap::new() }
    }

    /// Parameter-free polynomial.
    pub fn from_bivariate(n_params: usize, p: BivariatePoly<T>) -> Self {
        let mut out = Self::zero(n_params);
        out.insert(vec![0; n_params], p);
        out
    }

    /// The symbolic parameter `mu_index` itself.
    pub fn param(n_params: usize, index: usize) -> Result<Self, SymbolicError> {
        if index >= n_params {
            return Err(SymbolicError::UnknownParameter(index, n_params));
        }
        let mut exps = vec![0; n_params];
        exps[index] = 1;
        let mut out = Self::zero(n_params);
        out.insert(exps, BivariatePoly::monomial(0, 0, T::one()));
        Ok(out)
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    fn insert(&mut self, exps: Vec<u32>, p: BivariatePoly<T>) {
        if p.is_zero() {
            return;
        }
        let merged = match self.parts.remove(&exps) {
            Some(old) => &old + &p,
            None => p,
        };
        if !merged.is_zero() {
            self.parts.insert(exps, merged);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// The part multiplying the given parameter monomial.
    pub fn part(&self, exps: &[u32]) -> BivariatePoly<T> {
        self.parts.get(exps).cloned().unwrap_or_default()
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Vec<u32>, &BivariatePoly<T>)> {
        self.parts.iter()
    }

    pub fn is_parameter_free(&self) -> bool {
        self.parts.keys().all(|e| e.iter().all(|&d| d == 0))
    }

    /// Returns the plain `(x, y)` polynomial when no parameter survives.
    pub fn to_bivariate(&self) -> Option<BivariatePoly<T>> {
        if !self.is_parameter_free() {
            return None;
        }
        Some(self.part(&vec![0; self.n_params]))
    }

    /// Highest power with which parameter `index` appears.
    pub fn param_degree(&self, index: usize) -> Result<u32, SymbolicError> {
        if index >= self.n_params {
            return Err(SymbolicError::UnknownParameter(index, self.n_params));
        }
        Ok(self.parts.keys().map(|e| e[index]).max().unwrap_or(0))
    }

    /// Partial derivative with respect to parameter `index`.
    pub fn param_derivative(&self, index: usize) -> Result<Self, SymbolicError> {
        self.param_degree(index)?;
        let mut out = Self::zero(self.n_params);
        for (exps, p) in &self.parts {
            let d = exps[index];
            if d == 0 {
                continue;
            }
            let mut lowered = exps.clone();
            lowered[index] -= 1;
            out.insert(lowered, p.scale(&T::from_count(d as usize)));
        }
        Ok(out)
    }

    /// Substitutes numeric values for every parameter.
    pub fn substitute(&self, values: &[T]) -> Result<BivariatePoly<T>, SymbolicError> {
        if values.len() != self.n_params {
            return Err(SymbolicError::ArityMismatch(values.len(), self.n_params));
        }
        let mut out = BivariatePoly::zero();
        for (exps, p) in &self.parts {
            let mut w = T::one();
            for (v, &e) in values.iter().zip(exps) {
                w = w * pow(v, e);
            }
            out = &out + &p.scale(&w);
        }
        Ok(out)
    }

    fn check_arity(&self, other: &Self) -> Result<(), SymbolicError> {
        if self.n_params != other.n_params {
            return Err(SymbolicError::ArityMismatch(self.n_params, other.n_params));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SymbolicError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, p) in &other.parts {
            out.insert(e.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SymbolicError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, SymbolicError> {
        self.check_arity(other)?;
        let mut out = Self::zero(self.n_params);
        for (e1, p1) in &self.parts {
            for (e2, p2) in &other.parts {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, p1 * p2);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Self {
            n_params: self.n_params,
            parts: self.parts.iter().map(|(e, p)| (e.clone(), -p)).collect(),
        }
    }

    /// Multiplies by a parameter-free `(x, y)` polynomial.
    pub fn mul_bivariate(&self, p: &BivariatePoly<T>) -> Self {
        let mut out = Self::zero(self.n_params);
        for (e, q) in &self.parts {
            out.insert(e.clone(), q * p);
        }
        out
    }
}
