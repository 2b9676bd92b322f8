//! Real roots of univariate polynomials.
//!
//! Candidates come from the eigenvalues of the companion matrix, are polished
//! by Newton iteration in the working precision, and roots that end up closer
//! than a separation threshold are reported as a possible multiple root.

use nalgebra::DMatrix;

use crate::poly::Polynomial;
use crate::scalar::Real;

/// Imaginary parts below this (relative) are treated as rounding noise.
const IMAG_TOL: f64 = 1e-6;
/// Roots closer than this are flagged as a possible multiple root.
pub const SEPARATION_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct RealRoots<T> {
    /// Sorted ascending.
    pub roots: Vec<T>,
    /// Index pairs `(i, i+1)` of adjacent roots closer than the separation tolerance.
    pub close_pairs: Vec<(usize, usize)>,
}

impl<T: Real> RealRoots<T> {
    pub fn all_simple(&self) -> bool {
        self.close_pairs.is_empty()
    }
}

/// All real roots of `p`. The zero polynomial and constants have none.
pub fn real_roots<T: Real>(p: &Polynomial<T>) -> RealRoots<T> {
    let Some(deg) = p.degree() else {
        return RealRoots { roots: Vec::new(), close_pairs: Vec::new() };
    };
    // Strip zero roots exactly first.
    let lowest = p.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
    let reduced = Polynomial::new(p.coeffs()[lowest..].to_vec());
    let mut roots: Vec<T> = vec![T::zero(); lowest];

    let rdeg = deg - lowest;
    if rdeg >= 1 {
        let lead = reduced.coeff(rdeg).as_f64();
        let mut comp = DMatrix::<f64>::zeros(rdeg, rdeg);
        for i in 1..rdeg {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..rdeg {
            comp[(i, rdeg - 1)] = -reduced.coeff(i).as_f64() / lead;
        }
        let eig = comp.complex_eigenvalues();
        let dp = reduced.derivative();
        for z in eig.iter() {
            if z.im.abs() > IMAG_TOL * (1.0 + z.re.abs()) {
                continue;
            }
            roots.push(polish(&reduced, &dp, T::lit(z.re)));
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let sep = T::lit(SEPARATION_TOL);
    let close_pairs = roots
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (w[1] - w[0]).abs() < sep * (T::one() + w[0].abs()))
        .map(|(i, _)| (i, i + 1))
        .collect();
    RealRoots { roots, close_pairs }
}

fn polish<T: Real>(p: &Polynomial<T>, dp: &Polynomial<T>, mut x: T) -> T {
    let mut best = x;
    let mut best_res = p.eval(&x).abs();
    for _ in 0..50 {
        let fx = p.eval(&x);
        let dfx = dp.eval(&x);
        if dfx.is_zero() || !dfx.is_finite() {
            break;
        }
        let step = fx / dfx;
        x = x - step;
        let res = p.eval(&x).abs();
        if res < best_res {
            best = x;
            best_res = res;
        }
        if step.abs() <= T::epsilon() * (T::one() + x.abs()) {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_with_zero_root() {
        // x (1 - 3x + x^2)
        let p = Polynomial::new(vec![0.0, 1.0, -3.0, 1.0]);
        let r = real_roots(&p);
        let s5 = 5f64.sqrt();
        let expect = [0.0, (3.0 - s5) / 2.0, (3.0 + s5) / 2.0];
        assert_eq!(r.roots.len(), 3);
        for (a, b) in r.roots.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
        assert!(r.all_simple());
        assert_eq!(r.roots[0], 0.0);
    }

    #[test]
    fn complex_pair_skipped() {
        // x (1 + x^2)
        let r = real_roots(&Polynomial::new(vec![0.0, 1.0, 0.0, 1.0]));
        assert_eq!(r.roots, vec![0.0]);
    }

    #[test]
    fn double_root_flagged() {
        // x (x - 1)^2 = x^3 - 2x^2 + x
        let r = real_roots(&Polynomial::new(vec![0.0, 1.0, -2.0, 1.0]));
        assert_eq!(r.roots.len(), 3);
        assert!(!r.all_simple());
    }

    #[test]
    fn works_in_f32() {
        let r = real_roots(&Polynomial::new(vec![0.0f32, 1.0, 0.0, -1.0]));
        assert_eq!(r.roots.len(), 3);
        assert!((r.roots[0] + 1.0).abs() < 1e-6);
    }

    #[test]
    fn constants_have_no_roots() {
        assert!(real_roots(&Polynomial::new(vec![2.0])).roots.is_empty());
        assert!(real_roots(&Polynomial::<f64>::zero()).roots.is_empty());
    }
}
