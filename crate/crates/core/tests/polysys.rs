use lienard::system::{canonical_field, odd_restoring_field};
use lienard::*;
use num_rational::Rational64;

fn sys(a: &[f64], b: &[f64]) -> System64 {
    System64::from_coeffs(a.to_vec(), b.to_vec()).unwrap()
}

fn q(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

#[test]
fn field_at_origin_vanishes() {
    for s in [sys(&[0.0], &[]), sys(&[0.1, 1.0, -1.0], &[-3.0, 1.0]), sys(&[2.0, -1.0, 3.0, 0.5, 1.0], &[1.0, 1.0])] {
        assert_eq!(s.vector_field(&0.0, &0.0), (0.0, 0.0));
    }
}

#[test]
fn harmonic_field() {
    assert_eq!(sys(&[0.0], &[]).vector_field(&1.0, &0.0), (0.0, -1.0));
}

#[test]
fn hand_evaluated_field() {
    let (dx, dy) = sys(&[0.1, 1.0, -1.0], &[-3.0, 1.0]).vector_field(&1.0, &1.0);
    assert_eq!(dx, 1.0);
    assert!((dy - 1.1).abs() < 1e-15);
}

#[test]
fn expand_smallest() {
    let c = Canonical64::new(1, 0, vec![0.0, 0.0], vec![], vec![]).unwrap();
    let s = c.expand();
    assert_eq!(s.alpha(), &[0.0, 1.0, 0.0]);
    assert!(s.beta().is_empty());
}

#[test]
fn expand_k1_l1() {
    let c = Canonical64::new(1, 1, vec![0.1, -1.0], vec![-3.0], vec![Sign::Plus]).unwrap();
    let s = c.expand();
    assert_eq!(s.alpha(), &[0.1, 1.0, -1.0]);
    assert_eq!(s.beta(), &[-3.0, 1.0]);
}

#[test]
fn expand_k2_l1() {
    let c = Canonical64::new(2, 1, vec![0.3, -0.2, 0.7], vec![1.5], vec![Sign::Minus]).unwrap();
    let s = c.expand();
    assert_eq!(s.alpha(), &[0.3, 1.0, -0.2, 1.0, 0.7]);
    assert_eq!(s.beta(), &[1.5, -1.0]);
    assert_eq!(Canonical64::from_system(&s), Some(c));
}

#[test]
fn classical_coefficients() {
    assert_eq!(sys(&[0.0], &[]).to_classical().unwrap(), vec![0.0]);
    assert_eq!(sys(&[1.0], &[]).to_classical().unwrap(), vec![1.0]);
    assert_eq!(sys(&[1.0, 2.0, 3.0], &[]).to_classical().unwrap(), vec![1.0, 1.0, 1.0]);
}

#[test]
fn classical_rejects_general_restoring() {
    assert!(sys(&[1.0], &[1.0, 1.0]).to_classical().is_err());
}

#[test]
fn determinants_canonical() {
    let field = canonical_field::<Rational64>(3, &[q(-3)], &[Sign::Plus]).unwrap();
    let want = [
        BivariatePoly::monomial(0, 2, q(1)),
        BivariatePoly::monomial(2, 2, q(1)),
        BivariatePoly::monomial(4, 2, q(1)),
        BivariatePoly::monomial(6, 2, q(1)),
    ];
    for (i, w) in want.iter().enumerate() {
        assert_eq!(field.rotation_determinant(i).unwrap().to_bivariate().as_ref(), Some(w), "a{}", 2 * i);
    }
}

#[test]
fn determinant_odd_restoring() {
    let field = odd_restoring_field::<Rational64>(1, &[Sign::Minus, Sign::Plus]).unwrap();
    let d1 = field.rotation_determinant(0).unwrap().to_bivariate().unwrap();
    let d3 = field.rotation_determinant(1).unwrap().to_bivariate().unwrap();
    assert_eq!(d1, BivariatePoly::monomial(2, 1, q(-1)));
    assert_eq!(d3, BivariatePoly::monomial(4, 1, q(-1)));
}

#[test]
fn symmetry_classes() {
    assert_eq!(sys(&[0.0, 0.0, 0.0], &[1.0, 1.0]).symmetry_class(), SymmetryClass::XAxisSymmetric);
    assert_eq!(sys(&[0.0, 1.0, 0.0], &[0.0, -1.0]).symmetry_class(), SymmetryClass::YAxisSymmetric);
    assert_eq!(sys(&[0.1, 1.0, -1.0], &[-3.0, 1.0]).symmetry_class(), SymmetryClass::None);
}

#[test]
fn spec_json_round_trip() {
    let text = r#"{"form":"canonical","k":1,"l":1,"alpha_even":[0.1,-1],"beta_odd":[-3],"even_signs":["+"]}"#;
    let spec: SystemSpec = serde_json::from_str(text).unwrap();
    let s = spec.to_system().unwrap();
    assert_eq!(s.alpha(), &[0.1, 1.0, -1.0]);
    assert_eq!(s.beta(), &[-3.0, 1.0]);
    let general = SystemSpec::from_system(&s);
    assert_eq!(general.to_system().unwrap(), s);
}

#[test]
fn mismatched_lengths_rejected() {
    assert!(System64::new(1, 0, vec![1.0, 2.0], vec![]).is_err());
    assert!(System64::new(0, 1, vec![1.0], vec![1.0]).is_err());
}

#[test]
fn single_precision_agrees() {
    let s = System32::from_coeffs(vec![0.1, 1.0, -1.0], vec![-3.0, 1.0]).unwrap();
    let (_, dy) = s.vector_field(&1.0, &1.0);
    assert!((dy - 1.1).abs() < 1e-6);
}
