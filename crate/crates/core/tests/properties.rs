use lienard::cycles::{census, CycleOptions};
use lienard::flow::{crossings, integrate};
use lienard::singular::*;
use lienard::system::canonical_field;
use lienard::*;
use proptest::prelude::*;

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn canonical() -> impl Strategy<Value = Canonical64> {
    (0usize..=3, 0usize..=2).prop_flat_map(|(k, l)| {
        (
            prop::collection::vec(-2.0..2.0f64, k + 1),
            prop::collection::vec(-4.0..4.0f64, l),
            prop::collection::vec(sign(), l),
        )
            .prop_map(move |(a, b, s)| Canonical64::new(k, l, a, b, s).unwrap())
    })
}

fn restoring_only() -> impl Strategy<Value = System64> {
    (0usize..=2).prop_flat_map(|l| {
        prop::collection::vec(-3.0..3.0f64, 2 * l)
            .prop_map(move |b| System64::new(0, l, vec![0.0], b).unwrap())
    })
}

fn simple(s: &System64) -> bool {
    find_finite_singularities(s)
        .iter()
        .all(|p| !matches!(p.kind, PointKind::SaddleNode | PointKind::Degenerate))
}

/// Smallest gap between distinct finite singular points.
fn separation(s: &System64) -> f64 {
    let xs: Vec<f64> = find_finite_singularities(s).iter().map(|p| p.x).collect();
    xs.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

proptest! {
    #[test]
    fn rotation_determinants_nonnegative(
        c in canonical(),
        pts in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 20),
    ) {
        let signs = c.even_signs.clone();
        let field = canonical_field(c.k, &c.beta_odd, &signs).unwrap();
        for i in 0..=c.k {
            let d = field.rotation_determinant(i).unwrap().to_bivariate().unwrap();
            for (x, y) in &pts {
                let v = d.eval(x, y);
                prop_assert!(v >= -1e-12);
                prop_assert!((v - x.powi(2 * i as i32) * y * y).abs() <= 1e-12 * (1.0 + v.abs()));
            }
        }
    }

    #[test]
    fn canonical_round_trip(c in canonical()) {
        let s = c.expand();
        prop_assert_eq!(s.k(), c.k);
        prop_assert_eq!(s.l(), c.l);
        prop_assert_eq!(Canonical64::from_system(&s), Some(c));
    }

    #[test]
    fn singular_points_are_roots(c in canonical()) {
        let s = c.expand();
        let g = s.restoring();
        let pts = find_finite_singularities(&s);
        prop_assert!(pts.len() <= 2 * c.l + 1);
        prop_assert!(pts.windows(2).all(|w| w[0].x < w[1].x));
        for p in &pts {
            let scale = g.coeffs().iter().map(|c| c.abs()).sum::<f64>() * (1.0 + p.x.abs()).powi(g.degree().unwrap_or(0) as i32);
            prop_assert!(g.eval(&p.x).abs() <= 1e-9 * scale, "g({}) = {}", p.x, g.eval(&p.x));
        }
    }

    #[test]
    fn negative_det_iff_saddle(c in canonical()) {
        let s = c.expand();
        prop_assume!(simple(&s));
        for p in find_finite_singularities(&s) {
            prop_assert_eq!(p.det < 0.0, p.kind == PointKind::Saddle);
            prop_assert_eq!(p.index, if p.det < 0.0 { -1 } else { 1 });
        }
    }

    #[test]
    fn contour_agrees_with_jacobian(c in canonical()) {
        let s = c.expand();
        prop_assume!(simple(&s));
        let r = (separation(&s) / 3.0).min(0.1);
        for p in find_finite_singularities(&s) {
            prop_assert_eq!(contour_index(&s, [p.x, 0.0], r), Ok(p.index));
        }
    }

    #[test]
    fn saddles_alternate(c in canonical()) {
        let s = c.expand();
        prop_assume!(simple(&s));
        prop_assert_eq!(check_alternation(&s), Alternation::Pass);
    }

    #[test]
    fn index_stable_under_resampling(c in canonical(), scale in 0.8..1.2f64) {
        let s = c.expand();
        prop_assume!(simple(&s));
        let r = (separation(&s) / 3.0).min(0.1);
        for p in find_finite_singularities(&s) {
            let a = poincare_index(&s, [p.x, 0.0], r, 512);
            let b = poincare_index(&s, [p.x, 0.0], r, 1024);
            let d = poincare_index(&s, [p.x, 0.0], r * scale, 1024);
            // a refused contour (under-sampled) is not a disagreement
            for other in [b, d] {
                if let (Ok(x), Ok(y)) = (&a, &other) {
                    prop_assert_eq!(x, y);
                }
            }
            let c = poincare_index(&s, [p.x, 0.0], r, 4096);
            prop_assert!(c.is_err() || c == Ok(p.index));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn time_reversal(c in canonical(), x0 in -0.3..0.3f64, y0 in -0.3..0.3f64, t in 0.5..3.0f64) {
        let s = c.expand();
        let opts = FlowOptions::for_system(&s, 1e-12);
        let fwd = integrate(&s, [x0, y0], t, opts).unwrap();
        prop_assume!(fwd.terminal == Terminal::TimeLimit);
        let end = fwd.last_state();
        prop_assume!(end[0].hypot(end[1]) < 10.0);
        // Skip runs whose divergence integral makes the reverse problem
        // ill-conditioned.
        let f = s.damping();
        let stretch: f64 = fwd.samples.windows(2).map(|w| f.eval(&w[0].1).abs() * (w[1].0 - w[0].0)).sum();
        prop_assume!(stretch < 5.0);
        let back = integrate(&s, end, -t, opts).unwrap();
        let [x, y] = back.last_state();
        prop_assert!((x - x0).abs() < 1e-6 && (y - y0).abs() < 1e-6, "({x}, {y}) vs ({x0}, {y0})");
    }

    #[test]
    fn energy_conserved_without_damping(s in restoring_only(), r in 0.02..0.2f64) {
        let big_g = s.restoring().antiderivative();
        let energy = |p: [f64; 2]| p[1] * p[1] / 2.0 + big_g.eval(&p[0]);
        let opts = FlowOptions::for_system(&s, 1e-11);
        let tr = integrate(&s, [r, 0.0], 10.0, opts).unwrap();
        let e0 = energy([r, 0.0]);
        for &(_, x, y) in &tr.samples {
            prop_assert!((energy([x, y]) - e0).abs() < 1e-8 * (1.0 + e0.abs()));
        }
    }

    #[test]
    fn mirror_symmetry_without_damping(s in restoring_only(), x0 in -0.1..0.1f64, y0 in 0.01..0.1f64) {
        // (x, y, t) -> (x, -y, -t)
        let opts = FlowOptions::for_system(&s, 1e-12);
        let a = integrate(&s, [x0, y0], 2.0, opts).unwrap();
        let b = integrate(&s, [x0, -y0], -2.0, opts).unwrap();
        prop_assume!(a.terminal == Terminal::TimeLimit && b.terminal == Terminal::TimeLimit);
        let [xa, ya] = a.last_state();
        let [xb, yb] = b.last_state();
        prop_assert!((xa - xb).abs() < 1e-8 && (ya + yb).abs() < 1e-8);
    }

    #[test]
    fn hopf_sign_sets_local_stability(a0 in 0.01..0.2f64, neg in any::<bool>(), rest in canonical()) {
        let s = rest.with_alpha_even(0, if neg { -a0 } else { a0 }).expand();
        let r0 = 1e-3;
        let run = crossings(&s, [r0, 0.0], &Ray::positive_x(0.0), 1, 100.0, FlowOptions::for_system(&s, 1e-12)).unwrap();
        prop_assume!(run.events.len() == 1);
        let grew = run.events[0].r > r0;
        prop_assert_eq!(grew, !neg);
    }
}

fn k1() -> impl Strategy<Value = System64> {
    (0.01..0.5f64, 0.1..1.0f64, any::<bool>()).prop_map(|(m0, m2, flip)| {
        let s = if flip { -1.0 } else { 1.0 };
        System64::from_coeffs(vec![s * m0, 1.0, -s * m2], vec![]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tolerance_convergence(s in k1()) {
        let opts = CycleOptions::default();
        let a = census(&s, &opts);
        let b = census(&s, &opts.with_tol(opts.tol / 2.0));
        prop_assert_eq!(a.totals_pair(), b.totals_pair());
        for (x, y) in a.all_cycles().zip(b.all_cycles()) {
            prop_assert!((x.r_star - y.r_star).abs() < 1e-4 * x.r_star);
        }
    }

    #[test]
    fn grid_refinement_keeps_count(s in k1()) {
        let opts = CycleOptions::default();
        let a = census(&s, &opts);
        let b = census(&s, &opts.with_samples(128));
        prop_assert_eq!(a.totals_pair(), b.totals_pair());
    }
}
