use lienard::cycles::*;
use lienard::singular::find_finite_singularities;
use lienard::*;

fn sys(a: &[f64], b: &[f64]) -> System64 {
    System64::from_coeffs(a.to_vec(), b.to_vec()).unwrap()
}

fn origin_profile(s: &System64, opts: &CycleOptions<f64>) -> (DisplacementProfile<f64>, CycleCount<f64>) {
    let o = &find_finite_singularities(s)[0];
    let map = ReturnMap::new(s, o, opts);
    let p = displacement_profile(&map, opts.r_min, map.default_r_max(), opts.n_samples).unwrap();
    let c = count_cycles(&map, &p, opts);
    (p, c)
}

#[test]
fn center_profile_is_flat() {
    let opts = CycleOptions::default();
    let (p, c) = origin_profile(&sys(&[0.0, 0.0, 0.0], &[]), &opts);
    assert_eq!(p.ok_count(), 64);
    assert!(p.d.iter().flatten().all(|d| d.abs() < 1e-8));
    assert!(c.cycles.is_empty());
}

#[test]
fn k1_profile_changes_sign_once() {
    let opts = CycleOptions::default();
    let (p, c) = origin_profile(&sys(&[0.1, 1.0, -1.0], &[]), &opts);
    let ds: Vec<f64> = p.d.iter().flatten().copied().collect();
    assert!(ds[0] > 0.0);
    assert!(*ds.last().unwrap() < 0.0);
    assert_eq!(c.cycles.len(), 1);
    let cyc = &c.cycles[0];
    assert_eq!(cyc.stability, Stability::Stable);
    // frozen from a 1e-11 run
    assert!((cyc.r_star - 0.6478).abs() < 2e-3, "{}", cyc.r_star);
    assert!(cyc.residual.abs() < 1e-9);
}

#[test]
fn k1_cycle_agrees_with_dense_grid() {
    let s = sys(&[0.1, 1.0, -1.0], &[]);
    let opts = CycleOptions::default();
    let a = census(&s, &opts);
    let b = census(&s, &opts.dense_oracle());
    assert_eq!(a.totals_pair(), (1, 0));
    assert_eq!(b.totals_pair(), (1, 0));
    let (ra, rb) = (a.origin().unwrap().cycles[0].r_star, b.origin().unwrap().cycles[0].r_star);
    assert!((ra - rb).abs() < 1e-6);
}

#[test]
fn single_sample_grid() {
    let s = sys(&[0.1, 1.0, -1.0], &[]);
    let opts = CycleOptions::default();
    let o = &find_finite_singularities(&s)[0];
    let map = ReturnMap::new(&s, o, &opts);
    let p = displacement_profile(&map, 0.3, 0.3, 1).unwrap();
    assert_eq!(p.radii.len(), 1);
    assert!(count_cycles(&map, &p, &opts).cycles.is_empty());
}

#[test]
fn two_cycles_inner_unstable() {
    let s = sys(&[-0.001, 1.0, 0.1, 1.0, -1.0], &[]);
    let opts = CycleOptions::default();
    let c = census(&s, &opts);
    let st: Vec<Stability> = c.origin().unwrap().cycles.iter().map(|c| c.stability).collect();
    assert_eq!(st, [Stability::Unstable, Stability::Stable]);
    assert!(c.origin().unwrap().alternation_ok);
    assert_eq!(census(&s, &opts.dense_oracle()).totals_pair(), (2, 0));
}

#[test]
fn semistable_absent_on_clean_sign_change() {
    let s = sys(&[0.1, 1.0, -1.0], &[]);
    let opts = CycleOptions::default();
    let o = &find_finite_singularities(&s)[0];
    let map = ReturnMap::new(&s, o, &opts);
    assert!(refine_semistable(&map, (0.3, 1.0), &opts).is_none());
}

#[test]
fn semistable_absent_in_center_region() {
    let s = sys(&[0.0], &[]);
    let opts = CycleOptions::default();
    let o = &find_finite_singularities(&s)[0];
    let map = ReturnMap::new(&s, o, &opts);
    // d is zero to integration accuracy; the tangency test is under the
    // signal threshold, so nothing is reported from the census either.
    assert!(census(&s, &opts).totals_pair() == (0, 0));
    let _ = refine_semistable(&map, (0.2, 0.8), &opts);
}

#[test]
fn all_zero_damping_census_empty() {
    for b in [vec![], vec![-3.0, 1.0], vec![0.0, -1.0]] {
        let s = System64::from_coeffs(vec![0.0; 3], b).unwrap();
        assert_eq!(census(&s, &CycleOptions::default()).totals_pair(), (0, 0));
    }
}

#[test]
fn neighbour_basin_detected() {
    // The outer anti-saddle sits beyond the saddle; large circles around
    // the origin cross past it.
    let s = sys(&[0.0, 0.0, 0.0], &[-3.0, 1.0]);
    let o = &find_finite_singularities(&s)[0];
    let map = ReturnMap::new(&s, o, &CycleOptions::default());
    assert!(map.default_r_max() < 0.382);
    assert_eq!(map.sample(0.5).status, SampleStatus::HitOtherBasin);
}

#[test]
fn profile_csv() {
    let opts = CycleOptions::default().with_samples(5);
    let (p, _) = origin_profile(&sys(&[0.1, 1.0, -1.0], &[]), &opts);
    let mut buf = Vec::new();
    p.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("r,d,status\n"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn single_precision_census() {
    let s = System32::from_coeffs(vec![0.1, 1.0, -1.0], vec![]).unwrap();
    let opts = CycleOptions::<f32> { signal_tol: 1e-4, fixed_point_tol: 1e-4, ..CycleOptions::default().with_tol(1e-5) };
    let c = census(&s, &opts);
    assert_eq!(c.totals_pair(), (1, 0));
    let r = c.origin().unwrap().cycles[0].r_star;
    assert!((r - 0.6478).abs() < 5e-3, "{r}");
}

#[test]
fn three_nested_cycles_k3() {
    let s = System64::from_coeffs(vec![7.8e-5, 1.0, -0.0347, 1.0, 0.69, 1.0, -1.0], vec![]).unwrap();
    let c = census(&s, &CycleOptions::default());
    assert_eq!(c.totals_pair(), (3, 0));
}
