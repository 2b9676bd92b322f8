use lienard::cycles::{census, refine_semistable, CycleOptions, ReturnMap, Stability};
use lienard::rotate::*;
use lienard::singular::find_finite_singularities;
use lienard::*;

fn sys(a: &[f64], b: &[f64]) -> System64 {
    System64::from_coeffs(a.to_vec(), b.to_vec()).unwrap()
}

#[test]
fn origin_hopf_exact() {
    let ev = hopf_scan(&sys(&[0.3, 1.0, -1.0], &[-3.0, 1.0]), Slot::Alpha(0), (-1.0, 1.0)).unwrap();
    let o: Vec<_> = ev.iter().filter(|e| e.anchor.x == 0.0).collect();
    assert_eq!(o.len(), 1);
    assert_eq!(o[0].param_value, 0.0);
    assert_eq!(o[0].kind, EventKind::Hopf);
}

#[test]
fn outer_anchor_affine_root() {
    // trace at x* = (3 + sqrt 5)/2 is a0 + x* - x*^2, zero at a0 = x*^2 - x*
    let x = (3.0 + 5f64.sqrt()) / 2.0;
    let ev = hopf_scan(&sys(&[0.0, 1.0, -1.0], &[-3.0, 1.0]), Slot::Alpha(0), (-5.0, 5.0)).unwrap();
    let outer = ev.iter().find(|e| (e.anchor.x - x).abs() < 1e-9).unwrap();
    assert!((outer.param_value - (x * x - x)).abs() < 1e-10);
}

#[test]
fn beta_slot_has_no_origin_event() {
    let ev = hopf_scan(&sys(&[0.3, 1.0, -1.0], &[-3.0, 1.0]), Slot::Beta(1), (-5.0, 5.0)).unwrap();
    assert!(ev.iter().all(|e| e.anchor.x != 0.0));
}

#[test]
fn unknown_slot_rejected() {
    assert!(hopf_scan(&sys(&[0.3], &[]), Slot::Alpha(4), (-1.0, 1.0)).is_err());
    assert!("c2".parse::<Slot>().is_err());
    assert_eq!("a4".parse::<Slot>().unwrap(), Slot::Alpha(4));
}

fn snapshot_counts(log: &SweepLog<f64>) -> Vec<usize> {
    log.snapshots.iter().map(|s| s.census.totals.origin).collect()
}

#[test]
fn k1_plan_opposite_signs() {
    let plan = SweepPlan {
        template: sys(&[0.0, 1.0, 0.0], &[]),
        order: vec![
            SlotSweep { slot: Slot::Alpha(2), from: None, to: -1.0, steps: 10 },
            SlotSweep { slot: Slot::Alpha(0), from: Some(-0.05), to: 0.1, steps: 15 },
        ],
    };
    let log = sweep(&plan, &CycleOptions::default()).unwrap();
    assert!(log.aborted.is_none());
    for s in &log.snapshots {
        let (a0, a2) = (s.system.alpha()[0], s.system.alpha()[2]);
        let n = s.census.totals.origin;
        if a0.abs() < 1e-6 {
            // cycle radius 2 sqrt(|a0|) is below r_min
            continue;
        }
        if a0 * a2 < 0.0 {
            assert_eq!(n, 1, "a0={a0} a2={a2}");
        } else {
            assert_eq!(n, 0, "a0={a0} a2={a2}");
        }
    }
    assert!(log.events.iter().any(|e| e.kind == EventKind::Hopf && e.param_value.abs() < 1e-10));
}

#[test]
fn k1_plan_same_signs() {
    let plan = SweepPlan {
        template: sys(&[0.0, 1.0, 0.0], &[]),
        order: vec![
            SlotSweep { slot: Slot::Alpha(2), from: None, to: 1.0, steps: 10 },
            SlotSweep { slot: Slot::Alpha(0), from: Some(0.01), to: 0.5, steps: 10 },
        ],
    };
    let log = sweep(&plan, &CycleOptions::default()).unwrap();
    assert!(snapshot_counts(&log).iter().all(|&n| n == 0));
}

#[test]
fn k0_plan_never_has_cycles() {
    let plan = SweepPlan {
        template: sys(&[-0.5], &[]),
        order: vec![SlotSweep { slot: Slot::Alpha(0), from: None, to: 0.5, steps: 10 }],
    };
    let log = sweep(&plan, &CycleOptions::default()).unwrap();
    assert!(snapshot_counts(&log).iter().all(|&n| n == 0));
}

#[test]
fn fold_gives_semistable_cycle() {
    let template = sys(&[-0.001, 1.0, 0.1, 1.0, -1.0], &[]);
    let plan = SweepPlan {
        template: template.clone(),
        order: vec![SlotSweep { slot: Slot::Alpha(0), from: None, to: -0.01, steps: 50 }],
    };
    let opts = CycleOptions::default();
    let log = sweep(&plan, &opts).unwrap();
    let fold = log.events.iter().find(|e| e.kind == EventKind::Fold).expect("fold event");
    assert!(fold.bracket_width <= 1e-6 * 0.009 * 1.01);
    let s = template.with_alpha(0, fold.param_value);
    let o = &find_finite_singularities(&s)[0];
    let map = ReturnMap::new(&s, o, &opts);
    let semi = refine_semistable(&map, (0.2, 0.45), &opts).expect("semi-stable cycle");
    assert_eq!(semi.stability, Stability::SemiStable);
    // limit of the merging pair from the side where it exists
    let pair = census(&template.with_alpha(0, fold.param_value + 1e-9), &opts);
    let rs: Vec<f64> = pair.origin().unwrap().cycles.iter().map(|c| c.r_star).collect();
    assert_eq!(rs.len(), 2);
    for r in rs {
        assert!((r - semi.r_star).abs() < 1e-4, "{r} vs {}", semi.r_star);
    }
}

#[test]
fn construct_k1_l0() {
    let c = construct_configuration::<f64>(1, 0, &[], &[], &ConstructOptions::default(), &CycleOptions::default()).unwrap();
    assert!(c.reached);
    assert_eq!(c.census.totals_pair(), (1, 0));
}

#[test]
fn construct_k0_l0() {
    let c = construct_configuration::<f64>(0, 0, &[], &[], &ConstructOptions::default(), &CycleOptions::default()).unwrap();
    assert_eq!(c.census.totals_pair(), (0, 0));
    assert_eq!(c.system.expand().k(), 0);
}

#[test]
fn construct_k1_l1() {
    let opts = CycleOptions::default();
    let c = construct_configuration(1, 1, &[-3.0], &[Sign::Plus], &ConstructOptions::default(), &opts).unwrap();
    assert!(c.reached);
    assert!(c.adjustments <= 10);
    assert_eq!(c.census.totals_pair(), (1, 1));
    let outer = (3.0 + 5f64.sqrt()) / 2.0;
    assert!(c.census.anchors.iter().any(|a| (a.x - outer).abs() < 1e-9 && a.cycles.len() == 1));
}

#[test]
fn monotonicity_k1() {
    // a stable cycle expands as a2 increases
    let s = sys(&[0.1, 1.0, -1.0], &[]);
    let values = [-1.0, -0.9, -0.8, -0.7, -0.6];
    let r = certify_rotation_monotonicity(&s, Slot::Alpha(2), &values, &CycleOptions::default()).unwrap();
    assert_eq!(r.result, Certification::Pass);
    let radii: Vec<f64> = r.tracks[0].radii.iter().map(|x| x.unwrap()).collect();
    assert!(radii.windows(2).all(|w| w[1] > w[0]), "{radii:?}");
}

#[test]
fn monotonicity_identical_values() {
    let s = sys(&[0.1, 1.0, -1.0], &[]);
    let r = certify_rotation_monotonicity(&s, Slot::Alpha(2), &[-1.0, -1.0], &CycleOptions::default()).unwrap();
    assert_eq!(r.result, Certification::Pass);
}

#[test]
fn monotonicity_two_cycle_pair() {
    let s = sys(&[-0.001, 1.0, 0.1, 1.0, -1.0], &[]);
    let values = [0.1, 0.105, 0.11, 0.115, 0.12];
    let r = certify_rotation_monotonicity(&s, Slot::Alpha(2), &values, &CycleOptions::default()).unwrap();
    assert_eq!(r.result, Certification::Pass);
    let inner: Vec<f64> = r.tracks[0].radii.iter().map(|x| x.unwrap()).collect();
    let outer: Vec<f64> = r.tracks[1].radii.iter().map(|x| x.unwrap()).collect();
    assert!(inner.windows(2).all(|w| w[1] < w[0]));
    assert!(outer.windows(2).all(|w| w[1] > w[0]));
}
