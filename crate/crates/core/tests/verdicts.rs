use cedensity::classify::{density_sweep, x_membership, y_membership, VerdictConfig};
use cedensity::returns::{analyze_returns, return_sequence, EpsGeometry};
use cedensity::{critical_orbit, make_logistic, Depth};
use proptest::prelude::*;

fn fast_config() -> VerdictConfig {
    VerdictConfig {
        n_max: 3000,
        lambda_samples: 0,
        ..VerdictConfig::default()
    }
}

#[test]
fn sweep_fraction_stable_under_grid_refinement() {
    let fam = make_logistic();
    let config = fast_config();
    let grid = 200;
    let base = density_sweep(&fam, 4.0, &[1e-2], grid, 1, &config).unwrap().windows[0].fraction_pass;
    for k in [2, 4] {
        let fine = density_sweep(&fam, 4.0, &[1e-2], grid * k, 1, &config).unwrap().windows[0].fraction_pass;
        assert!((fine - base).abs() <= 3.0 / (grid as f64).sqrt(), "grid x{k}: {fine} vs {base}");
    }
}

#[test]
fn sweep_rows_are_sorted_and_inside_window() {
    let fam = make_logistic();
    let res = density_sweep(&fam, 3.9, &[1e-2, 1e-3], 50, 9, &fast_config()).unwrap();
    for w in &res.windows {
        assert!(!w.one_sided);
        assert_eq!(w.rows.len(), 50);
        assert!(w.rows.windows(2).all(|p| p[0].t < p[1].t));
        assert!(w.rows.iter().all(|r| r.t >= w.lo && r.t <= w.hi));
        let exits: usize = w.exit_counts.values().sum();
        assert!(exits <= w.rows.len());
    }
}

#[test]
fn absent_returns_follow_convention() {
    let fam = make_logistic();
    for t in [3.2, 3.5, 3.83, 4.0] {
        let orbit = critical_orbit(&fam, t, 0, 500).unwrap();
        let geom = EpsGeometry::new(1e-3, &fam.critical_points(t)).unwrap();
        let mut recs = return_sequence(&orbit, &geom, 1000).unwrap();
        cedensity::returns::essential_returns(&mut recs);
        cedensity::returns::free_returns(&orbit, &geom, 0.1, &mut recs).unwrap();
        for r in recs.iter().filter(|r| r.s.is_none()) {
            assert_eq!(r.d, Depth::ZERO);
            assert!(!r.essential && !r.free);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn membership_nesting(t in 3.6f64..4.0, le in 2.0f64..4.0) {
        let fam = make_logistic();
        let eps = 10f64.powf(-le);
        let len = 1500;
        let mut prev = true;
        for n in 1..30 {
            let p = x_membership(&fam, t, eps, 5.0, n, len).unwrap().pass;
            prop_assert!(prev || !p, "X at n={}", n);
            prev = p;
        }
        let mut prev = false;
        for c in [0.5, 1.0, 3.0, 10.0, 30.0] {
            let p = x_membership(&fam, t, eps, c, 20, len).unwrap().pass;
            prop_assert!(!prev || p, "X at C={}", c);
            prev = p;
        }
        if let Ok(y) = y_membership(&fam, t, eps, 20.0, 2.0, 1, len) {
            let mut prev = y.pass;
            for m in [2usize, 10, 100, 1000] {
                let p = y_membership(&fam, t, eps, 20.0, 2.0, m, len).unwrap().pass;
                prop_assert!(prev || !p, "Y at m={}", m);
                prev = p;
            }
            let mut prev = false;
            for tau in [1.1, 1.5, 2.0, 4.0] {
                let p = y_membership(&fam, t, eps, 20.0, tau, 200, len).unwrap().pass;
                prop_assert!(!prev || p, "Y at tau={}", tau);
                prev = p;
            }
        }
    }

    #[test]
    fn essential_implies_free(t in 3.6f64..4.0, le in 1.5f64..4.0) {
        let fam = make_logistic();
        let orbit = critical_orbit(&fam, t, 0, 2000).unwrap();
        let (_, recs) = analyze_returns(&fam, &orbit, 10f64.powf(-le), 0.1).unwrap();
        for r in &recs {
            prop_assert!(!r.essential || r.free, "return {} at t={}", r.j, t);
        }
    }
}
