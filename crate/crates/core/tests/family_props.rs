use cedensity::family::{make_logistic, make_poly_family, make_poly_family_with};
use cedensity::{Error, MapFamily};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn families() -> Vec<MapFamily> {
    vec![
        make_logistic(),
        make_poly_family(&[4.0, -9.0]).unwrap(),
        make_poly_family_with(&[4.0, -9.0], Some(&[0.0, 1.0]), 0.0, Some((-0.05, 0.05))).unwrap(),
    ]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn jets_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for fam in families() {
        let (lo, hi) = fam.parameter_domain();
        let mut probes = 0;
        while probes < 100 {
            let t = rng.gen_range(lo + 1e-5..hi - 1e-5);
            let x = rng.gen_range(0.01..0.99);
            let crits = fam.critical_points(t);
            if crits.iter().any(|c| (c.position - x).abs() < 0.02) {
                continue;
            }
            let h = 1e-6;
            let f = fam.map_at(t).unwrap();
            let j = f(x);
            let dfx = (f(x + h).f - f(x - h).f) / (2.0 * h);
            let fp = fam.map_at(t + h).unwrap();
            let fm = fam.map_at(t - h).unwrap();
            let dft = (fp(x).f - fm(x).f) / (2.0 * h);
            assert!(rel(dfx, j.dfx) < 1e-6, "{}: dfx at t={t} x={x}: {dfx} vs {}", fam.label(), j.dfx);
            if j.dft.abs() > 1e-3 {
                assert!(rel(dft, j.dft) < 1e-6, "{}: dft at t={t} x={x}: {dft} vs {}", fam.label(), j.dft);
            }
            probes += 1;
        }
    }
}

#[test]
fn critical_points_move_continuously() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for fam in families() {
        let (lo, hi) = fam.parameter_domain();
        for _ in 0..100 {
            let t = rng.gen_range(lo..hi - 1e-8);
            let a = fam.critical_points(t);
            let b = fam.critical_points(t + 1e-8);
            assert_eq!(a.len(), b.len());
            for (p, q) in a.iter().zip(&b) {
                assert!((p.position - q.position).abs() <= 1e-4);
            }
        }
    }
}

/// Sampled invariance of `[0, 1]` for `Σ a_i x^i + (1 - Σ a_i) x^{n+1}`.
fn grid_invariant(coeffs: &[f64]) -> bool {
    let top = 1.0 - coeffs.iter().sum::<f64>();
    (0..=10_000).all(|i| {
        let x = i as f64 / 1e4;
        let mut v = top * x.powi(coeffs.len() as i32 + 1);
        for (k, a) in coeffs.iter().enumerate() {
            v += a * x.powi(k as i32 + 1);
        }
        (-1e-12..=1.0 + 1e-12).contains(&v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn non_invariant_coefficients_are_rejected(c in proptest::collection::vec(-12.0f64..12.0, 1..4)) {
        if !grid_invariant(&c) {
            let r = make_poly_family(&c);
            prop_assert!(matches!(r, Err(Error::NotIntervalMap { .. })), "{:?} accepted", c);
        }
    }
}
