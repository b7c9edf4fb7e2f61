use phaselock_core::{order_param_locking_test, project_mean_zero, spread, tau};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense scan for a sign change of `r − (1/N) Σ √(1 − (ω_i/(γ r))²)`.
fn locked_by_scan(omega: &[f64], gamma: f64) -> bool {
    let w: Vec<f64> = omega.iter().map(|x| x / gamma).collect();
    let lo = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if lo >= 1.0 {
        return false;
    }
    let steps = 20_000;
    (0..=steps).any(|k| {
        let r = lo + (1.0 - lo) * k as f64 / steps as f64;
        let s: f64 = w.iter().map(|x| (1.0 - (x / r).powi(2)).max(0.0).sqrt()).sum();
        r <= s / w.len() as f64
    })
}

#[test]
fn sandwich_chain_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for n in 3..=8 {
        let gamma = n as f64;
        let upper = 2.0 * tau(n).unwrap().value * gamma / n as f64;
        for _ in 0..10_000 {
            let raw: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y = project_mean_zero(&raw).unwrap();
            let target = rng.random_range(0.0..1.1) * upper;
            let w: Vec<f64> = y.iter().map(|v| v * target / spread(&y).value()).collect();
            let locked = order_param_locking_test(&w, gamma).unwrap();
            let s = spread(&w).value();
            if s < gamma {
                assert!(locked, "{w:?}");
            }
            if locked {
                assert!(s < upper, "{w:?}");
            }
        }
    }
}

#[test]
fn grid_test_agrees_with_dense_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut disagreements = 0;
    let trials = 5_000;
    for _ in 0..trials {
        let n = rng.random_range(3..=8);
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y = project_mean_zero(&raw).unwrap();
        let gamma = rng.random_range(0.3..3.0);
        if order_param_locking_test(&y, gamma).unwrap() != locked_by_scan(&y, gamma) {
            disagreements += 1;
        }
    }
    // the coarse grid can only miss roots in a thin shell near the boundary
    assert!(disagreements * 100 < trials, "{disagreements} of {trials}");
}
