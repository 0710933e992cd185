mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hypercube_walk::analysis::{hellinger_product, hellinger_single, hitting_times, tv_bounds, tv_exact};
use hypercube_walk::oracle::{evolve_full, evolve_single};
use hypercube_walk::state::random_density;
use hypercube_walk::{gamma, prob0, prob1, DensityState, Regime, WalkParams};

use common::{brute_overlap, brute_sq_diff, brute_tv};

fn params(n: usize, k: f64, p: f64) -> WalkParams {
    WalkParams::new(n, k, p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gamma_stays_in_half_interval(n in 1usize..64, k in 1e-3f64..10.0, p in 0.0f64..100.0, t in 0.0f64..500.0) {
        let w = params(n, k, p);
        let g = gamma(&w, t);
        prop_assert!(g.is_finite() && g.abs() <= 0.5);
        prop_assert!((prob0(&w, t) + prob1(&w, t) - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn noiseless_walk_is_cos_squared(n in 1usize..64, k in 1e-3f64..10.0, t in 0.0f64..100.0) {
        let w = params(n, k, 0.0);
        prop_assert!((prob0(&w, t) - (k * t / n as f64).cos().powi(2)).abs() <= 1e-12);
    }

    #[test]
    fn continuous_across_critical_damping(n in 1usize..20, k in 0.1f64..5.0, t in 0.0f64..50.0) {
        let c = params(n, k, 4.0 * k);
        let below = params(n, k, 4.0 * k * (1.0 - 1e-6));
        let above = params(n, k, 4.0 * k * (1.0 + 1e-6));
        prop_assert_eq!(c.regime(), Regime::Critical);
        prop_assert_eq!(below.regime(), Regime::Underdamped);
        prop_assert_eq!(above.regime(), Regime::Overdamped);
        let g = gamma(&c, t);
        prop_assert!((gamma(&below, t) - g).abs() <= 1e-5);
        prop_assert!((gamma(&above, t) - g).abs() <= 1e-5);
    }

    #[test]
    fn envelope_bounds_gamma_up_to_critical(n in 1usize..20, k in 0.1f64..5.0, frac in 0.0f64..=1.0, t in 0.0f64..200.0) {
        let p = 4.0 * k * frac;
        let w = params(n, k, p);
        let x = p * t / (2.0 * n as f64);
        prop_assert!(gamma(&w, t).abs() <= 0.5 * (-x).exp() * (1.0 + x) + 1e-15);
    }

    #[test]
    fn hitting_times_are_local_maxima(n in 1usize..10, k in 0.2f64..4.0, frac in 0.0f64..0.95) {
        let w = params(n, k, 4.0 * k * frac);
        for h in hitting_times(&w, 3).unwrap() {
            let dt = 1e-4 * h.t.max(1.0);
            let centre = prob1(&w, h.t);
            prop_assert!(centre + 1e-13 >= prob1(&w, h.t - dt));
            prop_assert!(centre + 1e-13 >= prob1(&w, h.t + dt));
            prop_assert!((centre.powi(n as i32) - h.p_hit).abs() <= 1e-10);
        }
    }

    #[test]
    fn distances_match_enumeration(g in -0.5f64..=0.5, n in 1usize..=12) {
        prop_assert!((tv_exact(g, n) - brute_tv(g, n)).abs() <= 1e-12);
        let h = hellinger_product(g, n);
        prop_assert!((h * h - (1.0 - brute_overlap(g, n))).abs() <= 1e-12);
        let h1 = hellinger_single(g);
        prop_assert!(((1.0 - h * h) - (1.0 - h1 * h1).powi(n as i32)).abs() <= 1e-12);
        let (lo, hi) = tv_bounds(g, n);
        prop_assert!((lo - brute_sq_diff(g, n)).abs() <= 1e-12);
        let tv = tv_exact(g, n);
        prop_assert!(lo <= tv + 1e-12 && tv <= hi + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn evolution_preserves_density_matrices(seed in any::<u64>(), n in 1usize..=3, k in 0.05f64..4.0, p in 0.0f64..20.0, t in 0.0f64..20.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho0 = random_density(1 << n, &mut rng);
        let rho = evolve_full(&params(n, k, p), t, &rho0).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() <= 1e-12 && rho.trace().im.abs() <= 1e-12);
        prop_assert!(rho.hermiticity_error() <= 1e-12);
        prop_assert!(rho.min_eigenvalue() >= -1e-10);
    }

    #[test]
    fn single_qubit_oracle_matches_closed_form(n in 1usize..=10, k in 0.01f64..4.0, p in 0.0f64..20.0, t in 0.0f64..50.0) {
        let w = params(n, k, p);
        let rho = evolve_single(&w, t, &DensityState::basis(2, 0)).unwrap();
        prop_assert!((rho.diagonal()[0] - prob0(&w, t)).abs() <= 1e-10);
    }
}
