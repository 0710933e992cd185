//! Stochastic pure-state unraveling of the measurement model.
//!
//! Each trajectory starts in `|0…0⟩` and evolves under `e^{−iHt}` with
//! `H = Σⱼ (k/n) σₓ⁽ʲ⁾`. Measurement events arrive as a Poisson process of total
//! rate `p`; each event picks one coordinate uniformly and projects it onto
//! `|0⟩` or `|1⟩` with Born probabilities. At `t_final` the register is read out.
//!
//! Trajectory `i` draws from ChaCha8 seeded with `seed` on stream `i`, so the
//! counts do not depend on how trajectories are scheduled across threads.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use num_complex::Complex64;

use crate::analysis::CubeDistribution;
use crate::dynamics::WalkParams;
use crate::error::{Result, WalkError};

pub const MAX_TRAJECTORY_DIMENSION: usize = 20;

const BATCH: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryConfig {
    pub params: WalkParams,
    pub t_final: f64,
    pub num_trajectories: u64,
    pub seed: u64,
}

impl TrajectoryConfig {
    pub fn validate(&self) -> Result<()> {
        if self.params.n() > MAX_TRAJECTORY_DIMENSION {
            return Err(WalkError::invalid(
                "n",
                format!(
                    "trajectory simulation supports n <= {MAX_TRAJECTORY_DIMENSION}, got {}",
                    self.params.n()
                ),
            ));
        }
        if self.num_trajectories == 0 {
            return Err(WalkError::invalid("num_trajectories", "need at least one trajectory"));
        }
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return Err(WalkError::invalid(
                "t_final",
                format!("time must be finite and >= 0, got {}", self.t_final),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryResult {
    pub num_trajectories: u64,
    /// Outcome counts indexed by bit string, coordinate 0 most significant.
    pub counts: Vec<u64>,
    pub distribution: CubeDistribution,
    /// Binomial standard error `√(f(1−f)/N)` of each outcome frequency.
    pub standard_errors: Vec<f64>,
}

impl TrajectoryResult {
    fn n(&self) -> usize {
        self.distribution.n()
    }

    /// Empirical probability that coordinate `site` reads 1, with its binomial standard error.
    pub fn marginal_one(&self, site: usize) -> (f64, f64) {
        let f = self.distribution.marginal_one(site);
        (f, (f * (1.0 - f) / self.num_trajectories as f64).sqrt())
    }

    pub fn marginals_one(&self) -> Vec<(f64, f64)> {
        (0..self.n()).map(|site| self.marginal_one(site)).collect()
    }
}

/// Pure state of an `n`-qubit register.
struct Register {
    n: usize,
    amps: Vec<Complex64>,
}

impl Register {
    fn zero(n: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Register { n, amps }
    }

    fn mask(&self, site: usize) -> usize {
        1 << (self.n - 1 - site)
    }

    /// Applies `cos θ·1 − i sin θ·σₓ` to every coordinate.
    fn rotate_all(&mut self, theta: f64) {
        if theta == 0.0 {
            return;
        }
        let (s, c) = theta.sin_cos();
        let minus_is = Complex64::new(0.0, -s);
        for site in 0..self.n {
            let mask = self.mask(site);
            for x in 0..self.amps.len() {
                if x & mask == 0 {
                    let a0 = self.amps[x];
                    let a1 = self.amps[x | mask];
                    self.amps[x] = a0 * c + a1 * minus_is;
                    self.amps[x | mask] = a0 * minus_is + a1 * c;
                }
            }
        }
    }

    fn prob_one(&self, site: usize) -> f64 {
        let mask = self.mask(site);
        self.amps
            .iter()
            .enumerate()
            .filter(|(x, _)| x & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    fn collapse(&mut self, site: usize, outcome: bool, prob: f64) {
        let mask = self.mask(site);
        let scale = 1.0 / prob.sqrt();
        for (x, a) in self.amps.iter_mut().enumerate() {
            if (x & mask != 0) == outcome {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
    }

    fn measure<R: Rng>(&mut self, site: usize, rng: &mut R) {
        let p1 = self.prob_one(site).clamp(0.0, 1.0);
        let outcome = rng.random::<f64>() < p1;
        let prob = if outcome { p1 } else { 1.0 - p1 };
        self.collapse(site, outcome, prob);
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (x, a) in self.amps.iter().enumerate() {
            acc += a.norm_sqr();
            if u < acc {
                return x;
            }
        }
        // rounding left u above the cumulative total; take the last populated outcome
        self.amps.iter().rposition(|a| a.norm_sqr() > 0.0).unwrap_or(0)
    }
}

fn run_one(config: &TrajectoryConfig, index: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    let params = &config.params;
    let n = params.n();
    let omega = params.per_qubit_energy();
    let mut reg = Register::zero(n);
    let mut now = 0.0;
    if params.p() > 0.0 {
        let waiting = Exp::new(params.p()).expect("positive rate");
        loop {
            let next = now + waiting.sample(&mut rng);
            if next >= config.t_final {
                break;
            }
            reg.rotate_all(omega * (next - now));
            let site = rng.random_range(0..n);
            reg.measure(site, &mut rng);
            now = next;
        }
    }
    reg.rotate_all(omega * (config.t_final - now));
    reg.sample(&mut rng)
}

/// Runs the ensemble and returns empirical outcome frequencies.
pub fn run_trajectories(config: &TrajectoryConfig) -> Result<TrajectoryResult> {
    config.validate()?;
    let n = config.params.n();
    let total = config.num_trajectories;
    let batches = total.div_ceil(BATCH);
    let counts = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut local = vec![0u64; 1 << n];
            for index in b * BATCH..((b + 1) * BATCH).min(total) {
                local[run_one(config, index)] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; 1 << n],
            |mut acc, part| {
                acc.iter_mut().zip(part).for_each(|(a, b)| *a += b);
                acc
            },
        );

    let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
    let standard_errors = freqs
        .iter()
        .map(|f| (f * (1.0 - f) / total as f64).sqrt())
        .collect();
    // frequencies sum to 1 up to rounding; renormalize to satisfy the exact-sum check
    let sum: f64 = freqs.iter().sum();
    let freqs = freqs.into_iter().map(|f| f / sum).collect();
    Ok(TrajectoryResult {
        num_trajectories: total,
        counts,
        distribution: CubeDistribution::full(n, freqs)?,
        standard_errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn config(n: usize, k: f64, p: f64, t: f64, num: u64, seed: u64) -> TrajectoryConfig {
        TrajectoryConfig {
            params: WalkParams::new(n, k, p).unwrap(),
            t_final: t,
            num_trajectories: num,
            seed,
        }
    }

    #[test]
    fn zero_time_stays_at_origin() {
        let r = run_trajectories(&config(4, 1.0, 2.0, 0.0, 500, 1)).unwrap();
        assert_eq!(r.counts[0], 500);
        assert!(r.counts[1..].iter().all(|&c| c == 0));
    }

    #[test]
    fn noiseless_half_flip_marginals() {
        // k t / n = π/4: each coordinate is 1 with probability ½
        let r = run_trajectories(&config(2, 1.0, 0.0, PI / 2.0, 10_000, 3)).unwrap();
        for (f, se) in r.marginals_one() {
            assert!((f - 0.5).abs() <= 3.0 * se, "{f} ± {se}");
        }
    }

    #[test]
    fn noiseless_full_flip_is_deterministic() {
        let r = run_trajectories(&config(3, 1.0, 0.0, 1.5 * PI, 200, 9)).unwrap();
        assert_eq!(r.counts[7], 200);
    }

    #[test]
    fn same_seed_same_counts() {
        let a = run_trajectories(&config(3, 1.0, 0.5, 5.0, 5_000, 42)).unwrap();
        let b = run_trajectories(&config(3, 1.0, 0.5, 5.0, 5_000, 42)).unwrap();
        assert_eq!(a.counts, b.counts);
        let c = run_trajectories(&config(3, 1.0, 0.5, 5.0, 5_000, 43)).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(run_trajectories(&config(21, 1.0, 0.5, 1.0, 10, 0)).is_err());
        assert!(run_trajectories(&config(2, 1.0, 0.5, 1.0, 0, 0)).is_err());
        assert!(run_trajectories(&config(2, 1.0, 0.5, -1.0, 10, 0)).is_err());
    }

    #[test]
    fn measurement_collapses_and_renormalizes() {
        let mut reg = Register::zero(2);
        reg.rotate_all(PI / 4.0);
        assert!((reg.prob_one(0) - 0.5).abs() < 1e-15);
        reg.collapse(0, true, 0.5);
        assert!((reg.prob_one(0) - 1.0).abs() < 1e-15);
        assert!((reg.prob_one(1) - 0.5).abs() < 1e-15);
        let norm: f64 = reg.amps.iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-15);
    }
}
