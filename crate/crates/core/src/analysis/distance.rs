//! Hellinger and total-variation distances between the walk's measurement
//! distribution and the uniform distribution on `{0,1}ⁿ`.
//!
//! Total variation is unhalved: `‖A − B‖ = Σₓ |A(x) − B(x)|`, so it ranges over `[0, 2]`.
//! `hellinger_*` return `H` with `H² = 1 − Σₓ √(A(x)B(x))`.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Result, WalkError};

/// Largest dimension for which a full `2ⁿ` probability vector is materialized.
pub const MAX_FULL_DIMENSION: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CubeForm {
    /// Independent coordinates, each with `P(0) = ½ + gamma`.
    Product { gamma: f64 },
    /// Explicit probabilities indexed by bit string, coordinate 0 most significant.
    Full { probabilities: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubeDistribution {
    n: usize,
    form: CubeForm,
}

impl CubeDistribution {
    pub fn product(n: usize, gamma: f64) -> Result<Self> {
        if n == 0 {
            return Err(WalkError::invalid("n", "dimension must be at least 1"));
        }
        if !(gamma.abs() <= 0.5) {
            return Err(WalkError::invalid("gamma", format!("|gamma| must be <= 1/2, got {gamma}")));
        }
        Ok(CubeDistribution {
            n,
            form: CubeForm::Product { gamma },
        })
    }

    pub fn full(n: usize, probabilities: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_FULL_DIMENSION {
            return Err(WalkError::invalid(
                "n",
                format!("full distributions need 1 <= n <= {MAX_FULL_DIMENSION}, got {n}"),
            ));
        }
        if probabilities.len() != 1 << n {
            return Err(WalkError::Dimension {
                expected: 1 << n,
                actual: probabilities.len(),
            });
        }
        if probabilities.iter().any(|&x| !(x >= 0.0)) {
            return Err(WalkError::invalid("probabilities", "entries must be non-negative"));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(WalkError::invalid("probabilities", format!("sum is {total}, expected 1")));
        }
        Ok(CubeDistribution {
            n,
            form: CubeForm::Full { probabilities },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn form(&self) -> &CubeForm {
        &self.form
    }

    pub fn probability(&self, x: usize) -> f64 {
        match &self.form {
            CubeForm::Full { probabilities } => probabilities[x],
            CubeForm::Product { gamma } => {
                let ones = x.count_ones() as i32;
                (0.5 + gamma).powi(self.n as i32 - ones) * (0.5 - gamma).powi(ones)
            }
        }
    }

    /// The full `2ⁿ` probability vector.
    pub fn to_full(&self) -> Result<Vec<f64>> {
        if self.n > MAX_FULL_DIMENSION {
            return Err(WalkError::invalid("n", "too large to enumerate"));
        }
        Ok((0..1usize << self.n).map(|x| self.probability(x)).collect())
    }

    /// Probability that coordinate `site` reads 1.
    pub fn marginal_one(&self, site: usize) -> f64 {
        assert!(site < self.n, "coordinate out of range");
        match &self.form {
            CubeForm::Product { gamma } => 0.5 - gamma,
            CubeForm::Full { probabilities } => {
                let mask = 1usize << (self.n - 1 - site);
                probabilities
                    .iter()
                    .enumerate()
                    .filter(|(x, _)| x & mask != 0)
                    .map(|(_, p)| p)
                    .sum()
            }
        }
    }

    /// Unhalved total variation to uniform by direct enumeration of all `2ⁿ` outcomes.
    pub fn total_variation_to_uniform(&self) -> Result<f64> {
        let u = 0.5f64.powi(self.n as i32);
        Ok(self.to_full()?.iter().map(|p| (p - u).abs()).sum())
    }

    /// `1 − Σ √(P(x)U(x))` by direct enumeration.
    pub fn hellinger_sq_to_uniform(&self) -> Result<f64> {
        let u = 0.5f64.powi(self.n as i32);
        let overlap: f64 = self.to_full()?.iter().map(|p| (p * u).sqrt()).sum();
        Ok(1.0 - overlap)
    }
}

/// `1 − ½(√(1+2γ) + √(1−2γ))`, rearranged so that small `γ` keeps full precision.
fn single_hellinger_sq(gamma: f64) -> f64 {
    let x = 2.0 * gamma;
    let up = (1.0 + x).sqrt();
    let down = (1.0 - x).sqrt();
    x * x / ((up + down) * (up + 1.0) * (down + 1.0))
}

/// Hellinger distance between `(½+γ, ½−γ)` and the uniform coin.
pub fn hellinger_single(gamma: f64) -> f64 {
    single_hellinger_sq(gamma).sqrt()
}

/// Hellinger distance between the n-fold products, via `1 − H(Pⁿ,Uⁿ)² = (1 − H(P,U)²)ⁿ`.
pub fn hellinger_product(gamma: f64, n: usize) -> f64 {
    hellinger_product_sq(gamma, n).sqrt()
}

fn hellinger_product_sq(gamma: f64, n: usize) -> f64 {
    -(n as f64 * (-single_hellinger_sq(gamma)).ln_1p()).exp_m1()
}

fn ln_binomial(n: usize, w: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(w as f64 + 1.0) - ln_gamma((n - w) as f64 + 1.0)
}

/// `count · ln(base)`, taking `0 · ln 0 = 0`.
fn weighted_ln(count: usize, ln_base: f64) -> f64 {
    if count == 0 {
        0.0
    } else {
        count as f64 * ln_base
    }
}

/// Exact unhalved total variation `‖Pⁿ − Uⁿ‖` by grouping outcomes on Hamming weight.
///
/// Each weight class contributes `|e^A − e^B|` with `A` and `B` the log-masses of the
/// class under `Pⁿ` and `Uⁿ`; it is evaluated as `e^{max}·(1 − e^{−|A−B|})` with `A − B`
/// formed directly from `ln(1 ± 2γ)`, so neither side overflows and tiny `γ` does not cancel.
pub fn tv_exact(gamma: f64, n: usize) -> f64 {
    let ln_up = (2.0 * gamma).ln_1p();
    let ln_down = (-2.0 * gamma).ln_1p();
    let ln_uniform = -(n as f64) * std::f64::consts::LN_2;
    (0..=n)
        .map(|w| {
            let uniform = ln_binomial(n, w) + ln_uniform;
            // log of Pⁿ(x)/Uⁿ(x) for any x of weight w
            let ratio = weighted_ln(n - w, ln_up) + weighted_ln(w, ln_down);
            if ratio == f64::NEG_INFINITY {
                return uniform.exp();
            }
            let hi = uniform + ratio.max(0.0);
            hi.exp() * -(-ratio.abs()).exp_m1()
        })
        .sum()
}

/// Lower and upper bounds on `‖Pⁿ − Uⁿ‖` from `‖A − B‖ ≤ 2H ≤ 2‖A − B‖^{1/2}`.
///
/// That inequality holds for the Hellinger distance normalized as
/// `H² = Σₓ (√A(x) − √B(x))² = 2(1 − Σₓ √(A(x)B(x)))`, which is twice the
/// square of [`hellinger_product`]. Returns `(H², 2H)` in that normalization.
pub fn tv_bounds(gamma: f64, n: usize) -> (f64, f64) {
    let h_sq = 2.0 * hellinger_product_sq(gamma, n);
    (h_sq, 2.0 * h_sq.sqrt())
}
