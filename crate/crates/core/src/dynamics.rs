//! Single-qubit closed-form dynamics.
//!
//! Every coordinate of the decohering hypercube walk evolves independently,
//! so the whole walk is described by one scalar `γ(t)`: the deviation of the
//! single-coordinate marginal from ½, with `P[0] = ½ + γ` and `P[1] = ½ − γ`.
//!
//! `γ` obeys a damped-oscillator law with damping `p/n` and angular frequency
//! `2k/n`. The evaluation here is real-valued in every regime and does not
//! branch on `p == 4k`: the bracket is written as `cos x + a·sinc x` (or its
//! hyperbolic counterpart) so the critical limit falls out of the series for
//! `sinc` near `x = 0`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, WalkError};

/// Default relative tolerance on `|p − 4k| / 4k` for critical classification.
pub const DEFAULT_REGIME_TOL: f64 = 1e-12;

/// Below this value of `|β|t/2n` the bracket uses series expansions.
const SERIES_THRESHOLD: f64 = 1e-4;

/// Dimension, total energy and decoherence rate of a walk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WalkParams {
    n: usize,
    k: f64,
    p: f64,
}

impl WalkParams {
    pub fn new(n: usize, k: f64, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(WalkError::invalid("n", "dimension must be at least 1"));
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(WalkError::invalid("k", format!("energy must be finite and > 0, got {k}")));
        }
        if !(p.is_finite() && p >= 0.0) {
            return Err(WalkError::invalid(
                "p",
                format!("decoherence rate must be finite and >= 0, got {p}"),
            ));
        }
        Ok(WalkParams { n, k, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Energy carried by each coordinate.
    pub fn per_qubit_energy(&self) -> f64 {
        self.k / self.n as f64
    }

    /// Same energy and rate on a hypercube of another dimension.
    pub fn with_dimension(&self, n: usize) -> Result<Self> {
        WalkParams::new(n, self.k, self.p)
    }

    pub fn with_rate(&self, p: f64) -> Result<Self> {
        WalkParams::new(self.n, self.k, p)
    }

    /// `16k² − p²`, factored to keep precision near `p = 4k`.
    pub(crate) fn discriminant(&self) -> f64 {
        let four_k = 4.0 * self.k;
        (four_k - self.p) * (four_k + self.p)
    }

    pub fn regime(&self) -> Regime {
        Regime::classify(self.k, self.p, DEFAULT_REGIME_TOL)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Underdamped,
    Critical,
    Overdamped,
}

impl Regime {
    pub fn classify(k: f64, p: f64, tol: f64) -> Regime {
        let four_k = 4.0 * k;
        if (p - four_k).abs() <= tol * four_k {
            Regime::Critical
        } else if p < four_k {
            Regime::Underdamped
        } else {
            Regime::Overdamped
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Underdamped => "underdamped",
            Regime::Critical => "critical",
            Regime::Overdamped => "overdamped",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `α = √(p² − 16k²)` and `β = √(16k² − p²)` (principal square roots).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingConstants {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub regime: Regime,
}

pub fn damping_constants(params: &WalkParams, tol: f64) -> DampingConstants {
    let disc = params.discriminant();
    let root = disc.abs().sqrt();
    let (alpha, beta) = if disc > 0.0 {
        (Complex64::new(0.0, root), Complex64::new(root, 0.0))
    } else {
        (Complex64::new(root, 0.0), Complex64::new(0.0, root))
    };
    DampingConstants {
        alpha,
        beta,
        regime: Regime::classify(params.k, params.p, tol),
    }
}

/// `sin(x)/x`, series-expanded near zero.
fn sinc(x: f64) -> f64 {
    if x.abs() < SERIES_THRESHOLD {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// `sinh(x)/x`, series-expanded near zero.
fn sinhc(x: f64) -> f64 {
    if x.abs() < SERIES_THRESHOLD {
        let x2 = x * x;
        1.0 + x2 / 6.0 * (1.0 + x2 / 20.0)
    } else {
        x.sinh() / x
    }
}

/// The two exponential contributions to `γ` when `p > 4k`.
///
/// `γ = ¼ (dominant + subdominant)` where
/// `dominant = e^{−(p−α)t/2n}(1 + p/α)` and `subdominant = e^{−(p+α)t/2n}(1 − p/α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverdampedTerms {
    pub dominant: f64,
    pub subdominant: f64,
    /// `(p − α)/2n`, the decay rate of the dominant term.
    pub dominant_rate: f64,
    /// `(p + α)/2n`.
    pub subdominant_rate: f64,
}

impl OverdampedTerms {
    pub fn gamma(&self) -> f64 {
        0.25 * (self.dominant + self.subdominant)
    }
}

/// `p − α` for `p ≥ 4k`, computed as `16k²/(p + α)` to avoid cancellation at large `p`.
pub fn rate_gap(params: &WalkParams) -> f64 {
    let alpha = (-params.discriminant()).max(0.0).sqrt();
    16.0 * params.k * params.k / (params.p + alpha)
}

fn overdamped_terms_unchecked(params: &WalkParams, t: f64) -> OverdampedTerms {
    let n = params.n as f64;
    let alpha = (-params.discriminant()).sqrt();
    let gap = rate_gap(params);
    let ratio = params.p / alpha;
    // 1 − p/α = (α − p)/α
    let minus = -gap / alpha;
    let dominant_rate = gap / (2.0 * n);
    let subdominant_rate = (params.p + alpha) / (2.0 * n);
    OverdampedTerms {
        dominant: (-dominant_rate * t).exp() * (1.0 + ratio),
        subdominant: (-subdominant_rate * t).exp() * minus,
        dominant_rate,
        subdominant_rate,
    }
}

pub fn gamma_overdamped_terms(params: &WalkParams, t: f64) -> Result<OverdampedTerms> {
    let regime = params.regime();
    if regime != Regime::Overdamped {
        return Err(WalkError::Regime {
            what: "overdamped decomposition",
            requirement: "p > 4k",
            regime,
            p: params.p,
            four_k: 4.0 * params.k,
        });
    }
    Ok(overdamped_terms_unchecked(params, t))
}

/// Signed deviation of the single-coordinate marginal from ½ at time `t ≥ 0`.
pub fn gamma(params: &WalkParams, t: f64) -> f64 {
    debug_assert!(t >= 0.0, "time must be non-negative");
    let rate = t / (2.0 * params.n as f64);
    let decay = params.p * rate;
    let disc = params.discriminant();
    let x = disc.abs().sqrt() * rate;

    let g = if disc >= 0.0 {
        0.5 * (-decay).exp() * (x.cos() + decay * sinc(x))
    } else if x < SERIES_THRESHOLD {
        0.5 * (-decay).exp() * (x.cosh() + decay * sinhc(x))
    } else {
        overdamped_terms_unchecked(params, t).gamma()
    };
    g.clamp(-0.5, 0.5)
}

/// `(P[0], P[1])` from a single evaluation of `γ`.
pub fn probabilities(params: &WalkParams, t: f64) -> (f64, f64) {
    let g = gamma(params, t);
    (0.5 + g, 0.5 - g)
}

pub fn prob0(params: &WalkParams, t: f64) -> f64 {
    probabilities(params, t).0
}

pub fn prob1(params: &WalkParams, t: f64) -> f64 {
    probabilities(params, t).1
}

/// Spectral data of the single-qubit superoperator exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum4 {
    /// Eigenvalues per unit time: `0, −p/n, (−p−α)/2n, (−p+α)/2n`.
    pub rates: [Complex64; 4],
    /// Coordinates of `|0⟩⟨0|` in the eigenbasis; `None` at `α = 0`
    /// where the exponent is not diagonalizable.
    pub diagonal_rho0: Option<[Complex64; 4]>,
    alpha: Complex64,
}

impl Spectrum4 {
    pub fn new(params: &WalkParams) -> Self {
        let n = params.n as f64;
        let p = Complex64::new(params.p, 0.0);
        let alpha = damping_constants(params, DEFAULT_REGIME_TOL).alpha;
        let rates = [
            Complex64::new(0.0, 0.0),
            -p / n,
            (-p - alpha) / (2.0 * n),
            (-p + alpha) / (2.0 * n),
        ];
        let diagonal_rho0 = if alpha.norm() == 0.0 {
            None
        } else {
            let ratio = p / alpha;
            Some([
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.0),
                0.25 * (ratio - 1.0),
                0.25 * (-ratio - 1.0),
            ])
        };
        Spectrum4 {
            rates,
            diagonal_rho0,
            alpha,
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    /// `γ(t)` rebuilt from the eigen-coordinates; `None` when `α = 0`.
    pub fn gamma(&self, t: f64) -> Option<f64> {
        let rho = self.diagonal_rho0?;
        let g = -(rho[2] * (self.rates[2] * t).exp() + rho[3] * (self.rates[3] * t).exp());
        Some(g.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(n: usize, k: f64, p: f64) -> WalkParams {
        WalkParams::new(n, k, p).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(matches!(
            WalkParams::new(0, 1.0, 0.0),
            Err(WalkError::InvalidParameter { field: "n", .. })
        ));
        assert!(WalkParams::new(1, 0.0, 0.0).is_err());
        assert!(WalkParams::new(1, 1.0, -0.1).is_err());
        assert!(WalkParams::new(1, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn damping_examples() {
        let d = damping_constants(&params(1, 1.0, 0.0), DEFAULT_REGIME_TOL);
        assert_eq!(d.regime, Regime::Underdamped);
        assert!((d.alpha - Complex64::new(0.0, 4.0)).norm() < 1e-15);
        assert!((d.beta - Complex64::new(4.0, 0.0)).norm() < 1e-15);

        let d = damping_constants(&params(1, 1.0, 4.0), DEFAULT_REGIME_TOL);
        assert_eq!(d.regime, Regime::Critical);
        assert_eq!(d.beta.norm(), 0.0);

        let d = damping_constants(&params(1, 1.0, 5.0), DEFAULT_REGIME_TOL);
        assert_eq!(d.regime, Regime::Overdamped);
        assert!((d.alpha - Complex64::new(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn damping_identities() {
        for &(k, p) in &[(1.0, 0.3), (0.7, 2.0), (2.0, 9.5), (1.0, 4.0)] {
            let d = damping_constants(&params(3, k, p), DEFAULT_REGIME_TOL);
            let a2 = d.alpha * d.alpha + 16.0 * k * k;
            assert!((a2 - p * p).norm() < 1e-12 * (1.0 + p * p));
            let b2 = d.beta * d.beta;
            assert!((b2 - (16.0 * k * k - p * p)).norm() < 1e-12 * (1.0 + p * p));
        }
    }

    #[test]
    fn critical_tolerance_is_relative() {
        assert_eq!(Regime::classify(1.0, 4.0 * (1.0 + 1e-13), 1e-12), Regime::Critical);
        assert_eq!(Regime::classify(1.0, 4.0 * (1.0 + 1e-9), 1e-12), Regime::Overdamped);
        assert_eq!(Regime::classify(1.0, 4.0 * (1.0 + 1e-9), 1e-6), Regime::Critical);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(&params(5, 1.0, 0.0), 0.0), 0.5);
        assert!(gamma(&params(1, 1.0, 0.0), PI / 4.0).abs() < 1e-15);
        let crit = gamma(&params(5, 1.0, 4.0), 5.0);
        assert!((crit - 1.5 * (-2.0f64).exp()).abs() < 1e-15);
        assert!((crit - 0.203_003).abs() < 1e-6);
    }

    #[test]
    fn initial_state_probabilities() {
        for &p in &[0.0, 0.5, 4.0, 9.0, 1e6] {
            let (p0, p1) = probabilities(&params(5, 1.0, p), 0.0);
            assert_eq!(p0, 1.0);
            assert_eq!(p1, 0.0);
        }
    }

    #[test]
    fn overdamped_terms_examples() {
        let pr = params(5, 1.0, 5.0);
        let terms = gamma_overdamped_terms(&pr, 1.0).unwrap();
        assert!((terms.dominant_rate - 1.0 / 5.0).abs() < 1e-15);

        let pr = params(5, 1.0, 9.0);
        for &t in &[1.0, 5.0, 20.0] {
            let terms = gamma_overdamped_terms(&pr, t).unwrap();
            let g = gamma(&pr, t);
            assert!((terms.gamma() - g).abs() <= 1e-12 * g.abs());
        }

        assert!(gamma_overdamped_terms(&params(5, 1.0, 4.0), 1.0).is_err());
        assert!(gamma_overdamped_terms(&params(5, 1.0, 1.0), 1.0).is_err());
    }

    #[test]
    fn overdamped_large_rate_limit() {
        let pr = params(5, 1.0, 1e8);
        let terms = gamma_overdamped_terms(&pr, 1.0).unwrap();
        assert!((terms.dominant - 2.0).abs() < 1e-6);
        assert!(terms.subdominant.abs() < 1e-12);
        assert!((gamma(&pr, 1.0) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn huge_times_do_not_overflow() {
        let pr = params(1024, 1.0, 5.0);
        let t = 1024.0 * 1024f64.ln() * 10.0;
        let g = gamma(&pr, t);
        assert!(g.is_finite() && g > 0.0);
        let pr = params(3, 1.0, 50.0);
        assert!(gamma(&pr, 1e6).is_finite());
    }

    #[test]
    fn spectrum_rates_and_rho0() {
        let pr = params(5, 1.0, 5.0);
        let s = Spectrum4::new(&pr);
        assert!((s.rates[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((s.rates[2] - Complex64::new(-0.8, 0.0)).norm() < 1e-15);
        assert!((s.rates[3] - Complex64::new(-0.2, 0.0)).norm() < 1e-15);
        let rho = s.diagonal_rho0.unwrap();
        assert!((rho[2] - Complex64::new(0.25 * (-1.0 + 5.0 / 3.0), 0.0)).norm() < 1e-15);
        assert!(Spectrum4::new(&params(5, 1.0, 4.0)).diagonal_rho0.is_none());
    }

    #[test]
    fn spectrum_reproduces_gamma() {
        for &(n, k, p) in &[(5, 1.0, 0.5), (5, 1.0, 9.0), (2, 0.3, 0.0), (7, 2.0, 3.0)] {
            let pr = params(n, k, p);
            let s = Spectrum4::new(&pr);
            for i in 0..50 {
                let t = i as f64 * 0.37;
                let g = s.gamma(t).unwrap();
                assert!((g - gamma(&pr, t)).abs() < 1e-12, "n={n} k={k} p={p} t={t}");
            }
        }
    }
}
