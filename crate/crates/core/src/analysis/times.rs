//! Instantaneous mixing and hitting times in the underdamped regime.

use std::f64::consts::PI;

use serde::Serialize;

use crate::dynamics::{gamma, Regime, WalkParams};
use crate::error::{Result, WalkError};

/// Candidate mixing times are kept only if `|γ(t)|` is below this.
pub const MIX_ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingTime {
    pub c: u32,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HittingTime {
    pub c: u32,
    pub t: f64,
    pub p_hit: f64,
}

fn require_underdamped(params: &WalkParams, what: &'static str) -> Result<f64> {
    let regime = params.regime();
    if regime != Regime::Underdamped {
        return Err(WalkError::Regime {
            what,
            requirement: "p < 4k",
            regime,
            p: params.p(),
            four_k: 4.0 * params.k(),
        });
    }
    Ok(params.discriminant().sqrt())
}

/// Times of exact uniformity, branches `c = 1..=c_max`.
///
/// Candidates come from the closed form
/// `t = n(2πc − arccos(p²/8k² − 1))/β`; any candidate with `|γ(t)| > MIX_ROOT_TOL`
/// is discarded, which removes roots introduced by the half-angle reduction.
pub fn mixing_times(params: &WalkParams, c_max: u32) -> Result<Vec<MixingTime>> {
    let beta = require_underdamped(params, "instantaneous mixing times")?;
    if c_max == 0 {
        return Err(WalkError::invalid("c_max", "need at least one branch (c_max >= 1)"));
    }
    let n = params.n() as f64;
    let k = params.k();
    let p = params.p();
    let phase = (p * p / (8.0 * k * k) - 1.0).clamp(-1.0, 1.0).acos();
    Ok((1..=c_max)
        .map(|c| MixingTime {
            c,
            t: n * (2.0 * PI * c as f64 - phase) / beta,
        })
        .filter(|m| gamma(params, m.t).abs() <= MIX_ROOT_TOL)
        .collect())
}

/// Local maxima of `P[1]`, branches `c = 0..=c_max`, with the probability of
/// finding the whole register at the antipodal corner.
pub fn hitting_times(params: &WalkParams, c_max: u32) -> Result<Vec<HittingTime>> {
    let beta = require_underdamped(params, "instantaneous hitting times")?;
    let n = params.n() as f64;
    let p = params.p();
    Ok((0..=c_max)
        .map(|c| {
            let odd = (2 * c + 1) as f64;
            let per_qubit = 0.5 + 0.5 * (-p * PI * odd / beta).exp();
            HittingTime {
                c,
                t: 2.0 * PI * n * odd / beta,
                p_hit: per_qubit.powf(n),
            }
        })
        .collect())
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Returns `None` when the endpoints do not bracket a root.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid == lo || mid == hi {
            return Some(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// First sign change of `γ` on a uniform grid over `[0, t_max]`, refined by bisection.
pub fn first_gamma_zero(params: &WalkParams, t_max: f64, steps: usize, tol: f64) -> Option<f64> {
    let h = t_max / steps as f64;
    let mut prev = gamma(params, 0.0);
    for i in 1..=steps {
        let t = i as f64 * h;
        let g = gamma(params, t);
        if g == 0.0 || g.signum() != prev.signum() {
            return bisect(|x| gamma(params, x), t - h, t, tol);
        }
        prev = g;
    }
    None
}
