//! Parameter scans beyond the oscillatory regime: the `n log n` mixing
//! threshold and the Zeno slowdown at large decoherence rates.
//!
//! Grid points are independent and evaluated in parallel; results come back
//! in input order regardless of scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::distance::tv_exact;
use crate::dynamics::{gamma, rate_gap, Regime, WalkParams};
use crate::error::{Result, WalkError};

/// "Bounded below" floor for threshold scans.
pub const BOUNDED_BELOW_FLOOR: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub d: f64,
    pub n: usize,
    pub t: f64,
    pub gamma: f64,
    pub tv: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ThresholdTrend {
    /// TV strictly decreasing in `n`.
    Decaying,
    /// TV never drops below [`BOUNDED_BELOW_FLOOR`] and does not strictly decrease.
    BoundedBelow,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdScan {
    /// `(p − α)⁻¹`; equals `(4k)⁻¹` at critical damping.
    pub threshold_d: f64,
    /// Rows in `d`-major order, `n` in input order within each `d`.
    pub rows: Vec<ThresholdRow>,
}

impl ThresholdScan {
    pub fn rows_for(&self, d: f64) -> Vec<ThresholdRow> {
        self.rows.iter().filter(|r| r.d == d).cloned().collect()
    }

    /// Classifies the TV sequence for one `d` (ordered by increasing `n`).
    pub fn trend(&self, d: f64) -> ThresholdTrend {
        let mut rows = self.rows_for(d);
        rows.sort_by_key(|r| r.n);
        let decaying = rows.windows(2).all(|w| w[1].tv < w[0].tv);
        let floor = rows.iter().map(|r| r.tv).fold(f64::INFINITY, f64::min);
        if rows.len() >= 2 && decaying {
            ThresholdTrend::Decaying
        } else if !rows.is_empty() && floor >= BOUNDED_BELOW_FLOOR {
            ThresholdTrend::BoundedBelow
        } else {
            ThresholdTrend::Indeterminate
        }
    }
}

/// Evaluates TV to uniform at `t = d·n·ln n` for each `(d, n)`.
///
/// `params.n()` is ignored; each row uses its own dimension with the same `k` and `p`.
pub fn mixing_threshold_scan(
    params: &WalkParams,
    d_values: &[f64],
    n_values: &[usize],
) -> Result<ThresholdScan> {
    let regime = params.regime();
    if regime == Regime::Underdamped {
        return Err(WalkError::Regime {
            what: "mixing threshold scan",
            requirement: "p >= 4k",
            regime,
            p: params.p(),
            four_k: 4.0 * params.k(),
        });
    }
    if let Some(&d) = d_values.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
        return Err(WalkError::invalid("d", format!("scale factors must be finite and > 0, got {d}")));
    }
    if n_values.contains(&0) {
        return Err(WalkError::invalid("n", "dimensions must be at least 1"));
    }

    let grid: Vec<(f64, usize)> = d_values
        .iter()
        .flat_map(|&d| n_values.iter().map(move |&n| (d, n)))
        .collect();
    let rows = grid
        .par_iter()
        .map(|&(d, n)| {
            let walk = params.with_dimension(n)?;
            let t = d * n as f64 * (n as f64).ln();
            let g = gamma(&walk, t);
            Ok(ThresholdRow {
                d,
                n,
                t,
                gamma: g,
                tv: tv_exact(g, n),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ThresholdScan {
        threshold_d: 1.0 / rate_gap(params),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZenoRow {
    pub p: f64,
    pub gamma: f64,
    /// `p/α`, tending to 1 as `p` grows.
    pub p_over_alpha: f64,
    /// `n ln n/(p − α)`.
    pub mixing_bound: f64,
}

pub fn zeno_scan(k: f64, n: usize, t: f64, p_values: &[f64]) -> Result<Vec<ZenoRow>> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(WalkError::invalid("t", format!("time must be finite and >= 0, got {t}")));
    }
    let walks = p_values
        .iter()
        .map(|&p| {
            let walk = WalkParams::new(n, k, p)?;
            match walk.regime() {
                Regime::Overdamped => Ok(walk),
                regime => Err(WalkError::Regime {
                    what: "zeno scan",
                    requirement: "p > 4k",
                    regime,
                    p,
                    four_k: 4.0 * k,
                }),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(walks
        .par_iter()
        .map(|walk| {
            let gap = rate_gap(walk);
            let alpha = walk.p() - gap;
            ZenoRow {
                p: walk.p(),
                gamma: gamma(walk, t),
                p_over_alpha: walk.p() / alpha,
                mixing_bound: n as f64 * (n as f64).ln() / gap,
            }
        })
        .collect())
}
