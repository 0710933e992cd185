//! Superoperator exponents for the decohering walk and their numerical evolution.
//!
//! Exponents are stored per unit time: the propagator at time `t` is
//! `exp(t · exponent)`, acting on row-major vectorized density matrices
//! (see [`crate::state`]).

use num_complex::Complex64;

use crate::dynamics::WalkParams;
use crate::error::{Result, WalkError};
use crate::oracle::expm::expm;
use crate::state::{unvectorize, vectorize, CMatrix, DensityState};

/// Largest dimension accepted by [`evolve_full`]; the superoperator is `4ⁿ × 4ⁿ`.
pub const MAX_FULL_DIMENSION: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct SuperoperatorExponent {
    pub entries: CMatrix,
    pub params: WalkParams,
}

impl SuperoperatorExponent {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Largest `|(u A)_j|` where `u` extracts the trace of a vectorized matrix.
    pub fn trace_leak(&self) -> f64 {
        let hilbert = (self.dim() as f64).sqrt().round() as usize;
        (0..self.dim())
            .map(|col| {
                (0..hilbert)
                    .map(|i| self.entries[(i * hilbert + i, col)])
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn projector(bit: usize) -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(bit, bit)] = c(1.0, 0.0);
    m
}

/// `1 ⊗ … ⊗ op ⊗ … ⊗ 1` with `op` in slot `site` of `n`.
pub fn embed(op: &CMatrix, site: usize, n: usize) -> CMatrix {
    let d = op.nrows();
    let left = CMatrix::identity(d.pow(site as u32), d.pow(site as u32));
    let right_dim = d.pow((n - site - 1) as u32);
    let right = CMatrix::identity(right_dim, right_dim);
    left.kronecker(op).kronecker(&right)
}

/// The 4×4 exponent exactly as displayed entrywise, per unit time.
pub fn exponent_single_literal(params: &WalkParams) -> CMatrix {
    let n = params.n() as f64;
    let ik = c(0.0, params.k());
    let z = c(0.0, 0.0);
    let mp = c(-params.p(), 0.0);
    #[rustfmt::skip]
    let m = CMatrix::from_row_slice(4, 4, &[
        z,   ik,  -ik, z,
        ik,  mp,  z,   -ik,
        -ik, z,   mp,  ik,
        z,   -ik, ik,  z,
    ]);
    m / c(n, 0.0)
}

/// Single-qubit exponent `i(1⊗H₁ − H₁⊗1) − (p/n)(1⊗1 − Π₀⊗Π₀ − Π₁⊗Π₁)` with `H₁ = (k/n)σₓ`.
pub fn build_exponent_single(params: &WalkParams) -> SuperoperatorExponent {
    let id = CMatrix::identity(2, 2);
    let h = pauli_x() * c(params.per_qubit_energy(), 0.0);
    let share = params.p() / params.n() as f64;
    let unitary = (id.kronecker(&h) - h.kronecker(&id)) * c(0.0, 1.0);
    let measure = projector(0).kronecker(&projector(0)) + projector(1).kronecker(&projector(1))
        - CMatrix::identity(4, 4);
    let entries = unitary + measure * c(share, 0.0);
    debug_assert!(
        (&entries - exponent_single_literal(params))
            .iter()
            .all(|z| z.norm() <= 1e-15 * (1.0 + params.k() + params.p())),
        "tensor construction disagrees with the literal exponent"
    );
    SuperoperatorExponent {
        entries,
        params: *params,
    }
}

/// Full `4ⁿ × 4ⁿ` exponent `i(1⊗H − H⊗1) − p(1⊗1) + p𝐏` assembled from the
/// un-factored sums over coordinates.
pub fn build_exponent_full(params: &WalkParams) -> Result<SuperoperatorExponent> {
    let n = params.n();
    if n > MAX_FULL_DIMENSION {
        return Err(WalkError::invalid(
            "n",
            format!("full superoperator supports n <= {MAX_FULL_DIMENSION}, got {n}"),
        ));
    }
    let hilbert = 1usize << n;
    let id = CMatrix::identity(hilbert, hilbert);
    let mut h = CMatrix::zeros(hilbert, hilbert);
    let mut decoherence = CMatrix::zeros(hilbert * hilbert, hilbert * hilbert);
    for site in 0..n {
        h += embed(&pauli_x(), site, n);
        for bit in 0..2 {
            let proj = embed(&projector(bit), site, n);
            decoherence += proj.kronecker(&proj);
        }
    }
    h *= c(params.per_qubit_energy(), 0.0);
    decoherence /= c(n as f64, 0.0);

    let id_super = CMatrix::identity(hilbert * hilbert, hilbert * hilbert);
    let entries = (id.kronecker(&h) - h.kronecker(&id)) * c(0.0, 1.0)
        - id_super * c(params.p(), 0.0)
        + decoherence * c(params.p(), 0.0);
    Ok(SuperoperatorExponent {
        entries,
        params: *params,
    })
}

/// `S_t = exp(t · exponent)`.
pub fn propagator(exponent: &SuperoperatorExponent, t: f64) -> Result<CMatrix> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(WalkError::invalid("t", format!("time must be finite and >= 0, got {t}")));
    }
    expm(&(&exponent.entries * c(t, 0.0)))
}

fn apply(exponent: &SuperoperatorExponent, t: f64, rho0: &DensityState) -> Result<DensityState> {
    let hilbert = rho0.dim();
    if hilbert * hilbert != exponent.dim() {
        return Err(WalkError::Dimension {
            expected: (exponent.dim() as f64).sqrt() as usize,
            actual: hilbert,
        });
    }
    let s = propagator(exponent, t)?;
    let out = s * vectorize(rho0.matrix());
    Ok(DensityState::from_matrix_unchecked(unvectorize(&out, hilbert)?))
}

/// Evolves a single-qubit density matrix.
pub fn evolve_single(params: &WalkParams, t: f64, rho0: &DensityState) -> Result<DensityState> {
    if rho0.dim() != 2 {
        return Err(WalkError::Dimension {
            expected: 2,
            actual: rho0.dim(),
        });
    }
    apply(&build_exponent_single(params), t, rho0)
}

/// Evolves an `n`-qubit density matrix with the un-factored superoperator (`n ≤ 4`).
pub fn evolve_full(params: &WalkParams, t: f64, rho0: &DensityState) -> Result<DensityState> {
    let exponent = build_exponent_full(params)?;
    apply(&exponent, t, rho0)
}

/// `e^{−i(k/n)σₓ t}`.
pub fn single_qubit_unitary(params: &WalkParams, t: f64) -> CMatrix {
    let theta = params.per_qubit_energy() * t;
    CMatrix::identity(2, 2) * c(theta.cos(), 0.0) + pauli_x() * c(0.0, -theta.sin())
}
