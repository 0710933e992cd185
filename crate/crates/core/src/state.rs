//! Density matrices and the row-major vectorization used by the superoperators.
//!
//! `vec(ρ)[i·d + j] = ρ[i][j]`. Under this convention
//! `vec(A ρ B) = (A ⊗ Bᵀ) vec(ρ)`, so unitary evolution `ρ ↦ UρU†` is the
//! superoperator `U ⊗ Ū`, and for real symmetric `H` the generator of
//! `U = e^{−iHt}` is `i(1 ⊗ H − H ⊗ 1)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Result, WalkError};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default tolerance for Hermiticity, trace and positivity checks.
pub const STATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    entries: CMatrix,
}

impl DensityState {
    /// Wraps a matrix after checking that it is a density matrix within `tol`.
    pub fn new(entries: CMatrix, tol: f64) -> Result<Self> {
        let state = DensityState { entries };
        state.validate(tol)?;
        Ok(state)
    }

    /// Wraps a matrix without validation.
    pub fn from_matrix_unchecked(entries: CMatrix) -> Self {
        DensityState { entries }
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ`.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(WalkError::InvalidState("zero or non-finite state vector".into()));
        }
        let psi = psi / Complex64::new(norm, 0.0);
        Ok(DensityState {
            entries: &psi * psi.adjoint(),
        })
    }

    /// The computational basis projector `|index⟩⟨index|` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut m = CMatrix::zeros(dim, dim);
        m[(index, index)] = Complex64::new(1.0, 0.0);
        DensityState { entries: m }
    }

    /// `|0…0⟩⟨0…0|` on `n` qubits.
    pub fn all_zero(n: usize) -> Self {
        DensityState::basis(1 << n, 0)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// Real parts of the diagonal: the computational-basis outcome distribution.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).collect()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.entries.nrows() != self.entries.ncols() || self.entries.nrows() == 0 {
            return Err(WalkError::InvalidState(format!(
                "matrix is {}x{}, expected square and non-empty",
                self.entries.nrows(),
                self.entries.ncols()
            )));
        }
        if self.entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(WalkError::NonFinite);
        }
        let herm = self.hermiticity_error();
        if herm > tol {
            return Err(WalkError::InvalidState(format!("hermiticity error {herm:e}")));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
            return Err(WalkError::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = self.min_eigenvalue();
        if min < -tol {
            return Err(WalkError::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &DensityState) -> DensityState {
        DensityState {
            entries: self.entries.kronecker(&other.entries),
        }
    }

    pub fn max_abs_diff(&self, other: &DensityState) -> f64 {
        (&self.entries - &other.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// A random mixed state of dimension `dim`: a convex mixture of `dim` random pure states.
pub fn random_density<R: Rng>(dim: usize, rng: &mut R) -> DensityState {
    let mut m = CMatrix::zeros(dim, dim);
    let weights: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let psi = CVector::from_fn(dim, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let psi = &psi / Complex64::new(psi.norm(), 0.0);
        m += (&psi * psi.adjoint()) * Complex64::new(w / total, 0.0);
    }
    DensityState { entries: m }
}

/// Row-major vectorization.
pub fn vectorize(m: &CMatrix) -> CVector {
    let d = m.nrows();
    CVector::from_fn(d * m.ncols(), |idx, _| m[(idx / d, idx % d)])
}

pub fn unvectorize(v: &CVector, dim: usize) -> Result<CMatrix> {
    if v.len() != dim * dim {
        return Err(WalkError::Dimension {
            expected: dim * dim,
            actual: v.len(),
        });
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| v[i * dim + j]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vec_round_trip() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 1.0), c(3.0, -1.0), c(4.0, 0.0)]);
        let v = vectorize(&m);
        assert_eq!(v[1], c(2.0, 1.0));
        assert_eq!(v[2], c(3.0, -1.0));
        assert_eq!(unvectorize(&v, 2).unwrap(), m);
        assert!(unvectorize(&v, 3).is_err());
    }

    #[test]
    fn vec_of_product_is_kron_with_transpose() {
        let a = CMatrix::from_fn(2, 2, |i, j| c(i as f64 + 0.5, j as f64 - 0.25));
        let b = CMatrix::from_fn(2, 2, |i, j| c((i * j) as f64, 1.0 + i as f64));
        let rho = CMatrix::from_fn(2, 2, |i, j| c(0.1 * (i + 2 * j) as f64, -0.3 * i as f64));
        let lhs = vectorize(&(&a * &rho * &b));
        let rhs = a.kronecker(&b.transpose()) * vectorize(&rho);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn validation_catches_bad_states() {
        let ok = DensityState::new(CMatrix::identity(2, 2) * c(0.5, 0.0), 1e-12);
        assert!(ok.is_ok());
        let trace2 = DensityState::new(CMatrix::identity(2, 2), 1e-12);
        assert!(matches!(trace2, Err(WalkError::InvalidState(_))));
        let non_herm = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0)]);
        assert!(DensityState::new(non_herm, 1e-12).is_err());
        let negative = CMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!(DensityState::new(negative, 1e-12).is_err());
    }

    #[test]
    fn pure_state_normalizes() {
        let psi = CVector::from_vec(vec![c(3.0, 0.0), c(0.0, 4.0)]);
        let rho = DensityState::pure(&psi).unwrap();
        assert!((rho.trace() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(rho.validate(1e-12).is_ok());
        assert!((rho.diagonal()[1] - 0.64).abs() < 1e-15);
    }
}
