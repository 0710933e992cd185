//! Eigenvalues of small dense complex matrices, independent of the closed-form spectrum.
//!
//! The characteristic polynomial comes from the Faddeev–LeVerrier recursion and
//! its roots from simultaneous Durand–Kerner iteration. Intended for the 4×4
//! exponents; cost and conditioning grow quickly with dimension.

use num_complex::Complex64;

use crate::state::CMatrix;

/// Monic characteristic polynomial coefficients, highest degree first: `[1, c₁, …, c_d]`.
pub fn characteristic_polynomial(a: &CMatrix) -> Vec<Complex64> {
    let d = a.nrows();
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    let mut m = CMatrix::zeros(d, d);
    let id = CMatrix::identity(d, d);
    for k in 1..=d {
        m = a * &m + &id * coeffs[k - 1];
        let am = a * &m;
        coeffs.push(-am.trace() / k as f64);
    }
    coeffs
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// All eigenvalues of a square matrix, in no particular order.
pub fn eigenvalues(a: &CMatrix) -> Vec<Complex64> {
    let coeffs = characteristic_polynomial(a);
    let d = coeffs.len() - 1;
    let radius = 1.0 + coeffs[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..d).map(|i| seed.powu(i as u32) * radius).collect();
    for _ in 0..10_000 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let denom = (0..d)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc * (roots[i] - roots[j]));
            if denom.norm() == 0.0 {
                roots[i] += Complex64::new(1e-8 * radius, 1e-8 * radius);
                continue;
            }
            let step = horner(&coeffs, roots[i]) / denom;
            roots[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved <= 1e-15 * radius {
            break;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn triangular_matrix() {
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 0)] = c(1.0, 0.0);
        a[(1, 1)] = c(-2.0, 0.5);
        a[(2, 2)] = c(0.0, 3.0);
        a[(0, 2)] = c(5.0, 0.0);
        let mut found = eigenvalues(&a);
        for want in [c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 3.0)] {
            let idx = found
                .iter()
                .position(|z| (z - want).norm() < 1e-12)
                .expect("eigenvalue missing");
            found.remove(idx);
        }
    }

    #[test]
    fn polynomial_of_rotation_generator() {
        // σₓ has eigenvalues ±1: λ² − 1
        let x = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let poly = characteristic_polynomial(&x);
        assert_eq!(poly.len(), 3);
        assert!((poly[1]).norm() < 1e-15);
        assert!((poly[2] + 1.0).norm() < 1e-15);
    }
}
