//! Matrix exponential by scaling and squaring with diagonal Padé approximants.
//!
//! Follows Higham (2005): the smallest of the [3/3], [5/5], [7/7], [9/9]
//! approximants whose 1-norm bound θ_m covers ‖A‖₁ is used directly; beyond
//! θ₁₃ the matrix is scaled by 2^{-s} so that the [13/13] approximant applies,
//! and the result is squared `s` times.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::state::CMatrix;

const THETA_3: f64 = 1.495_585_217_958_292e-2;
const THETA_5: f64 = 2.539_398_330_063_230e-1;
const THETA_7: f64 = 9.504_178_996_162_932e-1;
const THETA_9: f64 = 2.097_847_961_257_068e0;
const THETA_13: f64 = 5.371_920_351_148_152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn one_norm(a: &CMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scaled(a: &CMatrix, s: f64) -> CMatrix {
    a * Complex64::new(s, 0.0)
}

/// `(U, V)` for the low-order approximants, where `U` collects odd powers.
fn low_order(a: &CMatrix, b: &[f64]) -> (CMatrix, CMatrix) {
    let dim = a.nrows();
    let a2 = a * a;
    let mut power = CMatrix::identity(dim, dim);
    let mut odd = CMatrix::zeros(dim, dim);
    let mut even = CMatrix::zeros(dim, dim);
    for pair in b.chunks(2) {
        even += scaled(&power, pair[0]);
        odd += scaled(&power, pair[1]);
        power = &power * &a2;
    }
    (a * odd, even)
}

fn order_13(a: &CMatrix) -> (CMatrix, CMatrix) {
    let dim = a.nrows();
    let b = &B13;
    let id = CMatrix::identity(dim, dim);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = scaled(&a6, b[13]) + scaled(&a4, b[11]) + scaled(&a2, b[9]);
    let u = a * (&a6 * inner_u
        + scaled(&a6, b[7])
        + scaled(&a4, b[5])
        + scaled(&a2, b[3])
        + scaled(&id, b[1]));
    let inner_v = scaled(&a6, b[12]) + scaled(&a4, b[10]) + scaled(&a2, b[8]);
    let v = &a6 * inner_v + scaled(&a6, b[6]) + scaled(&a4, b[4]) + scaled(&a2, b[2]) + scaled(&id, b[0]);
    (u, v)
}

/// `exp(a)` for a square complex matrix.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    let dim = a.nrows();
    if dim != a.ncols() {
        return Err(WalkError::Dimension {
            expected: dim,
            actual: a.ncols(),
        });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(WalkError::NonFinite);
    }
    if dim == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }

    let norm = one_norm(a);
    let mut squarings = 0u32;
    let (u, v) = if norm <= THETA_3 {
        low_order(a, &B3)
    } else if norm <= THETA_5 {
        low_order(a, &B5)
    } else if norm <= THETA_7 {
        low_order(a, &B7)
    } else if norm <= THETA_9 {
        low_order(a, &B9)
    } else {
        squarings = (norm / THETA_13).log2().ceil().max(0.0) as u32;
        order_13(&scaled(a, 0.5f64.powi(squarings as i32)))
    };

    let numerator = &v + &u;
    let denominator = &v - &u;
    let mut result = denominator
        .lu()
        .solve(&numerator)
        .ok_or(WalkError::NonFinite)?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    if result.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(WalkError::NonFinite);
    }
    Ok(result)
}
