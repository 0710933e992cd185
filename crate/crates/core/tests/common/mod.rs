#![allow(dead_code)]

//! Enumeration oracles shared by the integration tests. Each walks all `2ⁿ`
//! bit strings explicitly and shares no code with the library's distance path.

pub fn product_prob(gamma: f64, n: usize, x: usize) -> f64 {
    (0..n)
        .map(|bit| if x >> bit & 1 == 0 { 0.5 + gamma } else { 0.5 - gamma })
        .product()
}

pub fn brute_tv(gamma: f64, n: usize) -> f64 {
    let u = 1.0 / (1u64 << n) as f64;
    (0..1usize << n).map(|x| (product_prob(gamma, n, x) - u).abs()).sum()
}

/// `Σ √(P(x)U(x))`.
pub fn brute_overlap(gamma: f64, n: usize) -> f64 {
    let u = 1.0 / (1u64 << n) as f64;
    (0..1usize << n).map(|x| (product_prob(gamma, n, x) * u).sqrt()).sum()
}

/// `Σ (√P(x) − √U(x))²`.
pub fn brute_sq_diff(gamma: f64, n: usize) -> f64 {
    let u = 1.0 / (1u64 << n) as f64;
    (0..1usize << n)
        .map(|x| (product_prob(gamma, n, x).sqrt() - u.sqrt()).powi(2))
        .sum()
}

/// Least-squares slope of `log10 y` against `log10 x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.log10()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.log10()).collect();
    let mx = lx.iter().sum::<f64>() / lx.len() as f64;
    let my = ly.iter().sum::<f64>() / ly.len() as f64;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}
