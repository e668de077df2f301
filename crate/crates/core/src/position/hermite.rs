//! Hermite polynomials and normalized Hermite functions.

use std::f64::consts::PI;

/// Physicists' Hermite polynomial `H_n(xi)` and its derivative `2n H_{n-1}(xi)`.
pub fn hermite(n: usize, xi: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let next = 2.0 * xi * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    (cur, 2.0 * n as f64 * prev)
}

/// Orthonormal polynomials `p_0 .. p_n` for the weight `e^{-xi^2}`.
///
/// `psi_k(xi) = p_k(xi) e^{-xi^2/2}` are the normalized Hermite functions.
pub fn orthonormal_polys(n: usize, xi: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(PI.powf(-0.25));
    if n >= 1 {
        out.push(2f64.sqrt() * xi * out[0]);
    }
    for k in 2..=n {
        let kf = k as f64;
        let next = xi * (2.0 / kf).sqrt() * out[k - 1] - ((kf - 1.0) / kf).sqrt() * out[k - 2];
        out.push(next);
    }
    out
}

/// Normalized Hermite functions `psi_0 .. psi_n` at `xi`.
pub fn hermite_functions(n: usize, xi: f64) -> Vec<f64> {
    let g = (-0.5 * xi * xi).exp();
    orthonormal_polys(n, xi)
        .into_iter()
        .map(|p| p * g)
        .collect()
}

/// `psi_n(xi)`.
pub fn hermite_function(n: usize, xi: f64) -> f64 {
    hermite_functions(n, xi)[n]
}

/// `psi_n'(xi) = sqrt(n/2) psi_{n-1} - sqrt((n+1)/2) psi_{n+1}`.
pub fn hermite_function_derivative(n: usize, xi: f64) -> f64 {
    let psi = hermite_functions(n + 1, xi);
    let down = if n > 0 {
        (n as f64 / 2.0).sqrt() * psi[n - 1]
    } else {
        0.0
    };
    down - ((n as f64 + 1.0) / 2.0).sqrt() * psi[n + 1]
}
