//! Gauss-Hermite quadrature for the weight `e^{-xi^2}`.

use std::f64::consts::PI;

use crate::{Error, Result};

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_EPS: f64 = 3e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Nodes in increasing order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum w_i f(xi_i)`, approximating `int f(xi) e^{-xi^2} dxi`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Fails unless the rule integrates polynomials of `degree` exactly.
    pub fn require_degree(&self, degree: usize) -> Result<()> {
        if degree + 1 > 2 * self.len() {
            return Err(Error::Exactness {
                nodes: self.len(),
                degree,
            });
        }
        Ok(())
    }
}

/// `k`-point rule: roots of `H_k` by Newton iteration on the orthonormal
/// recurrence, seeded with the usual asymptotic guesses.
pub fn gauss_hermite_rule(k: usize) -> Result<QuadratureRule> {
    if k == 0 {
        return Err(Error::InvalidParam {
            name: "k",
            reason: "at least one node is required".into(),
        });
    }
    let n = k as f64;
    let mut x = vec![0.0; k];
    let mut w = vec![0.0; k];
    let mut z: f64 = 0.0;
    for i in 0..k.div_ceil(2) {
        z = match i {
            0 => (2.0 * n + 1.0).sqrt() - 1.85575 * (2.0 * n + 1.0).powf(-0.16667),
            1 => z - 1.14 * n.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = orthonormal_with_derivative(k, z);
            let step = p / dp;
            z -= step;
            if step.abs() <= NEWTON_EPS {
                converged = true;
                break;
            }
        }
        if !converged || !z.is_finite() {
            return Err(Error::Numerical { index: i, nodes: k });
        }
        let pp = orthonormal_with_derivative(k, z).1;
        x[i] = z;
        x[k - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[k - 1 - i] = w[i];
    }
    x.reverse();
    w.reverse();
    Ok(QuadratureRule {
        nodes: x,
        weights: w,
    })
}

// p_k(z) and p_k'(z) = sqrt(2k) p_{k-1}(z) for the orthonormal family.
fn orthonormal_with_derivative(k: usize, z: f64) -> (f64, f64) {
    let mut p1 = PI.powf(-0.25);
    let mut p2 = 0.0;
    for j in 1..=k {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, (2.0 * k as f64).sqrt() * p2)
}
