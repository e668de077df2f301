//! Mollified delta, weak residuals, and the naive vacuum overlap series.

use std::f64::consts::PI;

use super::hermite::hermite_functions;
use super::quadrature::QuadratureRule;
use crate::model::{Angle, SignBranch};
use crate::states::closed_form_amplitude;
use crate::{Error, Result};

/// Unit-mass Gaussian `e^{-u^2/2 sigma^2} / (sqrt(2 pi) sigma)` in
/// `u = x1 - x2` (plus branch) or `u = x1 + x2` (minus branch).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mollifier {
    sigma: f64,
    pub branch: SignBranch,
}

impl Mollifier {
    pub fn new(sigma: f64, branch: SignBranch) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParam {
                name: "sigma",
                reason: format!("{sigma} is not a positive width"),
            });
        }
        Ok(Mollifier { sigma, branch })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn value(&self, u: f64) -> f64 {
        (-(u * u) / (2.0 * self.sigma * self.sigma)).exp() / ((2.0 * PI).sqrt() * self.sigma)
    }

    /// `x1 -+ x2`.
    pub fn argument(&self, x1: f64, x2: f64) -> f64 {
        x1 - self.branch.sign() * x2
    }

    /// `int delta_sigma(u) du` by the rule after `u = sqrt(2) sigma t`.
    pub fn mass(&self, rule: &QuadratureRule) -> f64 {
        rule.integrate(|_| 1.0) / PI.sqrt()
    }
}

/// `P(x1, x2) exp(-(x1^2 + x2^2)/2)` with `P` of degree at most two,
/// coefficients over `[1, x1, x2, x1^2, x1 x2, x2^2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestFunction {
    pub coeffs: [f64; 6],
}

impl TestFunction {
    pub fn new(coeffs: [f64; 6]) -> Self {
        TestFunction { coeffs }
    }

    pub fn x1() -> Self {
        Self::new([0.0, 1.0, 0.0, 0.0, 0.0, 0.0])
    }

    pub fn x2() -> Self {
        Self::new([0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
    }

    /// `x1`, `x2` and `1 + x1 - x2/2 + x1^2`.
    pub fn default_family() -> Vec<TestFunction> {
        vec![
            Self::x1(),
            Self::x2(),
            Self::new([1.0, 1.0, -0.5, 1.0, 0.0, 0.0]),
        ]
    }

    fn poly(&self, x1: f64, x2: f64) -> f64 {
        let c = &self.coeffs;
        c[0] + c[1] * x1 + c[2] * x2 + c[3] * x1 * x1 + c[4] * x1 * x2 + c[5] * x2 * x2
    }

    fn poly_grad(&self, x1: f64, x2: f64) -> (f64, f64) {
        let c = &self.coeffs;
        (
            c[1] + 2.0 * c[3] * x1 + c[4] * x2,
            c[2] + c[4] * x1 + 2.0 * c[5] * x2,
        )
    }

    pub fn value(&self, x1: f64, x2: f64) -> f64 {
        self.poly(x1, x2) * gauss(x1, x2)
    }

    /// `(d1, d2)` of the test function: `(d_i P - x_i P) g`.
    pub fn gradient(&self, x1: f64, x2: f64) -> (f64, f64) {
        let p = self.poly(x1, x2);
        let (p1, p2) = self.poly_grad(x1, x2);
        let g = gauss(x1, x2);
        ((p1 - x1 * p) * g, (p2 - x2 * p) * g)
    }
}

fn gauss(x1: f64, x2: f64) -> f64 {
    (-(x1 * x1 + x2 * x2) / 2.0).exp()
}

/// Weak residuals of `(x1 -+ x2) delta = 0` and `(d1 +- d2) delta = 0`
/// against `test`, for the mollified delta.
///
/// In the rotated coordinates `u` (argument of the mollifier) and `v`
/// (the orthogonal combination), the Jacobian is 1/2 and the Gaussians
/// combine into `exp(-a u^2 - v^2/4)` with `a = 1/(2 sigma^2) + 1/4`; the
/// rule is applied in `t = sqrt(a) u` and `s = v/2`. The second residual
/// is taken by parts, `-int (d1 +- d2)test * delta`.
pub fn mollified_weak_residual(
    moll: &Mollifier,
    test: &TestFunction,
    rule: &QuadratureRule,
) -> (f64, f64) {
    let sigma = moll.sigma();
    let a = 1.0 / (2.0 * sigma * sigma) + 0.25;
    let ra = a.sqrt();
    let sign = moll.branch.sign();
    let prefactor = 1.0 / ((2.0 * PI).sqrt() * sigma * ra);
    let mut coord_moment = 0.0;
    let mut deriv_moment = 0.0;
    for (&t, &wt) in rule.nodes().iter().zip(rule.weights()) {
        let u = t / ra;
        for (&s, &ws) in rule.nodes().iter().zip(rule.weights()) {
            let v = 2.0 * s;
            let x1 = (u + v) / 2.0;
            let x2 = sign * (v - u) / 2.0;
            let w = wt * ws;
            coord_moment += w * test.poly(x1, x2) * u;
            let p = test.poly(x1, x2);
            let (p1, p2) = test.poly_grad(x1, x2);
            let d = (p1 - x1 * p) + sign * (p2 - x2 * p);
            deriv_moment -= w * d;
        }
    }
    (prefactor * coord_moment, prefactor * deriv_moment)
}

/// `sum_{n < n_terms} c_n psi_n(xi1) psi_n(xi2)` with the closed-form pair
/// amplitudes `c_n`, at dimensionless coordinates.
pub fn improper_partial_sum(n_terms: usize, angle: Angle, xi1: f64, xi2: f64) -> f64 {
    if n_terms == 0 {
        return 0.0;
    }
    let a = hermite_functions(n_terms - 1, xi1);
    let b = hermite_functions(n_terms - 1, xi2);
    (0..n_terms)
        .map(|n| closed_form_amplitude(angle, n) * a[n] * b[n])
        .sum()
}
