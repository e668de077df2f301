//! Hermite-Gaussian product eigenfunctions and expansions over them.

use std::collections::BTreeMap;

use ndarray::Array2;

use super::hermite::{hermite_functions, orthonormal_polys};
use super::quadrature::QuadratureRule;
use crate::model::PhysParams;
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WavefunctionSpec {
    pub n1: usize,
    pub n2: usize,
    pub p: PhysParams,
}

impl WavefunctionSpec {
    pub fn new(n1: usize, n2: usize, p: PhysParams) -> Self {
        WavefunctionSpec { n1, n2, p }
    }

    pub fn label(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }
}

/// Dimensionless coordinate `sqrt(m omega / hbar) x`.
pub fn to_xi(p: &PhysParams, x: f64) -> f64 {
    p.inverse_length_sq().sqrt() * x
}

/// `sqrt(m omega / hbar) psi_n1(xi1) psi_n2(xi2)` at physical `(x1, x2)`.
pub fn eigenfunction(spec: &WavefunctionSpec, x1: f64, x2: f64) -> f64 {
    let s = spec.p.inverse_length_sq().sqrt();
    let a = hermite_functions(spec.n1, s * x1)[spec.n1];
    let b = hermite_functions(spec.n2, s * x2)[spec.n2];
    s * a * b
}

/// Finite combination `sum c_(n1,n2) phi_(n1,n2)` for fixed parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteExpansion {
    pub p: PhysParams,
    coeffs: BTreeMap<(usize, usize), C64>,
}

impl HermiteExpansion {
    pub fn zero(p: PhysParams) -> Self {
        HermiteExpansion {
            p,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn single(spec: &WavefunctionSpec) -> Self {
        let mut e = Self::zero(spec.p);
        e.add_term(spec.label(), C64::new(1.0, 0.0));
        e
    }

    pub fn add_term(&mut self, label: (usize, usize), c: C64) {
        *self.coeffs.entry(label).or_insert(C64::new(0.0, 0.0)) += c;
    }

    pub fn coeff(&self, label: (usize, usize)) -> C64 {
        self.coeffs
            .get(&label)
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), C64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    /// Drops coefficients with modulus at most `eps`.
    pub fn pruned(mut self, eps: f64) -> Self {
        self.coeffs.retain(|_, c| c.norm() > eps);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.norm() == 0.0)
    }

    pub fn scale(&self, f: C64) -> Self {
        HermiteExpansion {
            p: self.p,
            coeffs: self.coeffs.iter().map(|(&k, &v)| (k, v * f)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in other.terms() {
            out.add_term(k, -v);
        }
        out
    }

    /// Largest occupation label on either axis.
    pub fn max_level(&self) -> usize {
        self.coeffs
            .keys()
            .map(|&(a, b)| a.max(b))
            .max()
            .unwrap_or(0)
    }

    /// Value at dimensionless `(xi1, xi2)`, including the `sqrt(m omega/hbar)` factor.
    pub fn eval_xi(&self, xi1: f64, xi2: f64) -> C64 {
        let n = self.max_level();
        let a = hermite_functions(n, xi1);
        let b = hermite_functions(n, xi2);
        let s = self.p.inverse_length_sq().sqrt();
        self.terms().map(|((i, j), c)| c * (s * a[i] * b[j])).sum()
    }

    /// Euclidean norm of the coefficients, which is the L2 norm in `x`.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// L2 norm in `x` by the tensorized rule with the Gaussian in the weight.
    pub fn l2_norm(&self, rule: &QuadratureRule) -> Result<f64> {
        let n = self.max_level();
        rule.require_degree(2 * n)?;
        let polys: Vec<Vec<f64>> = rule
            .nodes()
            .iter()
            .map(|&x| orthonormal_polys(n, x))
            .collect();
        let mut total = 0.0;
        for (i, wi) in rule.weights().iter().enumerate() {
            for (j, wj) in rule.weights().iter().enumerate() {
                let v: C64 = self
                    .terms()
                    .map(|((a, b), c)| c * (polys[i][a] * polys[j][b]))
                    .sum();
                total += wi * wj * v.norm_sqr();
            }
        }
        Ok(total.sqrt())
    }
}

/// Pairwise L2 inner products of the eigenfunctions.
///
/// The integrand is a polynomial times `e^{-xi1^2 - xi2^2}`; the rule needs
/// at least `max(n) + 1` nodes per axis to be exact.
pub fn l2_gram(specs: &[WavefunctionSpec], rule: &QuadratureRule) -> Result<Array2<C64>> {
    let Some(first) = specs.first() else {
        return Ok(Array2::zeros((0, 0)));
    };
    if let Some(other) = specs.iter().find(|s| s.p != first.p) {
        return Err(Error::InvalidParam {
            name: "specs",
            reason: format!("mixed parameters {:?} and {:?}", first.p, other.p),
        });
    }
    let n = specs.iter().map(|s| s.n1.max(s.n2)).max().unwrap_or(0);
    rule.require_degree(2 * n)?;
    let polys: Vec<Vec<f64>> = rule
        .nodes()
        .iter()
        .map(|&x| orthonormal_polys(n, x))
        .collect();
    let w = rule.weights();
    // One-dimensional Gram matrix G[a][b] = sum_i w_i p_a p_b, then the
    // product structure of the eigenfunctions.
    let mut g = vec![vec![0.0; n + 1]; n + 1];
    for a in 0..=n {
        for b in 0..=n {
            g[a][b] = (0..w.len()).map(|i| w[i] * polys[i][a] * polys[i][b]).sum();
        }
    }
    let k = specs.len();
    let mut out = Array2::<C64>::zeros((k, k));
    for (r, s) in specs.iter().enumerate() {
        for (c, t) in specs.iter().enumerate() {
            out[[r, c]] = C64::new(g[s.n1][t.n1] * g[s.n2][t.n2], 0.0);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::position::{gauss_hermite_rule, hermite};
    use std::f64::consts::PI;

    fn unit() -> PhysParams {
        PhysParams::default()
    }

    #[test]
    fn vacuum_at_origin() {
        let v = eigenfunction(&WavefunctionSpec::new(0, 0, unit()), 0.0, 0.0);
        assert!((v - PI.powf(-0.5)).abs() < 1e-15);
        assert!((v - 0.564_189_583_547_756_3).abs() < 1e-15);
    }

    #[test]
    fn first_excited_value() {
        let v = eigenfunction(&WavefunctionSpec::new(1, 0, unit()), 1.0, 0.0);
        let want =
            std::f64::consts::FRAC_1_SQRT_2 * PI.powf(-0.5) * hermite(1, 1.0).0 * (-0.5f64).exp();
        assert!((v - want).abs() < 1e-15);
        assert!((v - 0.483_941_449_038_286_7).abs() < 1e-12);
    }

    #[test]
    fn odd_symmetry() {
        let s = WavefunctionSpec::new(1, 0, unit());
        for (x, y) in [(0.3, 1.2), (2.0, -0.5)] {
            assert_eq!(eigenfunction(&s, -x, y), -eigenfunction(&s, x, y));
        }
    }

    #[test]
    fn literal_formula_with_scaled_length() {
        // [2^(n1+n2) n1! n2!]^(-1/2) (m w / pi hbar)^(1/2) H H exp(-(xi1^2+xi2^2)/2)
        let p = PhysParams::new(2.0, 1.5, 0.2, 0.5).unwrap();
        let s = p.inverse_length_sq().sqrt();
        for (n1, n2) in [(0, 0), (2, 1), (3, 4)] {
            let (x1, x2) = (0.4, -0.7);
            let (xi1, xi2) = (s * x1, s * x2);
            let f = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
            let pref = (2f64.powi((n1 + n2) as i32) * f(n1) * f(n2)).powf(-0.5)
                * (p.inverse_length_sq() / PI).sqrt();
            let want = pref
                * hermite(n1, xi1).0
                * hermite(n2, xi2).0
                * (-(xi1 * xi1 + xi2 * xi2) / 2.0).exp();
            let got = eigenfunction(&WavefunctionSpec::new(n1, n2, p), x1, x2);
            assert!((got - want).abs() < 1e-14, "{n1} {n2}");
        }
    }

    #[test]
    fn gram_examples() {
        let rule = gauss_hermite_rule(64).unwrap();
        let g = l2_gram(&[WavefunctionSpec::new(0, 0, unit())], &rule).unwrap();
        assert!((g[[0, 0]] - C64::new(1.0, 0.0)).norm() < 1e-13);
        let g = l2_gram(
            &[
                WavefunctionSpec::new(0, 0, unit()),
                WavefunctionSpec::new(1, 0, unit()),
            ],
            &rule,
        )
        .unwrap();
        assert!(g[[0, 1]].norm() < 1e-14);
    }

    #[test]
    fn gram_needs_enough_nodes() {
        let rule = gauss_hermite_rule(4).unwrap();
        let specs = [WavefunctionSpec::new(4, 0, unit())];
        assert!(matches!(
            l2_gram(&specs, &rule),
            Err(Error::Exactness { .. })
        ));
    }

    #[test]
    fn gram_rejects_mixed_parameters() {
        let rule = gauss_hermite_rule(8).unwrap();
        let other = PhysParams::new(1.0, 2.0, 0.2, 1.0).unwrap();
        let specs = [
            WavefunctionSpec::new(0, 0, unit()),
            WavefunctionSpec::new(0, 0, other),
        ];
        assert!(l2_gram(&specs, &rule).is_err());
    }

    #[test]
    fn quadrature_norm_matches_coefficient_norm() {
        let rule = gauss_hermite_rule(16).unwrap();
        let mut e = HermiteExpansion::zero(unit());
        e.add_term((0, 0), C64::new(0.5, 0.0));
        e.add_term((3, 1), C64::new(0.0, -2.0));
        assert!((e.l2_norm(&rule).unwrap() - e.coeff_norm()).abs() < 1e-13);
    }
}
