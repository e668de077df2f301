//! Differential operators with polynomial coefficients in `(xi1, xi2)`.
//!
//! Terms are stored normal ordered as `c xi1^p xi2^q d1^r d2^s` and act on
//! Hermite expansions exactly through the recurrences
//! `xi psi_n = sqrt(n/2) psi_{n-1} + sqrt((n+1)/2) psi_{n+1}` and
//! `d psi_n = sqrt(n/2) psi_{n-1} - sqrt((n+1)/2) psi_{n+1}`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use super::hermite::hermite_function_derivative;
use super::quadrature::QuadratureRule;
use super::wavefunction::{eigenfunction, HermiteExpansion, WavefunctionSpec};
use crate::fockspace::{Ladder, Mode};
use crate::model::{Angle, PhysParams, SignBranch};
use crate::states::eigenvalue_ft;
use crate::{Result, C64};

/// Exponents `[p, q, r, s]` of `xi1^p xi2^q d1^r d2^s`.
pub type Monomial = [u32; 4];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiffOp {
    terms: BTreeMap<Monomial, C64>,
}

impl DiffOp {
    pub fn zero() -> Self {
        DiffOp::default()
    }

    pub fn monomial(m: Monomial, c: C64) -> Self {
        let mut op = DiffOp::zero();
        op.add_term(m, c);
        op
    }

    pub fn identity() -> Self {
        Self::monomial([0, 0, 0, 0], C64::new(1.0, 0.0))
    }

    /// Multiplication by `xi_i`.
    pub fn coord(mode: Mode) -> Self {
        let m = match mode {
            Mode::One => [1, 0, 0, 0],
            Mode::Two => [0, 1, 0, 0],
        };
        Self::monomial(m, C64::new(1.0, 0.0))
    }

    /// `d / d xi_i`.
    pub fn deriv(mode: Mode) -> Self {
        let m = match mode {
            Mode::One => [0, 0, 1, 0],
            Mode::Two => [0, 0, 0, 1],
        };
        Self::monomial(m, C64::new(1.0, 0.0))
    }

    fn add_term(&mut self, m: Monomial, c: C64) {
        let e = self.terms.entry(m).or_insert(C64::new(0.0, 0.0));
        *e += c;
        if *e == C64::new(0.0, 0.0) {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, C64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c);
        }
        out
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, f: C64) -> DiffOp {
        let mut out = DiffOp::zero();
        for (m, c) in self.terms() {
            out.add_term(m, c * f);
        }
        out
    }

    /// `self . other`, normal ordered by the Leibniz rule
    /// `d^r xi^p = sum_k C(r,k) p!/(p-k)! xi^(p-k) d^(r-k)`.
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        let mut out = DiffOp::zero();
        for ([p1, q1, r1, s1], c) in self.terms() {
            for ([p2, q2, r2, s2], d) in other.terms() {
                for k in 0..=r1.min(p2) {
                    let fk = binomial(r1, k) * falling(p2, k);
                    for l in 0..=s1.min(q2) {
                        let fl = binomial(s1, l) * falling(q2, l);
                        let m = [p1 + p2 - k, q1 + q2 - l, r1 - k + r2, s1 - l + s2];
                        out.add_term(m, c * d * (fk * fl));
                    }
                }
            }
        }
        out
    }

    /// Largest coefficient difference.
    pub fn max_diff(&self, other: &DiffOp) -> f64 {
        self.sub(other)
            .terms()
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    /// Exact action on a Hermite expansion.
    pub fn apply(&self, f: &HermiteExpansion) -> HermiteExpansion {
        let mut out = HermiteExpansion::zero(f.p);
        for ((n1, n2), c) in f.terms() {
            for ([p, q, r, s], k) in self.terms() {
                let a = act_1d(p, r, n1);
                let b = act_1d(q, s, n2);
                for (i, &ai) in a.iter().enumerate() {
                    if ai == 0.0 {
                        continue;
                    }
                    for (j, &bj) in b.iter().enumerate() {
                        if bj != 0.0 {
                            out.add_term((i, j), c * k * (ai * bj));
                        }
                    }
                }
            }
        }
        out
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn falling(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64)
}

// xi^p d^r psi_n as dense coefficients over psi_0 ..
fn act_1d(p: u32, r: u32, n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n + 1];
    v[n] = 1.0;
    for _ in 0..r {
        v = step(&v, -1.0);
    }
    for _ in 0..p {
        v = step(&v, 1.0);
    }
    v
}

// sign = +1 multiplies by xi, sign = -1 differentiates.
fn step(v: &[f64], sign: f64) -> Vec<f64> {
    let mut out = vec![0.0; v.len() + 1];
    for (n, &c) in v.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        if n > 0 {
            out[n - 1] += c * (n as f64 / 2.0).sqrt();
        }
        out[n + 1] += sign * c * ((n as f64 + 1.0) / 2.0).sqrt();
    }
    out
}

/// Representation in which a ladder operator is written as a differential operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffOpRep {
    /// Barred position representation: `abar_i = (xi_i + d_i)/sqrt 2`,
    /// `abar_i^‡ = (xi_i - d_i)/sqrt 2`.
    Barred,
    /// Barred operators at a branch written in the original representation,
    /// where `a_i` takes the canonical form and `abar` mixes the modes.
    Original(SignBranch),
}

fn canonical(mode: Mode, kind: Ladder) -> DiffOp {
    let s = match kind {
        Ladder::Lower => 1.0,
        Ladder::Raise => -1.0,
    };
    DiffOp::coord(mode)
        .add(&DiffOp::deriv(mode).scale(C64::new(s, 0.0)))
        .scale(C64::new(FRAC_1_SQRT_2, 0.0))
}

/// Differential form of a barred ladder operator.
pub fn ladder_op(rep: DiffOpRep, mode: Mode, kind: Ladder) -> DiffOp {
    match rep {
        DiffOpRep::Barred => canonical(mode, kind),
        DiffOpRep::Original(branch) => {
            let (c, s) = Angle::Branch(branch).cos_sin();
            let (c, s) = (C64::new(c, 0.0), C64::new(s, 0.0));
            let other = mode.other();
            // abar_i = c a_i - s a_j^dag, abar_i^‡ = c a_i^dag + s a_j.
            match kind {
                Ladder::Lower => canonical(mode, Ladder::Lower)
                    .scale(c)
                    .sub(&canonical(other, Ladder::Raise).scale(s)),
                Ladder::Raise => canonical(mode, Ladder::Raise)
                    .scale(c)
                    .add(&canonical(other, Ladder::Lower).scale(s)),
            }
        }
    }
}

/// Applies a barred ladder operator to an eigenfunction.
pub fn apply_ladder_diff(
    rep: DiffOpRep,
    mode: Mode,
    kind: Ladder,
    spec: &WavefunctionSpec,
) -> HermiteExpansion {
    ladder_op(rep, mode, kind)
        .apply(&HermiteExpansion::single(spec))
        .pruned(0.0)
}

/// `(hbar w / 2)[(xi1^2 - d1^2) - (xi2^2 - d2^2)]
///  +- i (hbar gamma / 2m)(1/2)[(xi1^2 - d1^2) + (xi2^2 - d2^2)]`.
pub fn hamiltonian_diff(p: &PhysParams, branch: SignBranch) -> DiffOp {
    let osc = |mode: Mode| {
        let x = DiffOp::coord(mode);
        let d = DiffOp::deriv(mode);
        x.compose(&x).sub(&d.compose(&d))
    };
    let (h1, h2) = (osc(Mode::One), osc(Mode::Two));
    let real = h1.sub(&h2).scale(C64::new(p.energy_quantum() / 2.0, 0.0));
    let imag = h1
        .add(&h2)
        .scale(C64::new(0.0, branch.sign() * p.damping() / 2.0));
    real.add(&imag)
}

/// `||H phi - E phi|| / ||phi||` in L2, with `E` the complex eigenvalue of
/// the labels, both norms by the tensorized quadrature rule.
pub fn hamiltonian_diff_residual(
    spec: &WavefunctionSpec,
    p: &PhysParams,
    branch: SignBranch,
    rule: &QuadratureRule,
) -> Result<f64> {
    let phi = HermiteExpansion::single(&WavefunctionSpec { p: *p, ..*spec });
    let e = eigenvalue_ft(spec.n1, spec.n2, p, branch).0;
    let hphi = hamiltonian_diff(p, branch).apply(&phi);
    let resid = hphi.sub(&phi.scale(e));
    Ok(resid.l2_norm(rule)? / phi.l2_norm(rule)?)
}

/// Physical sample points of the square `[lo, hi]^2` with spacing `step`.
pub fn square_grid(lo: f64, hi: f64, step: f64) -> Vec<(f64, f64)> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    let axis: Vec<f64> = (0..count).map(|k| lo + k as f64 * step).collect();
    axis.iter()
        .flat_map(|&a| axis.iter().map(move |&b| (a, b)))
        .collect()
}

/// `max |(xi_i + d_i) phi_00|` over the grid for both modes, analytic derivatives.
pub fn vacuum_pde_residual(p: &PhysParams, grid: &[(f64, f64)]) -> f64 {
    let s = p.inverse_length_sq().sqrt();
    let psi0 = |xi: f64| (-0.5 * xi * xi).exp() * std::f64::consts::PI.powf(-0.25);
    grid.iter()
        .map(|&(x1, x2)| {
            let (xi1, xi2) = (s * x1, s * x2);
            let (g1, g2) = (psi0(xi1), psi0(xi2));
            let r1 = s * (xi1 * g1 + hermite_function_derivative(0, xi1)) * g2;
            let r2 = s * g1 * (xi2 * g2 + hermite_function_derivative(0, xi2));
            r1.abs().max(r2.abs())
        })
        .fold(0.0, f64::max)
}

/// Fourth-order central difference of `f` at `x` with step `h`.
pub fn central_diff4(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Same residual as [`vacuum_pde_residual`] with the derivative replaced by
/// a fourth-order stencil of step `h` (in `xi`) on the pointwise evaluator.
pub fn vacuum_pde_residual_fd(p: &PhysParams, grid: &[(f64, f64)], h: f64) -> f64 {
    let spec = WavefunctionSpec::new(0, 0, *p);
    let s = p.inverse_length_sq().sqrt();
    grid.iter()
        .map(|&(x1, x2)| {
            let (xi1, xi2) = (s * x1, s * x2);
            let f = |a: f64, b: f64| eigenfunction(&spec, a / s, b / s);
            let r1 = xi1 * f(xi1, xi2) + central_diff4(|t| f(t, xi2), xi1, h);
            let r2 = xi2 * f(xi1, xi2) + central_diff4(|t| f(xi1, t), xi2, h);
            r1.abs().max(r2.abs())
        })
        .fold(0.0, f64::max)
}

/// Largest pointwise gap between the exact barred ladder action on `spec`
/// and `(xi_i -+ d_i)/sqrt 2` with the derivative taken by finite differences.
pub fn ladder_fd_residual(
    spec: &WavefunctionSpec,
    mode: Mode,
    kind: Ladder,
    grid: &[(f64, f64)],
    h: f64,
) -> f64 {
    let exact = apply_ladder_diff(DiffOpRep::Barred, mode, kind, spec);
    let s = spec.p.inverse_length_sq().sqrt();
    let sign = match kind {
        Ladder::Lower => 1.0,
        Ladder::Raise => -1.0,
    };
    let f = |a: f64, b: f64| eigenfunction(spec, a / s, b / s);
    grid.iter()
        .map(|&(x1, x2)| {
            let (xi1, xi2) = (s * x1, s * x2);
            let (x, d) = match mode {
                Mode::One => (xi1, central_diff4(|t| f(t, xi2), xi1, h)),
                Mode::Two => (xi2, central_diff4(|t| f(xi1, t), xi2, h)),
            };
            let fd = (x * f(xi1, xi2) + sign * d) * FRAC_1_SQRT_2;
            (exact.eval_xi(xi1, xi2) - fd).norm()
        })
        .fold(0.0, f64::max)
}
