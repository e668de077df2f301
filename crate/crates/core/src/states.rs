//! Bogoliubov vacuum, barred ladder states and their dual bras.
//!
//! Kets are built on the transformed vacuum with the barred raising
//! operators; a dual bra is the same construction at the opposite angle,
//! which is the column form of `<n| e^{-theta X}` for real angles.

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use ndarray::{Array1, Array2};

use crate::fockspace::{
    check_basis, expm_dense, ladder_matrix, FockBasis, FockIndex, InteriorBlock, Ladder, Mode,
    OperatorMatrix, Role, StateVector,
};
use crate::model::{build_barred_linear, Angle, PhysParams, SignBranch};
use crate::{Error, Result, C64};

/// Largest shell contribution tolerated at the cap before a pairing is
/// reported as non-convergent.
pub const PAIRING_TAIL_TOL: f64 = 1e-8;

/// Relative pivot threshold of the nullspace elimination.
const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VacuumMethod {
    /// Series exponential of `theta X` applied to the Fock vacuum.
    Taylor,
    /// `sec(theta) tan(theta)^n` on the pair states `|n, n>`.
    ClosedForm,
    /// Joint nullspace of the two barred lowering operators.
    Kernel,
}

impl VacuumMethod {
    pub const ALL: [VacuumMethod; 3] = [
        VacuumMethod::Taylor,
        VacuumMethod::ClosedForm,
        VacuumMethod::Kernel,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            VacuumMethod::Taylor => "taylor",
            VacuumMethod::ClosedForm => "closed_form",
            VacuumMethod::Kernel => "kernel",
        }
    }
}

impl fmt::Display for VacuumMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Complex energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexEigenvalue(pub C64);

impl ComplexEigenvalue {
    pub fn conj(&self) -> Self {
        ComplexEigenvalue(self.0.conj())
    }
}

impl fmt::Display for ComplexEigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ladder state `|n1, n2>>` together with its dual bra `<<n1, n2|`.
#[derive(Clone, Debug)]
pub struct BarredState {
    pub label: FockIndex,
    pub angle: Angle,
    pub method: VacuumMethod,
    pub ket: StateVector,
    pub dual_bra: StateVector,
}

pub fn vacuum_naive(basis: FockBasis) -> StateVector {
    StateVector::unit(basis, FockIndex::new(0, 0), Role::Ket).expect("(0,0) is in every basis")
}

/// Pair amplitude `sec(theta) tan(theta)^n`; `sqrt(2) (+-1)^n` at a branch.
pub fn closed_form_amplitude(angle: Angle, n: usize) -> f64 {
    match angle {
        Angle::Branch(b) => {
            let sign = if n % 2 == 1 { b.sign() } else { 1.0 };
            sign * std::f64::consts::SQRT_2
        }
        Angle::Real(t) => t.tan().powi(n as i32) / t.cos(),
    }
}

/// Smallest cap `N >= 20` at which the pair amplitudes have decayed by
/// `|tan theta|^N <= 1e-10`, so the series construction is edge-free
/// to well below the 1e-9 agreement level.
pub fn taylor_headroom(theta: f64) -> usize {
    let r = theta.tan().abs();
    if r == 0.0 {
        return 20;
    }
    if r >= 1.0 {
        return usize::MAX;
    }
    let n = (1e-10f64.ln() / r.ln()).ceil();
    (n as usize).max(20)
}

fn open_disc(angle: Angle) -> Option<f64> {
    match angle {
        Angle::Real(t) if t.is_finite() && t.abs() < FRAC_PI_4 => Some(t),
        _ => None,
    }
}

/// Builds `|0>>` by the requested method.
///
/// Taylor needs a real angle strictly inside `|theta| < pi/4`. The closed
/// form additionally accepts the exact branch points. The kernel method
/// accepts any finite angle and is normalized to the closed-form `(0,0)`
/// amplitude.
pub fn bogoliubov_vacuum(
    basis: FockBasis,
    angle: Angle,
    method: VacuumMethod,
    tol: f64,
) -> Result<StateVector> {
    let domain = Error::Domain {
        method: method.name(),
        theta: angle.value(),
    };
    match method {
        VacuumMethod::Taylor => {
            let t = open_disc(angle).ok_or(domain)?;
            taylor_vacuum(basis, t, tol)
        }
        VacuumMethod::ClosedForm => {
            if angle.branch().is_none() && open_disc(angle).is_none() {
                return Err(domain);
            }
            let amps = pair_amplitudes(basis, |n| C64::new(closed_form_amplitude(angle, n), 0.0));
            StateVector::new(basis, amps, Role::Ket)
        }
        VacuumMethod::Kernel => {
            if !angle.value().is_finite() {
                return Err(domain);
            }
            kernel_vacuum(basis, angle)
        }
    }
}

fn pair_amplitudes(basis: FockBasis, f: impl Fn(usize) -> C64) -> Array1<C64> {
    let mut amps = Array1::zeros(basis.dim());
    for n in 0..basis.levels() {
        amps[basis.idx(n, n)] = f(n);
    }
    amps
}

// X conserves n1 - n2, so e^{theta X}|0,0> stays in the pair sector, where X
// is tridiagonal with <n+1,n+1|X|n,n> = n + 1.
fn taylor_vacuum(basis: FockBasis, theta: f64, tol: f64) -> Result<StateVector> {
    let l = basis.levels();
    let mut block = Array2::<C64>::zeros((l, l));
    for n in 0..l.saturating_sub(1) {
        let x = C64::new(theta * (n + 1) as f64, 0.0);
        block[[n + 1, n]] = x;
        block[[n, n + 1]] = x;
    }
    let e = expm_dense(&block, tol)?;
    let amps = pair_amplitudes(basis, |n| e[[n, 0]]);
    StateVector::new(basis, amps, Role::Ket)
}

// abar_1 maps the sector n1 - n2 = d into d - 1 and abar_2 maps it into
// d + 1, so the joint kernel splits into per-sector nullspaces.
fn kernel_vacuum(basis: FockBasis, angle: Angle) -> Result<StateVector> {
    let bar = build_barred_linear(basis, angle);
    let n = basis.n_max() as i64;
    let sector = |d: i64| -> Vec<usize> {
        basis
            .iter()
            .filter(|i| i.n1 as i64 - i.n2 as i64 == d)
            .map(|i| basis.idx(i.n1, i.n2))
            .collect()
    };
    let mut kernel = Vec::new();
    for d in -n..=n {
        let cols = sector(d);
        let rows_lo = sector(d - 1);
        let rows_hi = sector(d + 1);
        let mut m = Array2::<C64>::zeros((rows_lo.len() + rows_hi.len(), cols.len()));
        for (j, &c) in cols.iter().enumerate() {
            for (i, &r) in rows_lo.iter().enumerate() {
                m[[i, j]] = bar.lower[0].entries()[[r, c]];
            }
            for (i, &r) in rows_hi.iter().enumerate() {
                m[[rows_lo.len() + i, j]] = bar.lower[1].entries()[[r, c]];
            }
        }
        for v in nullspace(&m) {
            let mut full = Array1::<C64>::zeros(basis.dim());
            for (j, &c) in cols.iter().enumerate() {
                full[c] = v[j];
            }
            kernel.push(full);
        }
    }
    if kernel.len() != 1 {
        return Err(Error::Degeneracy { dim: kernel.len() });
    }
    let mut amps = kernel.pop().expect("one kernel vector");
    let at_origin = amps[0];
    if at_origin.norm() <= RANK_TOL * amps.iter().map(|z| z.norm()).fold(0.0, f64::max) {
        return Err(Error::Domain {
            method: VacuumMethod::Kernel.name(),
            theta: angle.value(),
        });
    }
    let factor = C64::new(closed_form_amplitude(angle, 0), 0.0) / at_origin;
    amps.mapv_inplace(|z| z * factor);
    StateVector::new(basis, amps, Role::Ket)
}

/// Nullspace basis by Gauss-Jordan reduction with complete pivoting.
///
/// Partial pivoting is not rank-revealing on the pair-sector blocks: the
/// last pivot can stall many orders of magnitude above round-off.
fn nullspace(m: &Array2<C64>) -> Vec<Array1<C64>> {
    let (rows, cols) = m.dim();
    let mut a = m.clone();
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let threshold = RANK_TOL * scale.max(f64::MIN_POSITIVE);
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    while rank < rows.min(cols) {
        let mut best = (rank, rank, -1.0);
        for i in rank..rows {
            for j in rank..cols {
                let x = a[[i, j]].norm();
                if x > best.2 {
                    best = (i, j, x);
                }
            }
        }
        let (p, q, size) = best;
        if size <= threshold {
            break;
        }
        for k in 0..cols {
            a.swap([rank, k], [p, k]);
        }
        for i in 0..rows {
            a.swap([i, rank], [i, q]);
        }
        perm.swap(rank, q);
        let inv = C64::new(1.0, 0.0) / a[[rank, rank]];
        for k in 0..cols {
            a[[rank, k]] *= inv;
        }
        for i in 0..rows {
            let f = a[[i, rank]];
            if i == rank || f == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..cols {
                let sub = f * a[[rank, k]];
                a[[i, k]] -= sub;
            }
        }
        rank += 1;
    }
    (rank..cols)
        .map(|free| {
            let mut v = Array1::<C64>::zeros(cols);
            v[perm[free]] = C64::new(1.0, 0.0);
            for i in 0..rank {
                v[perm[i]] = -a[[i, free]];
            }
            v
        })
        .collect()
}

/// `|n1, n2>> = (abar_1^‡)^n1 (abar_2^‡)^n2 |0>> / sqrt(n1! n2!)` and its dual.
///
/// Needs `n1 + n2 + 2 <= n_max`.
pub fn barred_fock_state(
    basis: FockBasis,
    n1: usize,
    n2: usize,
    angle: Angle,
    method: VacuumMethod,
    tol: f64,
) -> Result<BarredState> {
    let needed = n1 + n2 + 2;
    if needed > basis.n_max() {
        return Err(Error::Capacity {
            n_max: basis.n_max(),
            needed,
        });
    }
    let ket = ladder_state(basis, n1, n2, angle, method, tol)?;
    let dual_bra =
        ladder_state(basis, n1, n2, angle.negated(), method, tol)?.with_role(Role::DualBra);
    Ok(BarredState {
        label: FockIndex::new(n1, n2),
        angle,
        method,
        ket,
        dual_bra,
    })
}

fn ladder_state(
    basis: FockBasis,
    n1: usize,
    n2: usize,
    angle: Angle,
    method: VacuumMethod,
    tol: f64,
) -> Result<StateVector> {
    let mut v = bogoliubov_vacuum(basis, angle, method, tol)?;
    if n1 + n2 == 0 {
        return Ok(v);
    }
    let bar = build_barred_linear(basis, angle);
    for _ in 0..n2 {
        v = bar.raise[1].apply(&v)?;
    }
    for _ in 0..n1 {
        v = bar.raise[0].apply(&v)?;
    }
    let norm = (factorial(n1) * factorial(n2)).sqrt();
    Ok(v.scale(C64::new(1.0 / norm, 0.0)))
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Pairing `sum conj(bra_k) ket_k` of a dual bra with a ket.
///
/// The sum is accumulated shell by shell in `max(n1, n2)`; if either of the
/// two outermost shells still contributes more than [`PAIRING_TAIL_TOL`] the
/// truncated series has not converged and `NonConvergent` is returned.
pub fn proper_inner(bra: &StateVector, ket: &StateVector) -> Result<C64> {
    check_basis(bra.basis(), ket.basis())?;
    if bra.role() != Role::DualBra {
        return Err(Error::Role {
            expected: Role::DualBra.name(),
            got: bra.role().name(),
        });
    }
    if ket.role() != Role::Ket {
        return Err(Error::Role {
            expected: Role::Ket.name(),
            got: ket.role().name(),
        });
    }
    let basis = *ket.basis();
    let mut shells = vec![C64::new(0.0, 0.0); basis.levels()];
    for (k, idx) in basis.iter().enumerate() {
        shells[idx.shell()] += bra.amplitudes()[k].conj() * ket.amplitudes()[k];
    }
    let tail = shells
        .iter()
        .rev()
        .take(2)
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if tail > PAIRING_TAIL_TOL {
        return Err(Error::NonConvergent { tail });
    }
    Ok(shells.iter().sum())
}

/// `hbar omega (n1 - n2) +- i (hbar gamma / 2m)(n1 + n2 + 1)`.
pub fn eigenvalue_ft(
    n1: usize,
    n2: usize,
    p: &PhysParams,
    branch: SignBranch,
) -> ComplexEigenvalue {
    let re = p.energy_quantum() * (n1 as f64 - n2 as f64);
    let im = branch.sign() * p.damping() * (n1 + n2 + 1) as f64;
    ComplexEigenvalue(C64::new(re, im))
}

/// `hbar omega (n1 + n2 + 1) +- i (hbar gamma / 2m)(n1 - n2)`.
pub fn eigenvalue_is(
    n1: usize,
    n2: usize,
    p: &PhysParams,
    branch: SignBranch,
) -> ComplexEigenvalue {
    let re = p.energy_quantum() * (n1 + n2 + 1) as f64;
    let im = branch.sign() * p.damping() * (n1 as f64 - n2 as f64);
    ComplexEigenvalue(C64::new(re, im))
}

/// `||(H ket - e ket)|_interior|| / ||ket|_interior||`.
///
/// Only meaningful at a branch point; generic angles are a usage error. The
/// cap must leave `n1 + n2 + margin + 4` levels of headroom.
pub fn eigen_residual(
    h: &OperatorMatrix,
    state: &BarredState,
    e: ComplexEigenvalue,
    margin: usize,
) -> Result<f64> {
    if state.angle.branch().is_none() {
        return Err(Error::Usage(format!(
            "eigen_residual needs a branch state, got theta = {}",
            state.angle
        )));
    }
    check_basis(h.basis(), state.ket.basis())?;
    let basis = *h.basis();
    let needed = state.label.total() + margin + 4;
    if needed > basis.n_max() {
        return Err(Error::Capacity {
            n_max: basis.n_max(),
            needed,
        });
    }
    let block = InteriorBlock::new(margin);
    let hv = h.apply(&state.ket)?;
    let diff = hv.sub(&state.ket.scale(e.0))?;
    let denom = state.ket.interior_norm(block);
    if denom == 0.0 {
        return Err(Error::DegenerateInput);
    }
    Ok(diff.interior_norm(block) / denom)
}

/// Largest interior residual `||abar_i |v>||` over both modes.
pub fn annihilation_residual(v: &StateVector, angle: Angle, margin: usize) -> Result<f64> {
    let bar = build_barred_linear(*v.basis(), angle);
    let block = InteriorBlock::new(margin);
    let mut worst = 0.0f64;
    for op in &bar.lower {
        worst = worst.max(op.apply(v)?.interior_norm(block));
    }
    Ok(worst)
}

/// Residual of the naive Fock-vacuum condition `a_i |0> = 0`.
pub fn naive_annihilation_residual(basis: FockBasis) -> f64 {
    let v = vacuum_naive(basis);
    Mode::BOTH
        .iter()
        .map(|&m| {
            ladder_matrix(basis, m, Ladder::Lower)
                .apply(&v)
                .map(|w| w.max_abs())
                .unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max)
}
