use std::ops::{Add, Mul, Neg, Sub};

use ndarray::{Array1, Array2, Zip};

use super::basis::{FockBasis, FockIndex, InteriorBlock};
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Dense product that skips structurally zero left entries.
///
/// Every operator in this crate is sparse in the Fock basis (ladder matrices,
/// `X`, and the sector-block exponentials of `X`), so the row-axpy form keeps
/// products cheap without a sparse format. Summation order is fixed by the
/// loop order.
pub(crate) fn dense_matmul(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    assert_eq!(a.ncols(), b.nrows(), "inner dimensions differ");
    let mut out = Array2::zeros((a.nrows(), b.ncols()));
    for (i, a_row) in a.outer_iter().enumerate() {
        let mut out_row = out.row_mut(i);
        for (k, &aik) in a_row.iter().enumerate() {
            if aik == ZERO {
                continue;
            }
            out_row.scaled_add(aik, &b.row(k));
        }
    }
    out
}

pub(crate) fn dense_matvec(a: &Array2<C64>, v: &Array1<C64>) -> Array1<C64> {
    assert_eq!(a.ncols(), v.len(), "matrix-vector dimensions differ");
    a.outer_iter()
        .map(|row| {
            row.iter()
                .zip(v.iter())
                .filter(|(aik, _)| **aik != ZERO)
                .fold(ZERO, |acc, (aik, vk)| acc + aik * vk)
        })
        .collect()
}

/// Maximum absolute row sum (induced infinity norm).
pub(crate) fn inf_norm(a: &Array2<C64>) -> f64 {
    a.outer_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Dense complex operator over a [`FockBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    basis: FockBasis,
    entries: Array2<C64>,
}

impl OperatorMatrix {
    pub fn zeros(basis: FockBasis) -> Self {
        let d = basis.dim();
        OperatorMatrix {
            basis,
            entries: Array2::zeros((d, d)),
        }
    }

    pub fn identity(basis: FockBasis) -> Self {
        OperatorMatrix {
            basis,
            entries: Array2::eye(basis.dim()),
        }
    }

    pub fn from_entries(basis: FockBasis, entries: Array2<C64>) -> Result<Self> {
        let d = basis.dim();
        if entries.nrows() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: entries.nrows(),
            });
        }
        if entries.ncols() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: entries.ncols(),
            });
        }
        Ok(OperatorMatrix { basis, entries })
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut Array2<C64> {
        &mut self.entries
    }

    pub fn into_entries(self) -> Array2<C64> {
        self.entries
    }

    /// Matrix element `<row| A |col>`; zero outside the basis.
    pub fn element(&self, row: FockIndex, col: FockIndex) -> C64 {
        match (self.basis.index_of(row), self.basis.index_of(col)) {
            (Some(i), Some(j)) => self.entries[[i, j]],
            _ => ZERO,
        }
    }

    pub fn adjoint(&self) -> Self {
        OperatorMatrix {
            basis: self.basis,
            entries: self.entries.t().mapv(|z| z.conj()),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        OperatorMatrix {
            basis: self.basis,
            entries: self.entries.mapv(|z| z * factor),
        }
    }

    pub fn max_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm over entries whose row and column both lie in `block`.
    pub fn interior_max_norm(&self, block: InteriorBlock) -> f64 {
        let idx = block.indices(&self.basis);
        let mut best = 0.0f64;
        for &i in &idx {
            for &j in &idx {
                best = best.max(self.entries[[i, j]].norm());
            }
        }
        best
    }

    /// Sum of diagonal entries over `block`.
    pub fn interior_trace(&self, block: InteriorBlock) -> C64 {
        block
            .indices(&self.basis)
            .into_iter()
            .map(|i| self.entries[[i, i]])
            .sum()
    }

    /// Applies the operator to a ket; the result is a ket over the same basis.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        check_basis(&self.basis, &v.basis)?;
        Ok(StateVector {
            basis: self.basis,
            amplitudes: dense_matvec(&self.entries, &v.amplitudes),
            role: v.role,
        })
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!(self.basis, rhs.basis, "operators live on different bases");
        let mut entries = self.entries.clone();
        Zip::from(&mut entries)
            .and(&rhs.entries)
            .for_each(|a, &b| *a = f(*a, b));
        OperatorMatrix {
            basis: self.basis,
            entries,
        }
    }
}

pub(crate) fn check_basis(a: &FockBasis, b: &FockBasis) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        })
    }
}

// Arithmetic operators panic on basis mismatch; use `commutator` or
// `OperatorMatrix::apply` for the checked forms.
impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.basis, rhs.basis, "operators live on different bases");
        OperatorMatrix {
            basis: self.basis,
            entries: dense_matmul(&self.entries, &rhs.entries),
        }
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul<&OperatorMatrix> for C64 {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        rhs.scale(self)
    }
}

impl Mul<&OperatorMatrix> for f64 {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        rhs.scale(C64::new(self, 0.0))
    }
}

/// Whether a [`StateVector`] is a ket or the amplitude array of a bra.
///
/// A bra `<phi|` is stored by the amplitudes `phi_k` with the pairing
/// `<phi|psi> = sum conj(phi_k) psi_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Ket,
    DualBra,
}

impl Role {
    pub fn name(&self) -> &'static str {
        match self {
            Role::Ket => "ket",
            Role::DualBra => "dual-bra",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: FockBasis,
    amplitudes: Array1<C64>,
    role: Role,
}

impl StateVector {
    pub fn new(basis: FockBasis, amplitudes: Array1<C64>, role: Role) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                left: basis.dim(),
                right: amplitudes.len(),
            });
        }
        Ok(StateVector {
            basis,
            amplitudes,
            role,
        })
    }

    pub fn zeros(basis: FockBasis, role: Role) -> Self {
        StateVector {
            basis,
            amplitudes: Array1::zeros(basis.dim()),
            role,
        }
    }

    /// Unit vector `|n1, n2>`; `None` outside the basis.
    pub fn unit(basis: FockBasis, idx: FockIndex, role: Role) -> Option<Self> {
        let k = basis.index_of(idx)?;
        let mut v = Self::zeros(basis, role);
        v.amplitudes[k] = C64::new(1.0, 0.0);
        Some(v)
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    pub fn amplitude(&self, idx: FockIndex) -> C64 {
        self.basis
            .index_of(idx)
            .map_or(ZERO, |k| self.amplitudes[k])
    }

    pub fn scale(&self, factor: C64) -> Self {
        StateVector {
            basis: self.basis,
            amplitudes: self.amplitudes.mapv(|z| z * factor),
            role: self.role,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_basis(&self.basis, &other.basis)?;
        Ok(StateVector {
            basis: self.basis,
            amplitudes: &self.amplitudes - &other.amplitudes,
            role: self.role,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Euclidean norm of the amplitudes restricted to `block`.
    pub fn interior_norm(&self, block: InteriorBlock) -> f64 {
        block
            .indices(&self.basis)
            .into_iter()
            .map(|k| self.amplitudes[k].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest amplitude difference over `block`.
    pub fn interior_max_diff(&self, other: &Self, block: InteriorBlock) -> Result<f64> {
        check_basis(&self.basis, &other.basis)?;
        Ok(block
            .indices(&self.basis)
            .into_iter()
            .map(|k| (self.amplitudes[k] - other.amplitudes[k]).norm())
            .fold(0.0, f64::max))
    }
}

/// The plain pairing `sum conj(u_k) v_k` of two amplitude arrays.
///
/// This ignores roles: it is the pairing that becomes improper once the two
/// arguments belong to different representations.
pub fn naive_inner(u: &StateVector, v: &StateVector) -> Result<C64> {
    check_basis(&u.basis, &v.basis)?;
    Ok(u.amplitudes
        .iter()
        .zip(v.amplitudes.iter())
        .map(|(a, b)| a.conj() * b)
        .sum())
}
