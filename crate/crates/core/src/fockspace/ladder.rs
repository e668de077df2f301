use super::basis::FockBasis;
use super::operator::{check_basis, OperatorMatrix};
use crate::{Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    One,
    Two,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::One, Mode::Two];

    pub fn number(&self) -> usize {
        match self {
            Mode::One => 1,
            Mode::Two => 2,
        }
    }

    pub fn other(&self) -> Mode {
        match self {
            Mode::One => Mode::Two,
            Mode::Two => Mode::One,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ladder {
    Lower,
    Raise,
}

/// Annihilation (`Lower`) or creation (`Raise`) matrix for one mode.
///
/// `<n-1| a |n> = sqrt(n)` on the selected mode and the identity on the other.
/// Raising the top level `n_max` leaves the basis and maps to zero.
pub fn ladder_matrix(basis: FockBasis, mode: Mode, kind: Ladder) -> OperatorMatrix {
    let mut op = OperatorMatrix::zeros(basis);
    let n_max = basis.n_max();
    let entries = op.entries_mut();
    for idx in basis.iter() {
        let n = match mode {
            Mode::One => idx.n1,
            Mode::Two => idx.n2,
        };
        if n == 0 {
            continue;
        }
        let lowered = match mode {
            Mode::One => basis.idx(idx.n1 - 1, idx.n2),
            Mode::Two => basis.idx(idx.n1, idx.n2 - 1),
        };
        let here = basis.idx(idx.n1, idx.n2);
        debug_assert!(n <= n_max);
        let amp = C64::new((n as f64).sqrt(), 0.0);
        match kind {
            Ladder::Lower => entries[[lowered, here]] = amp,
            Ladder::Raise => entries[[here, lowered]] = amp,
        }
    }
    op
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    check_basis(a.basis(), b.basis())?;
    Ok(&(a * b) - &(b * a))
}
