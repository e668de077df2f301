//! Truncated two-mode bosonic Fock space.
//!
//! The space is box-truncated at a per-mode cap `n_max`. Operators are dense
//! complex matrices; identities of the untruncated theory are only expected to
//! hold on an [`InteriorBlock`] away from the cap.

mod basis;
mod expm;
mod ladder;
mod operator;

pub use basis::{FockBasis, FockIndex, InteriorBlock};
pub use expm::{matrix_exp, MAX_SERIES_ORDER};
pub use ladder::{commutator, ladder_matrix, Ladder, Mode};
pub use operator::{naive_inner, OperatorMatrix, Role, StateVector};

pub(crate) use expm::expm_dense;
pub(crate) use operator::{check_basis, dense_matmul};

/// Builds the box-truncated basis with cap `n_max`.
pub fn make_basis(n_max: usize) -> FockBasis {
    FockBasis::new(n_max)
}
