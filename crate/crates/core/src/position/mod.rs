//! Position representation.
//!
//! Eigenfunctions are products of normalized Hermite functions in the
//! dimensionless coordinate `xi = sqrt(m omega / hbar) x`. Differential
//! operators act exactly on Hermite expansions; grids and finite
//! differences only serve as cross-checks.

mod diffop;
mod hermite;
mod improper;
mod quadrature;
mod wavefunction;

pub use diffop::{
    apply_ladder_diff, central_diff4, hamiltonian_diff, hamiltonian_diff_residual,
    ladder_fd_residual, ladder_op, square_grid, vacuum_pde_residual, vacuum_pde_residual_fd,
    DiffOp, DiffOpRep, Monomial,
};
pub use hermite::{
    hermite, hermite_function, hermite_function_derivative, hermite_functions, orthonormal_polys,
};
pub use improper::{improper_partial_sum, mollified_weak_residual, Mollifier, TestFunction};
pub use quadrature::{gauss_hermite_rule, QuadratureRule};
pub use wavefunction::{eigenfunction, l2_gram, to_xi, HermiteExpansion, WavefunctionSpec};
