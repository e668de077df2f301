//! Matrix exponential by truncated Taylor series with scaling and squaring.
//!
//! The argument is scaled by `2^-s` until its infinity norm is at most 1/2,
//! the series order is the smallest `K` whose a-priori tail bound
//!
//! ```text
//! ||B||^(K+1) / (K+1)! * 1 / (1 - ||B|| / (K+2))
//! ```
//!
//! is below the per-step budget, and the result is squared `s` times. The
//! budget is `tol / (2^s e^||A||)`, which bounds the propagated truncation
//! error of the squarings in the same norm. The infinity norm dominates the
//! max-norm, so the result meets `tol` entrywise.

use ndarray::Array2;

use super::operator::{dense_matmul, inf_norm, OperatorMatrix};
use crate::{Error, Result, C64};

/// Highest Taylor order attempted before reporting non-convergence.
pub const MAX_SERIES_ORDER: usize = 60;

const SCALED_NORM: f64 = 0.5;

pub fn matrix_exp(a: &OperatorMatrix, tol: f64) -> Result<OperatorMatrix> {
    let entries = expm_dense(a.entries(), tol)?;
    OperatorMatrix::from_entries(*a.basis(), entries)
}

pub(crate) fn expm_dense(a: &Array2<C64>, tol: f64) -> Result<Array2<C64>> {
    let convergence = Error::Convergence {
        tol,
        max_order: MAX_SERIES_ORDER,
    };
    if tol.is_nan() || tol <= 0.0 {
        return Err(convergence);
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(convergence);
    }
    let norm = inf_norm(a);
    if !norm.is_finite() {
        return Err(convergence);
    }

    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > SCALED_NORM {
        scaled_norm /= 2.0;
        squarings += 1;
    }
    let budget = tol / (2f64.powi(squarings as i32) * norm.exp());
    let order = series_order(scaled_norm, budget).ok_or(convergence)?;

    let factor = C64::new(2f64.powi(-(squarings as i32)), 0.0);
    let b = a.mapv(|z| z * factor);
    let n = a.nrows();
    let mut sum = Array2::<C64>::eye(n);
    let mut term = Array2::<C64>::eye(n);
    for k in 1..=order {
        term = dense_matmul(&term, &b);
        let inv_k = C64::new(1.0 / k as f64, 0.0);
        term.mapv_inplace(|z| z * inv_k);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = dense_matmul(&sum, &sum);
    }
    Ok(sum)
}

/// Smallest order whose Taylor tail bound at norm `x` is at most `budget`.
fn series_order(x: f64, budget: f64) -> Option<usize> {
    if x == 0.0 {
        return Some(0);
    }
    // term = x^(K+1) / (K+1)!
    let mut term = x;
    for k in 0..=MAX_SERIES_ORDER {
        let tail = term / (1.0 - x / (k as f64 + 2.0));
        if tail <= budget {
            return Some(k);
        }
        term *= x / (k as f64 + 2.0);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::FockBasis;

    #[test]
    fn exp_of_zero_is_identity() {
        let b = FockBasis::new(3);
        let e = matrix_exp(&OperatorMatrix::zeros(b), 1e-12).unwrap();
        assert_eq!(e, OperatorMatrix::identity(b));
    }

    #[test]
    fn scalar_exponential() {
        let b = FockBasis::new(0);
        for z in [C64::new(3.0, 0.0), C64::new(-2.0, 1.5), C64::new(0.0, 12.0)] {
            let op = OperatorMatrix::from_entries(b, Array2::from_elem((1, 1), z)).unwrap();
            let e = matrix_exp(&op, 1e-13).unwrap();
            let got = e.entries()[[0, 0]];
            assert!((got - z.exp()).norm() <= 1e-12 * z.exp().norm(), "{z}");
        }
    }

    #[test]
    fn rotation_generator() {
        // exp([[0, -t], [t, 0]]) is a rotation by t.
        let t = 2.3;
        let m = Array2::from_shape_vec(
            (2, 2),
            vec![
                C64::new(0.0, 0.0),
                C64::new(-t, 0.0),
                C64::new(t, 0.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let e = expm_dense(&m, 1e-14).unwrap();
        assert!((e[[0, 0]].re - t.cos()).abs() < 1e-13);
        assert!((e[[1, 0]].re - t.sin()).abs() < 1e-13);
        assert!((e[[0, 1]].re + t.sin()).abs() < 1e-13);
    }

    #[test]
    fn non_finite_input_is_a_convergence_error() {
        let m = Array2::from_elem((2, 2), C64::new(f64::NAN, 0.0));
        assert!(matches!(
            expm_dense(&m, 1e-10),
            Err(Error::Convergence { .. })
        ));
    }

    #[test]
    fn unreachable_tolerance_is_a_convergence_error() {
        let m = Array2::from_elem((2, 2), C64::new(0.4, 0.0));
        assert!(matches!(
            expm_dense(&m, 1e-300),
            Err(Error::Convergence { .. })
        ));
        assert!(matches!(
            expm_dense(&m, 0.0),
            Err(Error::Convergence { .. })
        ));
    }

    #[test]
    fn order_grows_as_budget_shrinks() {
        let coarse = series_order(0.5, 1e-4).unwrap();
        let fine = series_order(0.5, 1e-14).unwrap();
        assert!(fine > coarse);
        assert_eq!(series_order(0.0, 1e-14), Some(0));
    }
}
