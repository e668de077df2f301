//! Bateman-model operators on the truncated Fock space.
//!
//! `X = a1 a2 + a1^dag a2^dag` generates the non-unitary transformation
//! `e^{theta X}`. Conjugating the ladder operators by it yields the barred
//! operators, which for real `theta` are the linear combinations
//!
//! ```text
//! abar_1   = cos(theta) a1     - sin(theta) a2^dag
//! abar_2   = -sin(theta) a1^dag + cos(theta) a2
//! abar_1^‡ = cos(theta) a1^dag + sin(theta) a2
//! abar_2^‡ = sin(theta) a1     + cos(theta) a2^dag
//! ```
//!
//! At `theta = ±pi/4` the Hamiltonian becomes diagonal in the barred number
//! operators.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use ndarray::Array2;

use crate::fockspace::{
    dense_matmul, expm_dense, ladder_matrix, FockBasis, FockIndex, Ladder, Mode, OperatorMatrix,
};
use crate::{Error, Result, C64};

/// Physical constants of the oscillator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysParams {
    pub mass: f64,
    pub omega: f64,
    pub gamma: f64,
    pub hbar: f64,
}

impl Default for PhysParams {
    /// `m = omega = hbar = 1`, `gamma = 0.2`.
    fn default() -> Self {
        PhysParams {
            mass: 1.0,
            omega: 1.0,
            gamma: 0.2,
            hbar: 1.0,
        }
    }
}

impl PhysParams {
    pub fn new(mass: f64, omega: f64, gamma: f64, hbar: f64) -> Result<Self> {
        let positive = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParam {
                    name,
                    reason: format!("{v} is not a finite positive number"),
                })
            }
        };
        positive("mass", mass)?;
        positive("omega", omega)?;
        positive("hbar", hbar)?;
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidParam {
                name: "gamma",
                reason: format!("{gamma} is not a finite non-negative number"),
            });
        }
        Ok(PhysParams {
            mass,
            omega,
            gamma,
            hbar,
        })
    }

    /// `hbar * omega`.
    pub fn energy_quantum(&self) -> f64 {
        self.hbar * self.omega
    }

    /// `hbar * gamma / (2 m)`, the damping energy scale.
    pub fn damping(&self) -> f64 {
        self.hbar * self.gamma / (2.0 * self.mass)
    }

    /// `m omega / hbar`; the dimensionless coordinate is `xi = sqrt(this) * x`.
    pub fn inverse_length_sq(&self) -> f64 {
        self.mass * self.omega / self.hbar
    }
}

/// The `±` choice tied to `theta = ±pi/4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignBranch {
    Plus,
    Minus,
}

impl SignBranch {
    pub const BOTH: [SignBranch; 2] = [SignBranch::Plus, SignBranch::Minus];

    pub fn sign(&self) -> f64 {
        match self {
            SignBranch::Plus => 1.0,
            SignBranch::Minus => -1.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.sign() * FRAC_PI_4
    }

    pub fn flip(&self) -> SignBranch {
        match self {
            SignBranch::Plus => SignBranch::Minus,
            SignBranch::Minus => SignBranch::Plus,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SignBranch::Plus => "plus",
            SignBranch::Minus => "minus",
        }
    }
}

impl fmt::Display for SignBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SignBranch {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "plus" | "+" => Ok(SignBranch::Plus),
            "minus" | "-" => Ok(SignBranch::Minus),
            other => Err(format!("unknown branch {other:?} (expected plus|minus)")),
        }
    }
}

/// Real transformation angle, either generic or exactly at a branch point.
///
/// At a branch `cos` and `sin` are taken as exactly `1/sqrt(2)` so the
/// linear forms reproduce `(a1 ∓ a2^dag)/sqrt(2)` bit for bit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    Real(f64),
    Branch(SignBranch),
}

impl Angle {
    pub fn value(&self) -> f64 {
        match self {
            Angle::Real(t) => *t,
            Angle::Branch(b) => b.theta(),
        }
    }

    pub fn cos_sin(&self) -> (f64, f64) {
        match self {
            Angle::Real(t) => (t.cos(), t.sin()),
            Angle::Branch(b) => (FRAC_1_SQRT_2, b.sign() * FRAC_1_SQRT_2),
        }
    }

    pub fn negated(&self) -> Angle {
        match self {
            Angle::Real(t) => Angle::Real(-t),
            Angle::Branch(b) => Angle::Branch(b.flip()),
        }
    }

    pub fn branch(&self) -> Option<SignBranch> {
        match self {
            Angle::Branch(b) => Some(*b),
            Angle::Real(_) => None,
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Real(t) => write!(f, "{t}"),
            Angle::Branch(b) => write!(f, "{b}"),
        }
    }
}

/// Complex transformation parameter accepted by the conjugation route.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Theta(pub C64);

impl Theta {
    pub fn real(t: f64) -> Self {
        Theta(C64::new(t, 0.0))
    }

    pub fn as_real(&self) -> Option<f64> {
        (self.0.im == 0.0).then_some(self.0.re)
    }
}

impl From<Angle> for Theta {
    fn from(a: Angle) -> Self {
        Theta::real(a.value())
    }
}

/// The four barred ladder operators.
#[derive(Clone, Debug)]
pub struct BarredOperators {
    /// `abar_1`, `abar_2`.
    pub lower: [OperatorMatrix; 2],
    /// `abar_1^‡`, `abar_2^‡`.
    pub raise: [OperatorMatrix; 2],
}

impl BarredOperators {
    pub fn get(&self, mode: Mode, kind: Ladder) -> &OperatorMatrix {
        let i = mode.number() - 1;
        match kind {
            Ladder::Lower => &self.lower[i],
            Ladder::Raise => &self.raise[i],
        }
    }

    pub fn all(&self) -> [&OperatorMatrix; 4] {
        [
            &self.lower[0],
            &self.lower[1],
            &self.raise[0],
            &self.raise[1],
        ]
    }
}

struct Ladders {
    a1: OperatorMatrix,
    a2: OperatorMatrix,
    a1d: OperatorMatrix,
    a2d: OperatorMatrix,
}

impl Ladders {
    fn new(basis: FockBasis) -> Self {
        Ladders {
            a1: ladder_matrix(basis, Mode::One, Ladder::Lower),
            a2: ladder_matrix(basis, Mode::Two, Ladder::Lower),
            a1d: ladder_matrix(basis, Mode::One, Ladder::Raise),
            a2d: ladder_matrix(basis, Mode::Two, Ladder::Raise),
        }
    }
}

/// `X = a1 a2 + a1^dag a2^dag`.
pub fn build_x(basis: FockBasis) -> OperatorMatrix {
    let l = Ladders::new(basis);
    &(&l.a1 * &l.a2) + &(&l.a1d * &l.a2d)
}

/// `H = hbar omega (a1^dag a1 - a2^dag a2) + i (hbar gamma / 2m)(a1 a2 - a1^dag a2^dag)`.
pub fn build_h_original(basis: FockBasis, p: &PhysParams) -> OperatorMatrix {
    let l = Ladders::new(basis);
    let number_diff = &(&l.a1d * &l.a1) - &(&l.a2d * &l.a2);
    let pair = &(&l.a1 * &l.a2) - &(&l.a1d * &l.a2d);
    &number_diff.scale(C64::new(p.energy_quantum(), 0.0)) + &pair.scale(C64::new(0.0, p.damping()))
}

/// Barred operators as explicit linear combinations of the truncated ladders.
pub fn build_barred_linear(basis: FockBasis, angle: Angle) -> BarredOperators {
    use Ladder::{Lower, Raise};
    use Mode::{One, Two};
    let (c, s) = angle.cos_sin();
    let combo = |terms: [(f64, Mode, Ladder); 2]| ladder_combination(basis, &terms);
    BarredOperators {
        lower: [
            combo([(c, One, Lower), (-s, Two, Raise)]),
            combo([(c, Two, Lower), (-s, One, Raise)]),
        ],
        raise: [
            combo([(c, One, Raise), (s, Two, Lower)]),
            combo([(c, Two, Raise), (s, One, Lower)]),
        ],
    }
}

/// `sum_k c_k (ladder)_k`, written entry by entry into one matrix.
fn ladder_combination(basis: FockBasis, terms: &[(f64, Mode, Ladder)]) -> OperatorMatrix {
    let mut op = OperatorMatrix::zeros(basis);
    let e = op.entries_mut();
    for &(coef, mode, kind) in terms {
        for idx in basis.iter() {
            let (n, below) = match mode {
                Mode::One if idx.n1 > 0 => (idx.n1, basis.idx(idx.n1 - 1, idx.n2)),
                Mode::Two if idx.n2 > 0 => (idx.n2, basis.idx(idx.n1, idx.n2 - 1)),
                _ => continue,
            };
            let here = basis.idx(idx.n1, idx.n2);
            let amp = C64::new(coef * (n as f64).sqrt(), 0.0);
            match kind {
                Ladder::Lower => e[[below, here]] += amp,
                Ladder::Raise => e[[here, below]] += amp,
            }
        }
    }
    op
}

/// Smallest padding tried by [`build_barred_conjugated`].
pub const CONJUGATION_MIN_PAD: usize = 16;
/// Padding increment between successive conjugation attempts.
pub const CONJUGATION_PAD_STEP: usize = 8;
/// Largest padding tried before reporting non-convergence.
pub const CONJUGATION_MAX_PAD: usize = 64;

/// Barred operators as `e^{theta X} a e^{-theta X}`.
///
/// Conjugating the truncated matrices directly is useless: the edge defect of
/// the truncated `X` is amplified by the non-unitary exponential and reaches
/// the whole basis. The conjugation is therefore carried out in a larger
/// auxiliary basis (`n_max + pad`) and projected back; `pad` grows until two
/// successive projections agree to `tol`.
///
/// `X` conserves `n1 - n2`, so each exponential is computed block by block on
/// the sectors of fixed difference.
pub fn build_barred_conjugated(
    basis: FockBasis,
    theta: Theta,
    tol: f64,
) -> Result<BarredOperators> {
    let mut previous: Option<BarredOperators> = None;
    let mut pad = CONJUGATION_MIN_PAD;
    while pad <= CONJUGATION_MAX_PAD {
        let current = conjugate_projected(basis, FockBasis::new(basis.n_max() + pad), theta, tol)?;
        if let Some(prev) = &previous {
            let change = prev
                .all()
                .iter()
                .zip(current.all().iter())
                .map(|(a, b)| (*a - *b).max_norm())
                .fold(0.0, f64::max);
            if change <= tol {
                return Ok(current);
            }
        }
        previous = Some(current);
        pad += CONJUGATION_PAD_STEP;
    }
    Err(Error::Convergence {
        tol,
        max_order: crate::fockspace::MAX_SERIES_ORDER,
    })
}

fn conjugate_projected(
    target: FockBasis,
    aux: FockBasis,
    theta: Theta,
    tol: f64,
) -> Result<BarredOperators> {
    let sectors = Sectors::new(aux, target);
    let forward = sectors.exponentials(theta.0, tol)?;
    let backward = sectors.exponentials(-theta.0, tol)?;
    let conj =
        |mode: Mode, kind: Ladder| sectors.conjugate(target, &forward, &backward, mode, kind);
    Ok(BarredOperators {
        lower: [
            conj(Mode::One, Ladder::Lower),
            conj(Mode::Two, Ladder::Lower),
        ],
        raise: [
            conj(Mode::One, Ladder::Raise),
            conj(Mode::Two, Ladder::Raise),
        ],
    })
}

/// Decomposition of a basis into sectors of fixed `n1 - n2`, which `X`
/// preserves. Members of a sector are ordered by `n1`.
struct Sectors {
    aux: FockBasis,
    /// `(diff, members)` for every `diff` in `-n_max..=n_max`.
    members: Vec<(isize, Vec<FockIndex>)>,
    /// For each sector, positions of members that lie in the target basis.
    in_target: Vec<Vec<usize>>,
}

impl Sectors {
    fn new(aux: FockBasis, target: FockBasis) -> Self {
        let n_max = aux.n_max() as isize;
        let members: Vec<(isize, Vec<FockIndex>)> = (-n_max..=n_max)
            .map(|diff| {
                let list = (0..=aux.n_max())
                    .filter_map(|n1| {
                        let n2 = n1 as isize - diff;
                        (n2 >= 0 && n2 <= n_max).then(|| FockIndex::new(n1, n2 as usize))
                    })
                    .collect();
                (diff, list)
            })
            .collect();
        let in_target = members
            .iter()
            .map(|(_, list)| {
                list.iter()
                    .enumerate()
                    .filter(|(_, idx)| target.contains(**idx))
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        Sectors {
            aux,
            members,
            in_target,
        }
    }

    fn position(&self, diff: isize) -> Option<usize> {
        let n_max = self.aux.n_max() as isize;
        (diff.abs() <= n_max).then(|| (diff + n_max) as usize)
    }

    /// `exp(z X)` restricted to each sector.
    fn exponentials(&self, z: C64, tol: f64) -> Result<Vec<Array2<C64>>> {
        self.members
            .iter()
            .map(|(_, list)| {
                let x_block = Array2::from_shape_fn((list.len(), list.len()), |(i, j)| {
                    let (a, b) = (list[i], list[j]);
                    // <n1+1, n2+1| X |n1, n2> = sqrt((n1+1)(n2+1)), and its transpose.
                    let elem = if a.n1 == b.n1 + 1 {
                        ((a.n1 * a.n2) as f64).sqrt()
                    } else if b.n1 == a.n1 + 1 {
                        ((b.n1 * b.n2) as f64).sqrt()
                    } else {
                        0.0
                    };
                    z * elem
                });
                expm_dense(&x_block, tol)
            })
            .collect()
    }

    /// Target-basis entries of `E op E^-1` for a ladder operator `op`.
    fn conjugate(
        &self,
        target: FockBasis,
        forward: &[Array2<C64>],
        backward: &[Array2<C64>],
        mode: Mode,
        kind: Ladder,
    ) -> OperatorMatrix {
        // Sector shift of the operator: lowering n1 or raising n2 decreases n1 - n2.
        let shift: isize = match (mode, kind) {
            (Mode::One, Ladder::Lower) | (Mode::Two, Ladder::Raise) => -1,
            (Mode::One, Ladder::Raise) | (Mode::Two, Ladder::Lower) => 1,
        };
        let mut out = OperatorMatrix::zeros(target);
        for (col_sector, (diff, cols)) in self.members.iter().enumerate() {
            let Some(row_sector) = self.position(diff + shift) else {
                continue;
            };
            let rows = &self.members[row_sector].1;
            let op_block = Array2::from_shape_fn((rows.len(), cols.len()), |(i, j)| {
                ladder_element(rows[i], cols[j], mode, kind)
            });
            let block = dense_matmul(
                &dense_matmul(&forward[row_sector], &op_block),
                &backward[col_sector],
            );
            let entries = out.entries_mut();
            for &i in &self.in_target[row_sector] {
                let gi = target.idx(rows[i].n1, rows[i].n2);
                for &j in &self.in_target[col_sector] {
                    let gj = target.idx(cols[j].n1, cols[j].n2);
                    entries[[gi, gj]] = block[[i, j]];
                }
            }
        }
        out
    }
}

/// `<row| op |col>` for an untruncated ladder operator.
fn ladder_element(row: FockIndex, col: FockIndex, mode: Mode, kind: Ladder) -> C64 {
    let (moved_row, moved_col, fixed_row, fixed_col) = match mode {
        Mode::One => (row.n1, col.n1, row.n2, col.n2),
        Mode::Two => (row.n2, col.n2, row.n1, col.n1),
    };
    if fixed_row != fixed_col {
        return C64::new(0.0, 0.0);
    }
    let amp = match kind {
        Ladder::Lower if moved_row + 1 == moved_col => (moved_col as f64).sqrt(),
        Ladder::Raise if moved_col + 1 == moved_row => (moved_row as f64).sqrt(),
        _ => 0.0,
    };
    C64::new(amp, 0.0)
}

/// `H = hbar omega (N1 - N2) ± i (hbar gamma / 2m)(N1 + N2 + 1)` with the barred
/// number operators `Ni = abar_i^‡ abar_i` at `theta = ±pi/4`.
pub fn build_h_barred(basis: FockBasis, p: &PhysParams, branch: SignBranch) -> OperatorMatrix {
    let bar = build_barred_linear(basis, Angle::Branch(branch));
    let n1 = &bar.raise[0] * &bar.lower[0];
    let n2 = &bar.raise[1] * &bar.lower[1];
    let id = OperatorMatrix::identity(basis);
    let diff = &n1 - &n2;
    let sum = &(&n1 + &n2) + &id;
    &diff.scale(C64::new(p.energy_quantum(), 0.0))
        + &sum.scale(C64::new(0.0, branch.sign() * p.damping()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{commutator, InteriorBlock, Role, StateVector};

    fn unit(basis: FockBasis, n1: usize, n2: usize) -> StateVector {
        StateVector::unit(basis, FockIndex::new(n1, n2), Role::Ket).unwrap()
    }

    #[test]
    fn x_on_vacuum_and_pair_state() {
        let b = FockBasis::new(4);
        let x = build_x(b);
        assert_eq!(x.apply(&unit(b, 0, 0)).unwrap(), unit(b, 1, 1));
        let out = x.apply(&unit(b, 1, 1)).unwrap();
        assert_eq!(out.amplitude(FockIndex::new(0, 0)), C64::new(1.0, 0.0));
        assert!((out.amplitude(FockIndex::new(2, 2)) - C64::new(2.0, 0.0)).norm() < 1e-15);
        let elem = x.element(FockIndex::new(2, 1), FockIndex::new(1, 0));
        assert!((elem.re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn x_is_self_adjoint() {
        let x = build_x(FockBasis::new(6));
        assert_eq!(x, x.adjoint());
    }

    #[test]
    fn x_shifts_a1_on_the_interior() {
        // [X, a1] = -a2^dag away from the cap.
        let b = FockBasis::new(6);
        let c = commutator(&build_x(b), &ladder_matrix(b, Mode::One, Ladder::Lower)).unwrap();
        let want = -&ladder_matrix(b, Mode::Two, Ladder::Raise);
        assert!((&c - &want).interior_max_norm(InteriorBlock::new(1)) < 1e-14);
    }

    #[test]
    fn hamiltonian_examples() {
        let b = FockBasis::new(4);
        let undamped = PhysParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let h0 = build_h_original(b, &undamped);
        let out = h0.apply(&unit(b, 2, 1)).unwrap();
        assert!(out.sub(&unit(b, 2, 1)).unwrap().max_abs() < 1e-15);
        assert!((&h0 - &h0.adjoint()).max_norm() <= 1e-14);

        let h = build_h_original(b, &PhysParams::default());
        let out = h.apply(&unit(b, 0, 0)).unwrap();
        let want = unit(b, 1, 1).scale(C64::new(0.0, -0.1));
        assert!(out.sub(&want).unwrap().max_abs() < 1e-16);
        // i(a1 a2 - a1^dag a2^dag) is self-adjoint, so damping keeps H Hermitian
        // on the Fock side; the complex spectrum lives on non-normalizable states.
        assert!((&h - &h.adjoint()).max_norm() <= 1e-14);
    }

    #[test]
    fn linear_form_reduces_to_pseudo_bogoliubov_at_branch() {
        let b = FockBasis::new(5);
        let bar = build_barred_linear(b, Angle::Branch(SignBranch::Plus));
        let l = Ladders::new(b);
        let want = FRAC_1_SQRT_2 * &(&l.a1 - &l.a2d);
        assert_eq!(bar.lower[0], want);
        let bar_m = build_barred_linear(b, Angle::Branch(SignBranch::Minus));
        assert_eq!(bar_m.lower[0], FRAC_1_SQRT_2 * &(&l.a1 + &l.a2d));
        assert_eq!(bar_m.raise[1], FRAC_1_SQRT_2 * &(&l.a2d - &l.a1));
    }

    #[test]
    fn zero_angle_is_the_identity_transformation() {
        let b = FockBasis::new(3);
        let bar = build_barred_linear(b, Angle::Real(0.0));
        let l = Ladders::new(b);
        assert_eq!(bar.lower[0], l.a1);
        assert_eq!(bar.lower[1], l.a2);
        assert_eq!(bar.raise[0], l.a1d);
        assert_eq!(bar.raise[1], l.a2d);

        let conj = build_barred_conjugated(b, Theta::real(0.0), 1e-12).unwrap();
        for (got, want) in conj.all().iter().zip([&l.a1, &l.a2, &l.a1d, &l.a2d]) {
            assert!((*got - want).max_norm() < 1e-15);
        }
    }

    #[test]
    fn conjugation_matches_linear_form() {
        let b = FockBasis::new(12);
        let conj = build_barred_conjugated(b, Theta::real(0.3), 1e-11).unwrap();
        let lin = build_barred_linear(b, Angle::Real(0.3));
        let block = InteriorBlock::new(2);
        for (c, l) in conj.all().iter().zip(lin.all().iter()) {
            assert!((*c - *l).interior_max_norm(block) <= 1e-9);
        }
        let ccr = commutator(&conj.lower[0], &conj.raise[0]).unwrap();
        let dev = &ccr - &OperatorMatrix::identity(b);
        assert!(dev.interior_max_norm(block) <= 1e-9);
    }

    #[test]
    fn conjugation_fails_to_settle_at_the_branch() {
        let b = FockBasis::new(4);
        let res = build_barred_conjugated(b, Theta::real(FRAC_PI_4), 1e-10);
        assert!(matches!(res, Err(Error::Convergence { .. })));
    }

    #[test]
    fn branches_coincide_without_damping() {
        let b = FockBasis::new(6);
        let p = PhysParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let plus = build_h_barred(b, &p, SignBranch::Plus);
        let minus = build_h_barred(b, &p, SignBranch::Minus);
        assert!((&plus - &minus).interior_max_norm(InteriorBlock::new(2)) < 1e-14);
    }

    #[test]
    fn params_validation() {
        assert!(PhysParams::new(0.0, 1.0, 0.2, 1.0).is_err());
        assert!(PhysParams::new(1.0, 1.0, -0.1, 1.0).is_err());
        assert!(PhysParams::new(1.0, f64::NAN, 0.2, 1.0).is_err());
        assert!(PhysParams::new(1.0, 1.0, 0.0, 1.0).is_ok());
        assert!((PhysParams::default().damping() - 0.1).abs() < 1e-17);
    }

    #[test]
    fn branch_parsing() {
        assert_eq!("plus".parse::<SignBranch>(), Ok(SignBranch::Plus));
        assert_eq!("minus".parse::<SignBranch>(), Ok(SignBranch::Minus));
        assert!("sideways".parse::<SignBranch>().is_err());
    }
}
