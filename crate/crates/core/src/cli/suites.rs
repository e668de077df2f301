//! Check suites: each check measures one number and judges it.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt::Display;
use std::time::Instant;

use rayon::prelude::*;

use super::config::{RunConfig, Suite, MAX_N_MAX};
use super::report::{CheckReport, Criterion};
use crate::fockspace::{
    commutator, ladder_matrix, matrix_exp, naive_inner, FockBasis, FockIndex, InteriorBlock,
    Ladder, Mode, OperatorMatrix,
};
use crate::model::{
    build_barred_conjugated, build_barred_linear, build_h_barred, build_h_original, build_x, Angle,
    PhysParams, SignBranch, Theta,
};
use crate::position::{
    apply_ladder_diff, eigenfunction, gauss_hermite_rule, hamiltonian_diff_residual,
    improper_partial_sum, l2_gram, ladder_fd_residual, mollified_weak_residual, square_grid,
    vacuum_pde_residual, vacuum_pde_residual_fd, DiffOpRep, HermiteExpansion, Mollifier,
    TestFunction, WavefunctionSpec,
};
use crate::states::{
    annihilation_residual, barred_fock_state, bogoliubov_vacuum, eigen_residual, eigenvalue_ft,
    eigenvalue_is, proper_inner, taylor_headroom, VacuumMethod, PAIRING_TAIL_TOL,
};
use crate::{Error, Result, C64};

/// Which suite reaches each invariant. Check ids start with these names.
pub const INVARIANT_COVERAGE: &[(&str, Suite)] = &[
    ("fockspace.raise_adjoint", Suite::Ccr),
    ("fockspace.ccr", Suite::Ccr),
    ("fockspace.exp_group_law", Suite::Ccr),
    ("fockspace.ordering", Suite::Ccr),
    ("model.pseudo_ccr", Suite::Ccr),
    ("model.non_unitarity", Suite::Ccr),
    ("model.dagger_distinction", Suite::Ccr),
    ("model.conjugation", Suite::Ccr),
    ("states.triple_agreement", Suite::Vacuum),
    ("states.annihilation", Suite::Vacuum),
    ("states.branch_pair_amplitudes", Suite::Vacuum),
    ("states.biorthonormality", Suite::Vacuum),
    ("states.naive_norm", Suite::Vacuum),
    ("states.pairing_tail", Suite::Vacuum),
    ("model.hamiltonian_identity", Suite::Spectrum),
    ("states.eigenvector", Suite::Spectrum),
    ("states.branch_conjugation", Suite::Spectrum),
    ("states.reference_eigenvalue", Suite::Spectrum),
    ("position.quadrature_exactness", Suite::Wavefunctions),
    ("position.orthonormality", Suite::Wavefunctions),
    ("position.ladder_consistency", Suite::Wavefunctions),
    ("position.ladder_fd", Suite::Wavefunctions),
    ("position.eigenfunction", Suite::Wavefunctions),
    ("position.vacuum_pde", Suite::Wavefunctions),
    ("position.vacuum_pde_fd", Suite::Wavefunctions),
    ("position.reference_value", Suite::Wavefunctions),
    ("position.weak_limit", Suite::Improper),
    ("position.weak_divergence_free", Suite::Improper),
    ("position.weak_reference", Suite::Improper),
    ("position.weak_ratio", Suite::Improper),
    ("position.representation_contrast", Suite::Improper),
    ("position.partial_sum_convergence", Suite::Improper),
];

/// Series tolerance for vacua and exponentials built inside checks.
const BUILD_TOL: f64 = 1e-14;
/// Worst `|partial sum|` allowed off the support line of the improper series.
const OFF_DIAGONAL_BOUND: f64 = 1.0;

type Measure = Box<dyn Fn() -> Result<C64> + Send + Sync>;

pub struct Check {
    pub id: String,
    pub criterion: Criterion,
    measure: Measure,
}

impl Check {
    fn new(
        id: String,
        criterion: Criterion,
        measure: impl Fn() -> Result<C64> + Send + Sync + 'static,
    ) -> Self {
        Check {
            id,
            criterion,
            measure: Box::new(measure),
        }
    }

    /// Runs the measurement; errors become failed reports.
    pub fn run(&self, config: &RunConfig) -> CheckReport {
        let start = Instant::now();
        let outcome = (self.measure)();
        let elapsed = start.elapsed().as_secs_f64();
        let (measured, error) = match outcome {
            Ok(z) => (z, None),
            Err(e) => (C64::new(f64::NAN, f64::NAN), Some(e.to_string())),
        };
        CheckReport {
            check_id: self.id.clone(),
            params: config.clone(),
            measured: measured.into(),
            tolerance: self.criterion.tolerance(config),
            pass: error.is_none() && self.criterion.passes(measured, config),
            elapsed,
            error,
        }
    }
}

fn id(name: &str, params: &[(&str, &dyn Display)]) -> String {
    let inner: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{name}[{}]", inner.join(";"))
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn identity_gap(op: &OperatorMatrix, delta: bool, block: InteriorBlock) -> f64 {
    if delta {
        (op - &OperatorMatrix::identity(*op.basis())).interior_max_norm(block)
    } else {
        op.interior_max_norm(block)
    }
}

/// Check list of one suite, in report order. `All` concatenates the others.
pub fn checks(suite: Suite, config: &RunConfig) -> Result<Vec<Check>> {
    config.validate()?;
    Ok(match suite {
        Suite::Ccr => ccr_checks(config),
        Suite::Vacuum => vacuum_checks(config),
        Suite::Spectrum => spectrum_checks(config)?,
        Suite::Wavefunctions => wavefunction_checks(config)?,
        Suite::Improper => improper_checks(config),
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::CONCRETE {
                all.extend(checks(s, config)?);
            }
            all
        }
    })
}

/// Runs every check of `suite` (in parallel) and returns the reports in
/// check order.
pub fn run_suite(suite: Suite, config: &RunConfig) -> Result<Vec<CheckReport>> {
    let list = checks(suite, config)?;
    Ok(list.par_iter().map(|c| c.run(config)).collect())
}

fn ccr_checks(cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let mut caps = vec![5, 10, 30, cfg.n_max];
    caps.sort_unstable();
    caps.dedup();
    for n in caps {
        let b = FockBasis::new(n);
        out.push(Check::new(
            id("fockspace.raise_adjoint", &[("n_max", &n)]),
            Criterion::AtMost(0.0),
            move || {
                let worst = Mode::BOTH
                    .iter()
                    .map(|&m| {
                        let up = ladder_matrix(b, m, Ladder::Raise);
                        let down = ladder_matrix(b, m, Ladder::Lower);
                        (&up - &down.adjoint()).max_norm()
                    })
                    .fold(0.0, f64::max);
                Ok(real(worst))
            },
        ));
        out.push(Check::new(
            id("fockspace.ccr", &[("n_max", &n), ("pair", &"lower_raise")]),
            Criterion::Residual(1e-12),
            move || {
                let block = InteriorBlock::new(1);
                let mut worst = 0.0f64;
                for i in Mode::BOTH {
                    for j in Mode::BOTH {
                        let c = commutator(
                            &ladder_matrix(b, i, Ladder::Lower),
                            &ladder_matrix(b, j, Ladder::Raise),
                        )?;
                        worst = worst.max(identity_gap(&c, i == j, block));
                    }
                }
                Ok(real(worst))
            },
        ));
        out.push(Check::new(
            id("fockspace.ccr", &[("n_max", &n), ("pair", &"same_kind")]),
            Criterion::Residual(1e-12),
            move || {
                let mut worst = 0.0f64;
                for kind in [Ladder::Lower, Ladder::Raise] {
                    for i in Mode::BOTH {
                        for j in Mode::BOTH {
                            let c =
                                commutator(&ladder_matrix(b, i, kind), &ladder_matrix(b, j, kind))?;
                            worst = worst.max(c.max_norm());
                        }
                    }
                }
                Ok(real(worst))
            },
        ));
    }
    for (s, t) in [(0.1, 0.1), (0.1, 0.2), (0.2, 0.2)] {
        out.push(Check::new(
            id(
                "fockspace.exp_group_law",
                &[("n_max", &12), ("s", &s), ("t", &t)],
            ),
            Criterion::Residual(1e-9),
            move || {
                let x = build_x(FockBasis::new(12));
                let es = matrix_exp(&(s * &x), BUILD_TOL)?;
                let et = matrix_exp(&(t * &x), BUILD_TOL)?;
                let est = matrix_exp(&((s + t) * &x), BUILD_TOL)?;
                Ok(real(
                    (&(&es * &et) - &est).interior_max_norm(InteriorBlock::new(2)),
                ))
            },
        ));
    }
    out.push(Check::new(
        id("fockspace.ordering", &[("n_max", &"1..=10")]),
        Criterion::AtMost(0.0),
        || {
            let mut bad = 0usize;
            for n in 1..=10 {
                let b = FockBasis::new(n);
                for k in 0..b.dim() {
                    let ok = b.fock_of(k).is_some_and(|idx| {
                        b.index_of(idx) == Some(k) && idx.n1 * (n + 1) + idx.n2 == k
                    });
                    bad += usize::from(!ok);
                }
                bad += usize::from(b.fock_of(b.dim()).is_some());
            }
            Ok(real(bad as f64))
        },
    ));
    let mut angles = vec![0.3, FRAC_PI_4];
    if !angles.contains(&cfg.theta) {
        angles.push(cfg.theta);
    }
    for theta in angles {
        out.push(Check::new(
            id("model.pseudo_ccr", &[("theta", &theta), ("n_max", &12)]),
            Criterion::Residual(1e-9),
            move || {
                let bar = build_barred_linear(FockBasis::new(12), Angle::Real(theta));
                let block = InteriorBlock::new(2);
                let mut worst = 0.0f64;
                for i in Mode::BOTH {
                    for j in Mode::BOTH {
                        let mixed =
                            commutator(bar.get(i, Ladder::Lower), bar.get(j, Ladder::Raise))?;
                        worst = worst.max(identity_gap(&mixed, i == j, block));
                        for kind in [Ladder::Lower, Ladder::Raise] {
                            let same = commutator(bar.get(i, kind), bar.get(j, kind))?;
                            worst = worst.max(same.interior_max_norm(block));
                        }
                    }
                }
                Ok(real(worst))
            },
        ));
    }
    for (theta, criterion) in [
        (0.7, Criterion::Above(0.1)),
        (0.0, Criterion::Residual(1e-12)),
    ] {
        out.push(Check::new(
            id("model.non_unitarity", &[("theta", &theta), ("n_max", &12)]),
            criterion,
            move || {
                let e = matrix_exp(&(theta * &build_x(FockBasis::new(12))), BUILD_TOL)?;
                let gram = &e.adjoint() * &e;
                Ok(real(identity_gap(&gram, true, InteriorBlock::new(2))))
            },
        ));
    }
    out.push(Check::new(
        id(
            "model.dagger_distinction",
            &[("theta", &0.3), ("n_max", &12)],
        ),
        Criterion::Above(0.1),
        || {
            let bar = build_barred_linear(FockBasis::new(12), Angle::Real(0.3));
            let worst = (0..2)
                .map(|i| (&bar.raise[i] - &bar.lower[i].adjoint()).max_norm())
                .fold(0.0, f64::max);
            Ok(real(worst))
        },
    ));
    out.push(Check::new(
        id("model.conjugation", &[("theta", &0.3), ("n_max", &12)]),
        Criterion::Residual(1e-9),
        || {
            let b = FockBasis::new(12);
            let conj = build_barred_conjugated(b, Theta::real(0.3), 1e-11)?;
            let lin = build_barred_linear(b, Angle::Real(0.3));
            let block = InteriorBlock::new(2);
            let worst = conj
                .all()
                .iter()
                .zip(lin.all().iter())
                .map(|(c, l)| (*c - *l).interior_max_norm(block))
                .fold(0.0, f64::max);
            Ok(real(worst))
        },
    ));
    out
}

/// Cap used for vacuum comparisons at `theta`: the configured cap raised to
/// the series headroom inside the convergence disc.
fn vacuum_cap(cfg: &RunConfig, theta: f64) -> usize {
    if theta.tan().abs() < 1.0 {
        cfg.n_max.max(taylor_headroom(theta)).min(MAX_N_MAX)
    } else {
        cfg.n_max
    }
}

fn vacuum_checks(cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let mut thetas = vec![cfg.theta];
    for t in [0.1, 0.3, 0.7 * FRAC_PI_4] {
        if !thetas.contains(&t) {
            thetas.push(t);
        }
    }
    let margin = cfg.margin;
    for &theta in &thetas {
        let n = vacuum_cap(cfg, theta);
        let b = FockBasis::new(n);
        let angle = Angle::Real(theta);
        let pairs = [
            (VacuumMethod::Taylor, VacuumMethod::ClosedForm),
            (VacuumMethod::Taylor, VacuumMethod::Kernel),
            (VacuumMethod::ClosedForm, VacuumMethod::Kernel),
        ];
        for (m1, m2) in pairs {
            let pair = format!("{m1}-{m2}");
            out.push(Check::new(
                id(
                    "states.triple_agreement",
                    &[("theta", &theta), ("n_max", &n), ("pair", &pair)],
                ),
                Criterion::Residual(1e-9),
                move || {
                    let v1 = bogoliubov_vacuum(b, angle, m1, BUILD_TOL)?;
                    let v2 = bogoliubov_vacuum(b, angle, m2, BUILD_TOL)?;
                    Ok(real(v1.sub(&v2)?.max_abs()))
                },
            ));
        }
        for method in VacuumMethod::ALL {
            out.push(Check::new(
                id(
                    "states.annihilation",
                    &[
                        ("theta", &theta),
                        ("method", &method),
                        ("n_max", &n),
                        ("margin", &margin),
                    ],
                ),
                Criterion::Residual(1e-9),
                move || {
                    let v = bogoliubov_vacuum(b, angle, method, BUILD_TOL)?;
                    Ok(real(annihilation_residual(&v, angle, margin)?))
                },
            ));
        }
    }
    let b = FockBasis::new(cfg.n_max);
    for branch in SignBranch::BOTH {
        let angle = Angle::Branch(branch);
        out.push(Check::new(
            id(
                "states.annihilation",
                &[
                    ("theta", &branch),
                    ("method", &VacuumMethod::Kernel),
                    ("n_max", &cfg.n_max),
                    ("margin", &margin),
                ],
            ),
            Criterion::Residual(1e-9),
            move || {
                let v = bogoliubov_vacuum(b, angle, VacuumMethod::Kernel, BUILD_TOL)?;
                Ok(real(annihilation_residual(&v, angle, margin)?))
            },
        ));
        out.push(Check::new(
            id(
                "states.branch_pair_amplitudes",
                &[
                    ("branch", &branch),
                    ("n_max", &cfg.n_max),
                    ("margin", &margin),
                ],
            ),
            Criterion::Residual(1e-9),
            move || {
                let v = bogoliubov_vacuum(b, angle, VacuumMethod::Kernel, BUILD_TOL)?;
                let top = b.n_max() - margin;
                let worst = (0..=top)
                    .map(|k| {
                        let want =
                            std::f64::consts::SQRT_2 * if k % 2 == 1 { branch.sign() } else { 1.0 };
                        (v.amplitude(FockIndex::new(k, k)) - want).norm()
                    })
                    .fold(0.0, f64::max);
                Ok(real(worst))
            },
        ));
    }
    let mut bio = vec![(0.3, 24)];
    if cfg.theta.tan().abs() < 1.0 && (cfg.theta, cfg.n_max) != (0.3, 24) {
        bio.push((cfg.theta, cfg.n_max));
    }
    for (theta, n) in bio {
        out.push(Check::new(
            id(
                "states.biorthonormality",
                &[("theta", &theta), ("n_max", &n), ("labels", &"n1,n2<=3")],
            ),
            Criterion::Residual(1e-8),
            move || {
                let b = FockBasis::new(n);
                let labels: Vec<(usize, usize)> =
                    (0..=3).flat_map(|a| (0..=3).map(move |c| (a, c))).collect();
                let states = labels
                    .iter()
                    .map(|&(a, c)| {
                        barred_fock_state(
                            b,
                            a,
                            c,
                            Angle::Real(theta),
                            VacuumMethod::ClosedForm,
                            BUILD_TOL,
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut worst = 0.0f64;
                for (r, s) in states.iter().enumerate() {
                    for (c, t) in states.iter().enumerate() {
                        let want = if r == c { 1.0 } else { 0.0 };
                        worst = worst.max((proper_inner(&s.dual_bra, &t.ket)? - want).norm());
                    }
                }
                Ok(real(worst))
            },
        ));
    }
    let branch = cfg.branch;
    let mut caps = vec![cfg.n_max, (2 * cfg.n_max).min(MAX_N_MAX)];
    caps.dedup();
    for n in caps {
        let want = 2.0 * (n + 1) as f64;
        out.push(Check::new(
            id("states.naive_norm", &[("branch", &branch), ("n_max", &n)]),
            Criterion::Relative {
                target: want,
                rel: 1e-12,
            },
            move || {
                let v = bogoliubov_vacuum(
                    FockBasis::new(n),
                    Angle::Branch(branch),
                    VacuumMethod::ClosedForm,
                    BUILD_TOL,
                )?;
                Ok(real(naive_inner(&v, &v)?.re))
            },
        ));
    }
    out.push(Check::new(
        id(
            "states.pairing_tail",
            &[("branch", &branch), ("n_max", &cfg.n_max)],
        ),
        Criterion::Above(PAIRING_TAIL_TOL),
        move || {
            let s = barred_fock_state(
                b,
                0,
                0,
                Angle::Branch(branch),
                VacuumMethod::ClosedForm,
                BUILD_TOL,
            )?;
            match proper_inner(&s.dual_bra, &s.ket) {
                Err(Error::NonConvergent { tail }) => Ok(real(tail)),
                Err(e) => Err(e),
                Ok(_) => Ok(real(0.0)),
            }
        },
    ));
    out
}

fn spectrum_checks(cfg: &RunConfig) -> Result<Vec<Check>> {
    let p = cfg.params()?;
    let mut out = Vec::new();
    for branch in SignBranch::BOTH {
        out.push(Check::new(
            id(
                "model.hamiltonian_identity",
                &[("branch", &branch), ("n_max", &12), ("margin", &2)],
            ),
            Criterion::Residual(1e-10),
            move || {
                let b = FockBasis::new(12);
                let diff = &build_h_original(b, &p) - &build_h_barred(b, &p, branch);
                Ok(real(diff.interior_max_norm(InteriorBlock::new(2))))
            },
        ));
    }
    let n = cfg.n_max;
    let margin = cfg.margin + 2;
    for branch in SignBranch::BOTH {
        for n1 in 0..=3 {
            for n2 in 0..=3 {
                out.push(Check::new(
                    id(
                        "states.eigenvector",
                        &[
                            ("branch", &branch),
                            ("n1", &n1),
                            ("n2", &n2),
                            ("n_max", &n),
                            ("margin", &margin),
                        ],
                    ),
                    Criterion::Residual(1e-8),
                    move || {
                        let b = FockBasis::new(n);
                        let s = barred_fock_state(
                            b,
                            n1,
                            n2,
                            Angle::Branch(branch),
                            VacuumMethod::Kernel,
                            BUILD_TOL,
                        )?;
                        let h = build_h_original(b, &p);
                        Ok(real(eigen_residual(
                            &h,
                            &s,
                            eigenvalue_ft(n1, n2, &p, branch),
                            margin,
                        )?))
                    },
                ));
            }
        }
    }
    for (form, f) in [
        (
            "ft",
            eigenvalue_ft as fn(usize, usize, &PhysParams, SignBranch) -> _,
        ),
        ("is", eigenvalue_is),
    ] {
        out.push(Check::new(
            id(
                "states.branch_conjugation",
                &[("form", &form), ("labels", &"n1,n2<=8")],
            ),
            Criterion::AtMost(0.0),
            move || {
                let mut worst = 0.0f64;
                for n1 in 0..=8 {
                    for n2 in 0..=8 {
                        let plus = f(n1, n2, &p, SignBranch::Plus);
                        let minus = f(n1, n2, &p, SignBranch::Minus);
                        worst = worst.max((minus.0 - plus.conj().0).norm());
                    }
                }
                Ok(real(worst))
            },
        ));
    }
    let unit = PhysParams::default();
    out.push(Check::new(
        id(
            "states.reference_eigenvalue",
            &[("form", &"ft"), ("n1", &2), ("n2", &1), ("branch", &"plus")],
        ),
        Criterion::Near {
            target: C64::new(1.0, 0.4),
            tol: 0.0,
        },
        move || Ok(eigenvalue_ft(2, 1, &unit, SignBranch::Plus).0),
    ));
    out.push(Check::new(
        id(
            "states.reference_eigenvalue",
            &[("form", &"is"), ("n1", &1), ("n2", &0), ("branch", &"plus")],
        ),
        Criterion::Near {
            target: C64::new(2.0, 0.1),
            tol: 0.0,
        },
        move || Ok(eigenvalue_is(1, 0, &unit, SignBranch::Plus).0),
    ));
    Ok(out)
}

fn half_gamma(j: usize) -> f64 {
    (0..j).fold(PI.sqrt(), |g, i| g * (i as f64 + 0.5))
}

fn wavefunction_checks(cfg: &RunConfig) -> Result<Vec<Check>> {
    let p = cfg.params()?;
    let nodes = cfg.quad_nodes;
    let mut out = Vec::new();
    for k in [8usize, 16, 32, 64] {
        out.push(Check::new(
            id(
                "position.quadrature_exactness",
                &[("k", &k), ("degree", &(2 * k - 2))],
            ),
            Criterion::Relative {
                target: half_gamma(k - 1),
                rel: 1e-12,
            },
            move || {
                let rule = gauss_hermite_rule(k)?;
                Ok(real(rule.integrate(|x| x.powi(2 * k as i32 - 2))))
            },
        ));
    }
    out.push(Check::new(
        id(
            "position.orthonormality",
            &[("labels", &"n1,n2<=8"), ("nodes", &nodes)],
        ),
        Criterion::Residual(1e-10),
        move || {
            let rule = gauss_hermite_rule(nodes)?;
            let specs: Vec<WavefunctionSpec> = (0..=8)
                .flat_map(|a| (0..=8).map(move |c| WavefunctionSpec::new(a, c, p)))
                .collect();
            let g = l2_gram(&specs, &rule)?;
            let worst = g
                .indexed_iter()
                .map(|((r, c), z)| (z - if r == c { 1.0 } else { 0.0 }).norm())
                .fold(0.0, f64::max);
            Ok(real(worst))
        },
    ));
    let grid = square_grid(-3.0, 3.0, 0.5);
    for n1 in 0..=5 {
        for n2 in 0..=5 {
            let spec = WavefunctionSpec::new(n1, n2, p);
            out.push(Check::new(
                id("position.ladder_consistency", &[("n1", &n1), ("n2", &n2)]),
                Criterion::Residual(1e-12),
                move || {
                    let mut worst = 0.0f64;
                    for mode in Mode::BOTH {
                        let up = apply_ladder_diff(DiffOpRep::Barred, mode, Ladder::Raise, &spec);
                        let back =
                            crate::position::ladder_op(DiffOpRep::Barred, mode, Ladder::Lower)
                                .apply(&up);
                        let level = match mode {
                            Mode::One => n1,
                            Mode::Two => n2,
                        };
                        let want = HermiteExpansion::single(&spec).scale(real((level + 1) as f64));
                        worst = worst.max(back.sub(&want).coeff_norm());
                    }
                    Ok(real(worst))
                },
            ));
            let grid = grid.clone();
            out.push(Check::new(
                id(
                    "position.ladder_fd",
                    &[
                        ("n1", &n1),
                        ("n2", &n2),
                        ("h", &1e-2),
                        ("grid", &"[-3,3]^2/0.5"),
                    ],
                ),
                Criterion::AtMost(1e-7),
                move || {
                    let mut worst = 0.0f64;
                    for mode in Mode::BOTH {
                        for kind in [Ladder::Lower, Ladder::Raise] {
                            worst = worst.max(ladder_fd_residual(&spec, mode, kind, &grid, 1e-2));
                        }
                    }
                    Ok(real(worst))
                },
            ));
        }
    }
    for branch in SignBranch::BOTH {
        for n1 in 0..=4 {
            for n2 in 0..=4 {
                out.push(Check::new(
                    id(
                        "position.eigenfunction",
                        &[
                            ("branch", &branch),
                            ("n1", &n1),
                            ("n2", &n2),
                            ("nodes", &nodes),
                        ],
                    ),
                    Criterion::Residual(1e-10),
                    move || {
                        let rule = gauss_hermite_rule(nodes)?;
                        let spec = WavefunctionSpec::new(n1, n2, p);
                        Ok(real(hamiltonian_diff_residual(&spec, &p, branch, &rule)?))
                    },
                ));
            }
        }
    }
    let pde_grid = square_grid(-3.0, 3.0, 0.25);
    let stiff = PhysParams::new(4.0, 1.0, cfg.gamma, 1.0)?;
    for (label, params) in [("config", p), ("m_omega_over_hbar=4", stiff)] {
        let g = pde_grid.clone();
        out.push(Check::new(
            id("position.vacuum_pde", &[("params", &label)]),
            Criterion::Residual(1e-12),
            move || Ok(real(vacuum_pde_residual(&params, &g))),
        ));
    }
    out.push(Check::new(
        id(
            "position.vacuum_pde_fd",
            &[("params", &"config"), ("h", &1e-2)],
        ),
        Criterion::AtMost(1e-7),
        move || Ok(real(vacuum_pde_residual_fd(&p, &pde_grid, 1e-2))),
    ));
    out.push(Check::new(
        id(
            "position.reference_value",
            &[("n1", &0), ("n2", &0), ("x", &"(0,0)")],
        ),
        Criterion::Relative {
            target: PI.powf(-0.5),
            rel: 1e-14,
        },
        || {
            let spec = WavefunctionSpec::new(0, 0, PhysParams::default());
            Ok(real(eigenfunction(&spec, 0.0, 0.0)))
        },
    ));
    Ok(out)
}

const SIGMAS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

fn improper_checks(cfg: &RunConfig) -> Vec<Check> {
    let branch = cfg.branch;
    let nodes = cfg.quad_nodes;
    let mut out = Vec::new();
    for (k, test) in TestFunction::default_family().into_iter().enumerate() {
        out.push(Check::new(
            id(
                "position.weak_limit",
                &[("branch", &branch), ("test", &k), ("nodes", &nodes)],
            ),
            Criterion::Below(1.0),
            move || {
                let rule = gauss_hermite_rule(nodes)?;
                let w = SIGMAS
                    .iter()
                    .map(|&s| {
                        Ok(
                            mollified_weak_residual(&Mollifier::new(s, branch)?, &test, &rule)
                                .0
                                .abs(),
                        )
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Ok(real(w.windows(2).map(|p| p[1] / p[0]).fold(0.0, f64::max)))
            },
        ));
        out.push(Check::new(
            id(
                "position.weak_divergence_free",
                &[("branch", &branch), ("test", &k), ("nodes", &nodes)],
            ),
            Criterion::Residual(1e-12),
            move || {
                let rule = gauss_hermite_rule(nodes)?;
                let mut worst = 0.0f64;
                for s in SIGMAS {
                    let (_, b) = mollified_weak_residual(&Mollifier::new(s, branch)?, &test, &rule);
                    worst = worst.max(b.abs());
                }
                Ok(real(worst))
            },
        ));
    }
    let coord_moment = move |sigma: f64| -> Result<f64> {
        let rule = gauss_hermite_rule(nodes)?;
        Ok(mollified_weak_residual(&Mollifier::new(sigma, branch)?, &TestFunction::x1(), &rule).0)
    };
    out.push(Check::new(
        id(
            "position.weak_reference",
            &[("branch", &branch), ("test", &"x1"), ("sigma", &0.1)],
        ),
        Criterion::Relative {
            target: 0.008862,
            rel: 0.1,
        },
        move || Ok(real(coord_moment(0.1)?)),
    ));
    out.push(Check::new(
        id(
            "position.weak_ratio",
            &[("branch", &branch), ("test", &"x1"), ("sigma", &"0.1/0.05")],
        ),
        Criterion::Relative {
            target: 4.0,
            rel: 0.1,
        },
        move || Ok(real(coord_moment(0.1)? / coord_moment(0.05)?)),
    ));
    let sign = branch.sign();
    let angle = Angle::Branch(branch);
    out.push(Check::new(
        id(
            "position.representation_contrast",
            &[("branch", &branch), ("kind", &"diagonal_growth")],
        ),
        Criterion::Above(0.0),
        move || {
            let sums: Vec<f64> = [5, 10, 20, 40]
                .iter()
                .map(|&n| improper_partial_sum(n, angle, 0.5, sign * 0.5))
                .collect();
            Ok(real(
                sums.windows(2)
                    .map(|p| p[1] - p[0])
                    .fold(f64::INFINITY, f64::min),
            ))
        },
    ));
    out.push(Check::new(
        id(
            "position.representation_contrast",
            &[("branch", &branch), ("kind", &"off_diagonal")],
        ),
        Criterion::AtMost(OFF_DIAGONAL_BOUND),
        move || {
            let worst = (1..=100)
                .map(|n| improper_partial_sum(n, angle, 1.5, -sign * 1.5).abs())
                .fold(0.0, f64::max);
            Ok(real(worst))
        },
    ));
    let p = PhysParams::default();
    out.push(Check::new(
        id(
            "position.representation_contrast",
            &[("kind", &"gram_bounded"), ("nodes", &nodes)],
        ),
        Criterion::AtMost(1.0 + 1e-9),
        move || {
            let rule = gauss_hermite_rule(nodes)?;
            let specs: Vec<WavefunctionSpec> = (0..=8)
                .flat_map(|a| (0..=8).map(move |c| WavefunctionSpec::new(a, c, p)))
                .collect();
            Ok(real(
                l2_gram(&specs, &rule)?
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max),
            ))
        },
    ));
    out.push(Check::new(
        id(
            "position.partial_sum_convergence",
            &[("theta", &0.3), ("terms", &"60/80")],
        ),
        Criterion::Residual(1e-10),
        || {
            let t = Angle::Real(0.3);
            Ok(real(
                improper_partial_sum(60, t, 0.5, 0.5) - improper_partial_sum(80, t, 0.5, 0.5),
            ))
        },
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn defaults() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn every_check_is_covered_by_its_suite() {
        for suite in Suite::CONCRETE {
            for c in checks(suite, &defaults()).unwrap() {
                let name = c.id.split('[').next().unwrap();
                let owner = INVARIANT_COVERAGE.iter().find(|(n, _)| *n == name);
                assert_eq!(owner.map(|o| o.1), Some(suite), "{}", c.id);
            }
        }
    }

    #[test]
    fn every_invariant_is_reached_exactly_once() {
        let mut seen = BTreeSet::new();
        for suite in Suite::CONCRETE {
            let names: BTreeSet<String> = checks(suite, &defaults())
                .unwrap()
                .iter()
                .map(|c| c.id.split('[').next().unwrap().to_string())
                .collect();
            for n in names {
                assert!(seen.insert(n.clone()), "{n} in two suites");
            }
        }
        let table: BTreeSet<String> = INVARIANT_COVERAGE
            .iter()
            .map(|(n, _)| n.to_string())
            .collect();
        assert_eq!(seen, table);
    }

    #[test]
    fn ids_are_unique() {
        let all = checks(Suite::All, &defaults()).unwrap();
        let ids: BTreeSet<&str> = all.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids.len(), all.len());
    }

    #[test]
    fn spectrum_has_32_eigen_residuals() {
        let n = checks(Suite::Spectrum, &defaults())
            .unwrap()
            .iter()
            .filter(|c| c.id.starts_with("states.eigenvector["))
            .count();
        assert_eq!(n, 32);
    }

    #[test]
    fn invalid_config_is_rejected_before_running() {
        let cfg = RunConfig {
            n_max: 1,
            ..defaults()
        };
        assert!(matches!(
            run_suite(Suite::Ccr, &cfg),
            Err(Error::InvalidParam { .. })
        ));
    }

    #[test]
    fn errors_become_failed_reports() {
        let c = Check::new("x.y[]".into(), Criterion::AtMost(1.0), || {
            Err(Error::Capacity {
                n_max: 3,
                needed: 9,
            })
        });
        let r = c.run(&defaults());
        assert!(!r.pass);
        assert!(r.measured.re.is_none());
        assert!(r.error.unwrap().contains('9'));
    }

    #[test]
    fn out_of_disc_angle_fails_series_methods_only() {
        let cfg = RunConfig {
            theta: 1.0,
            ..defaults()
        };
        let reports = run_suite(Suite::Vacuum, &cfg).unwrap();
        let at = |m: &str| {
            reports
                .iter()
                .find(|r| {
                    r.check_id
                        .starts_with(&format!("states.annihilation[theta=1;method={m}"))
                })
                .unwrap()
                .clone()
        };
        for m in ["taylor", "closed_form"] {
            let r = at(m);
            assert!(!r.pass);
            assert!(r.error.unwrap().contains("domain"), "{m}");
        }
        assert!(at("kernel").error.is_none());
    }

    #[test]
    fn spectrum_passes_at_defaults() {
        let reports = run_suite(Suite::Spectrum, &defaults()).unwrap();
        let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }
}
