//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on any failure.

use std::f64::consts::FRAC_PI_4;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use bateman::fockspace::{
    commutator, ladder_matrix, naive_inner, FockBasis, FockIndex, InteriorBlock, Ladder, Mode,
    OperatorMatrix,
};
use bateman::model::{
    build_barred_linear, build_h_barred, build_h_original, Angle, PhysParams, SignBranch,
};
use bateman::position::{
    gauss_hermite_rule, hamiltonian_diff_residual, improper_partial_sum, l2_gram,
    mollified_weak_residual, Mollifier, TestFunction, WavefunctionSpec,
};
use bateman::states::{
    annihilation_residual, barred_fock_state, bogoliubov_vacuum, eigen_residual, eigenvalue_ft,
    eigenvalue_is, VacuumMethod,
};
use bateman::{Result, C64};

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn gap(op: &OperatorMatrix, delta: bool, block: InteriorBlock) -> f64 {
    if delta {
        (op - &OperatorMatrix::identity(*op.basis())).interior_max_norm(block)
    } else {
        op.interior_max_norm(block)
    }
}

fn ccr() -> Outcome {
    let b = FockBasis::new(30);
    let mut mixed = 0.0f64;
    let mut other = 0.0f64;
    for i in Mode::BOTH {
        for j in Mode::BOTH {
            let lower = ladder_matrix(b, i, Ladder::Lower);
            let raise = ladder_matrix(b, j, Ladder::Raise);
            mixed = mixed.max(gap(
                &commutator(&lower, &raise)?,
                i == j,
                InteriorBlock::new(1),
            ));
            for kind in [Ladder::Lower, Ladder::Raise] {
                let c = commutator(&ladder_matrix(b, i, kind), &ladder_matrix(b, j, kind))?;
                other = other.max(c.max_norm());
            }
        }
    }
    Ok((
        mixed <= 1e-12 && other <= 1e-12,
        format!("[a_i,a_j^dag]-delta {mixed:.1e}, others {other:.1e} (tol 1e-12)"),
    ))
}

fn pseudo_ccr() -> Outcome {
    let block = InteriorBlock::new(2);
    let mut worst = 0.0f64;
    for theta in [0.3, FRAC_PI_4] {
        let bar = build_barred_linear(FockBasis::new(12), Angle::Real(theta));
        for i in Mode::BOTH {
            for j in Mode::BOTH {
                let c = commutator(bar.get(i, Ladder::Lower), bar.get(j, Ladder::Raise))?;
                worst = worst.max(gap(&c, i == j, block));
                for kind in [Ladder::Lower, Ladder::Raise] {
                    worst = worst.max(
                        commutator(bar.get(i, kind), bar.get(j, kind))?.interior_max_norm(block),
                    );
                }
            }
        }
    }
    Ok((
        worst <= 1e-9,
        format!("max deviation {worst:.1e} (tol 1e-9)"),
    ))
}

fn hamiltonian_identity() -> Outcome {
    let b = FockBasis::new(12);
    let p = PhysParams::new(1.0, 1.0, 0.2, 1.0)?;
    let worst = SignBranch::BOTH
        .iter()
        .map(|&s| {
            (&build_h_original(b, &p) - &build_h_barred(b, &p, s))
                .interior_max_norm(InteriorBlock::new(2))
        })
        .fold(0.0, f64::max);
    Ok((
        worst <= 1e-10,
        format!("max entry gap {worst:.1e} (tol 1e-10)"),
    ))
}

fn vacuum() -> Outcome {
    let b = FockBasis::new(20);
    let angle = Angle::Real(0.3);
    let v: Vec<_> = VacuumMethod::ALL
        .iter()
        .map(|&m| bogoliubov_vacuum(b, angle, m, 1e-14))
        .collect::<Result<_>>()?;
    let mut pair = 0.0f64;
    for i in 0..3 {
        for j in i + 1..3 {
            pair = pair.max(v[i].sub(&v[j])?.max_abs());
        }
    }
    let plus = Angle::Branch(SignBranch::Plus);
    let k = bogoliubov_vacuum(b, plus, VacuumMethod::Kernel, 1e-14)?;
    let flat = (0..=18)
        .map(|n| (k.amplitude(FockIndex::new(n, n)) - std::f64::consts::SQRT_2).norm())
        .fold(0.0, f64::max);
    let ann = annihilation_residual(&k, plus, 2)?;
    Ok((
        pair <= 1e-9 && flat <= 1e-9 && ann <= 1e-9,
        format!("pairwise {pair:.1e}, branch pair-amplitude spread {flat:.1e}, annihilation {ann:.1e} (tol 1e-9)"),
    ))
}

fn spectrum() -> Outcome {
    let b = FockBasis::new(24);
    let p = PhysParams::new(1.0, 1.0, 0.2, 1.0)?;
    let h = build_h_original(b, &p);
    let mut worst = 0.0f64;
    for branch in SignBranch::BOTH {
        for n1 in 0..=3 {
            for n2 in 0..=3 {
                let s = barred_fock_state(
                    b,
                    n1,
                    n2,
                    Angle::Branch(branch),
                    VacuumMethod::Kernel,
                    1e-14,
                )?;
                worst = worst.max(eigen_residual(
                    &h,
                    &s,
                    eigenvalue_ft(n1, n2, &p, branch),
                    4,
                )?);
            }
        }
    }
    let mut conj_exact = true;
    for n1 in 0..=3 {
        for n2 in 0..=3 {
            conj_exact &= eigenvalue_ft(n1, n2, &p, SignBranch::Minus)
                == eigenvalue_ft(n1, n2, &p, SignBranch::Plus).conj();
            conj_exact &= eigenvalue_is(n1, n2, &p, SignBranch::Minus)
                == eigenvalue_is(n1, n2, &p, SignBranch::Plus).conj();
        }
    }
    Ok((
        worst <= 1e-8 && conj_exact,
        format!(
            "max eigen residual {worst:.1e} (tol 1e-8), branch conjugation exact: {conj_exact}"
        ),
    ))
}

fn square_integrable() -> Result<(bool, f64, f64)> {
    let p = PhysParams::new(1.0, 1.0, 0.2, 1.0)?;
    let rule = gauss_hermite_rule(64)?;
    let specs: Vec<_> = (0..=8)
        .flat_map(|a| (0..=8).map(move |c| WavefunctionSpec::new(a, c, p)))
        .collect();
    let g = l2_gram(&specs, &rule)?;
    let gram = g
        .indexed_iter()
        .map(|((r, c), z)| (z - if r == c { 1.0 } else { 0.0 }).norm())
        .fold(0.0, f64::max);
    let mut resid = 0.0f64;
    for branch in SignBranch::BOTH {
        for n1 in 0..=4 {
            for n2 in 0..=4 {
                resid = resid.max(hamiltonian_diff_residual(
                    &WavefunctionSpec::new(n1, n2, p),
                    &p,
                    branch,
                    &rule,
                )?);
            }
        }
    }
    Ok((gram <= 1e-10 && resid <= 1e-10, gram, resid))
}

fn eigenfunctions() -> Outcome {
    let (ok, gram, resid) = square_integrable()?;
    Ok((
        ok,
        format!("gram deviation {gram:.1e}, eigen residual {resid:.1e} (tol 1e-10)"),
    ))
}

fn improper_contrast() -> Outcome {
    let plus = Angle::Branch(SignBranch::Plus);
    let sums: Vec<f64> = [5, 10, 20, 40]
        .iter()
        .map(|&n| improper_partial_sum(n, plus, 0.0, 0.0))
        .collect();
    let grows = sums.windows(2).all(|w| w[1] > w[0]);
    let mut norm_ok = true;
    let mut worst = 0.0f64;
    for n in [9, 20, 40] {
        let v = bogoliubov_vacuum(FockBasis::new(n), plus, VacuumMethod::ClosedForm, 1e-14)?;
        let want = 2.0 * (n + 1) as f64;
        let rel = (naive_inner(&v, &v)?.re - want).abs() / want;
        worst = worst.max(rel);
        norm_ok &= rel <= 1e-12;
    }
    let (l2_ok, ..) = square_integrable()?;
    Ok((
        grows && norm_ok && l2_ok,
        format!("diagonal sums {sums:.3?}, naive norm rel err {worst:.1e}, square-integrable side holds: {l2_ok}"),
    ))
}

fn mollified() -> Outcome {
    let rule = gauss_hermite_rule(64)?;
    let mut deriv_moment = 0.0f64;
    for branch in SignBranch::BOTH {
        for sigma in [0.2, 0.1, 0.05, 0.025] {
            let m = Mollifier::new(sigma, branch)?;
            for t in TestFunction::default_family() {
                deriv_moment = deriv_moment.max(mollified_weak_residual(&m, &t, &rule).1.abs());
            }
        }
    }
    let w = |s: f64| -> Result<f64> {
        Ok(mollified_weak_residual(
            &Mollifier::new(s, SignBranch::Plus)?,
            &TestFunction::x1(),
            &rule,
        )
        .0)
    };
    let (a, half) = (w(0.1)?, w(0.05)?);
    let ratio = a / half;
    let ok = deriv_moment <= 1e-12
        && (a - 0.008862).abs() <= 0.1 * 0.008862
        && (ratio - 4.0).abs() <= 0.4;
    Ok((
        ok,
        format!("deriv_moment {deriv_moment:.1e}, coord_moment(0.1) {a:.6}, ratio {ratio:.3}"),
    ))
}

fn eigenvalues() -> Outcome {
    let p = PhysParams::new(1.0, 1.0, 0.2, 1.0)?;
    let ft = eigenvalue_ft(2, 1, &p, SignBranch::Plus).0;
    let is = eigenvalue_is(1, 0, &p, SignBranch::Plus).0;
    Ok((
        ft == C64::new(1.0, 0.4) && is == C64::new(2.0, 0.1),
        format!("ft(2,1,plus) = {ft}, is(1,0,plus) = {is}"),
    ))
}

fn run_cli(args: &[&str], out: &Path) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_bateman"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("spawn the binary")
        .status
        .code()
        .unwrap_or(-1)
}

fn json_schema_ok(path: &Path) -> bool {
    let Ok(text) = std::fs::read_to_string(path) else {
        return false;
    };
    let Ok(serde_json::Value::Array(items)) = serde_json::from_str(&text) else {
        return false;
    };
    let keys = [
        "check_id",
        "params",
        "measured",
        "tolerance",
        "pass",
        "elapsed",
        "error",
    ];
    // Key order, read off the text: top-level keys sit at four spaces of
    // indentation and each object starts at "check_id".
    let ordered = text.split("\"check_id\"").skip(1).all(|chunk| {
        let pos: Vec<Option<usize>> = keys[1..]
            .iter()
            .map(|k| chunk.find(&format!("\n    \"{k}\"")))
            .collect();
        pos.iter().all(Option::is_some) && pos.windows(2).all(|w| w[0] < w[1])
    });
    ordered
        && !items.is_empty()
        && items.iter().all(|it| {
            let Some(obj) = it.as_object() else {
                return false;
            };
            obj.len() == keys.len()
                && keys.iter().all(|k| obj.contains_key(*k))
                && obj["check_id"].is_string()
                && obj["params"].is_object()
                && obj["measured"]["re"].is_number() | obj["measured"]["re"].is_null()
                && obj["tolerance"].is_number()
                && obj["pass"].is_boolean()
                && obj["elapsed"].is_number()
        })
}

fn csv_schema_ok(path: &Path) -> bool {
    let Ok(mut reader) = csv::Reader::from_path(path) else {
        return false;
    };
    let header_ok = reader.headers().is_ok_and(|h| {
        h.iter().eq([
            "check_id",
            "measured_re",
            "measured_im",
            "tolerance",
            "pass",
            "elapsed",
        ])
    });
    let mut rows = 0;
    for rec in reader.records() {
        let Ok(rec) = rec else { return false };
        let num = |i: usize| rec[i].is_empty() || rec[i].parse::<f64>().is_ok();
        if rec.len() != 6 || !num(1) || !num(2) || rec[3].parse::<f64>().is_err() {
            return false;
        }
        if !matches!(&rec[4], "true" | "false") || rec[5].parse::<f64>().is_err() {
            return false;
        }
        rows += 1;
    }
    header_ok && rows > 0
}

fn cli() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let good = dir.path().join("defaults");
    let strict = dir.path().join("strict");
    let clean = run_cli(&["all"], &good);
    let corrupted = run_cli(&["all", "--tol", "1e-16", "--format", "csv"], &strict);
    let unknown = run_cli(&["sideways"], &dir.path().join("unused"));
    let json = json_schema_ok(&good.join("report.json"));
    let csv = csv_schema_ok(&strict.join("report.csv"));
    Ok((
        clean == 0 && corrupted == 1 && unknown == 2 && json && csv,
        format!("exit codes {clean}/{corrupted}/{unknown} (want 0/1/2), json schema {json}, csv schema {csv}"),
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 canonical commutators", ccr),
        ("2 barred commutators", pseudo_ccr),
        ("3 hamiltonian identity", hamiltonian_identity),
        ("4 vacuum agreement", vacuum),
        ("5 spectrum", spectrum),
        ("6 square-integrable eigenfunctions", eigenfunctions),
        ("7 improper pairing contrast", improper_contrast),
        ("8 mollified distribution", mollified),
        ("9 eigenvalue formulas", eigenvalues),
        ("10 cli end-to-end", cli),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let (ok, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {name}: {detail} [{:.2}s]",
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 10 passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
