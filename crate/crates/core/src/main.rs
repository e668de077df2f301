use std::process::ExitCode;

use bateman::cli::{emit, exit_code, parse_invocation, run_suite};

fn main() -> ExitCode {
    let invocation = match parse_invocation(std::env::args_os()) {
        Ok(Ok(inv)) => inv,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let reports = match run_suite(invocation.suite, &invocation.config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    for r in &reports {
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        match &r.error {
            Some(err) => println!("{verdict} {} ({err})", r.check_id),
            None => println!("{verdict} {}", r.check_id),
        }
    }
    let files = match emit(&reports, &invocation.config) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let failed = reports.iter().filter(|r| !r.pass).count();
    println!("{} checks, {failed} failed", reports.len());
    for f in files {
        println!("wrote {}", f.display());
    }
    ExitCode::from(exit_code(&reports) as u8)
}
