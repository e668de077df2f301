#![no_main]

use bateman::cli::Cli;
use clap::Parser;
use libfuzzer_sys::fuzz_target;

// Arguments are NUL-separated. Only parsing and layering run; `--config`
// is dropped so no file is read.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let args = std::iter::once("bateman").chain(text.split('\0'));
    if let Ok(mut cli) = Cli::try_parse_from(args) {
        cli.config = None;
        let _ = cli.resolve();
    }
});
