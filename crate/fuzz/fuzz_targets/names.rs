#![no_main]

use bateman::cli::{OutputFormat, Suite};
use bateman::model::SignBranch;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(v) = s.parse::<Suite>() {
        assert_eq!(v.name().parse::<Suite>(), Ok(v));
    }
    if let Ok(v) = s.parse::<OutputFormat>() {
        assert_eq!(v.name().parse::<OutputFormat>(), Ok(v));
    }
    if let Ok(v) = s.parse::<SignBranch>() {
        assert_eq!(v.name().parse::<SignBranch>(), Ok(v));
    }
});
