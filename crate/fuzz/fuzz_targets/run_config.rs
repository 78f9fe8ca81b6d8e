#![no_main]

use libfuzzer_sys::fuzz_target;
use modspace_cli::RunConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(c) = RunConfig::from_json(s) {
            let _ = RunConfig::from_json(&c.to_json());
        }
    }
});
