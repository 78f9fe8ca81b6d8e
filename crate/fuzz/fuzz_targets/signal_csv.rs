#![no_main]

use libfuzzer_sys::fuzz_target;
use modspace::io::{parse_sidecar, parse_signal_csv};

// First line is the sidecar JSON, the rest is the CSV body.
fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Some((head, body)) = s.split_once('\n') {
            if let Ok(sidecar) = parse_sidecar(head) {
                let _ = parse_signal_csv(body, &sidecar);
            }
        }
    }
});
