#![no_main]

use libfuzzer_sys::fuzz_target;
use modspace::measures::DiscreteMeasure;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(m) = DiscreteMeasure::from_json(s) {
            let back = DiscreteMeasure::from_json(&m.to_json()).expect("re-parse");
            assert_eq!(back, m);
        }
    }
});
