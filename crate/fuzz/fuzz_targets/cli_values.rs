#![no_main]

use libfuzzer_sys::fuzz_target;
use modspace::experiments::Experiment;
use modspace::norms::NormSpec;
use modspace::wiener_levy::AnalyticFunction;
use modspace::Exponent;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = s.parse::<Exponent>();
        let _ = AnalyticFunction::parse(s);
        let _ = Experiment::parse(s);
        let _ = serde_json::from_str::<NormSpec>(s);
    }
});
