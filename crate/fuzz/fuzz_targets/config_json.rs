#![no_main]

use fracdec::field::parse_field_spec;
use fracdec_harness::{ExperimentConfig, Instance};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(config) = ExperimentConfig::from_json(text) else { return };
    // keep table construction cheap
    let Ok((p, e)) = parse_field_spec(&config.field) else { return };
    if config.l == 0 || config.l > 4 || (p as u64).saturating_pow(e * config.l) > 1 << 14 {
        return;
    }
    if let Ok(instance) = Instance::from_config(config) {
        let spec = &instance.spec;
        assert!(spec.k() <= spec.n());
        assert!(spec.m() <= spec.l());
    }
});
