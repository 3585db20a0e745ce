#![no_main]

use std::sync::OnceLock;

use fracdec::presets::{hermitian_f64, hermitian_f81};
use fracdec::{collab_decode, CollabConfig, FractionalSpec, ProjectedMatrix};
use libfuzzer_sys::fuzz_target;

fn specs() -> &'static [FractionalSpec; 2] {
    static SPECS: OnceLock<[FractionalSpec; 2]> = OnceLock::new();
    SPECS.get_or_init(|| [hermitian_f64(), hermitian_f81()])
}

fuzz_target!(|data: &[u8]| {
    let Some((&selector, rest)) = data.split_first() else { return };
    let Ok(pi) = serde_json::from_slice::<ProjectedMatrix>(rest) else { return };
    let spec = &specs()[selector as usize % 2];
    if spec.check_projected(&pi).is_err() {
        return;
    }
    if let Ok(d) = spec.fractional_decode(&pi) {
        assert_eq!(spec.code().interpolate(&d.codeword).unwrap(), d.message);
    }
    if let Ok(config) = CollabConfig::guaranteed(spec) {
        if let Ok(d) = collab_decode(&config, spec, &pi) {
            assert_eq!(spec.code().interpolate(&d.codeword).unwrap(), d.message);
        }
    }
});
