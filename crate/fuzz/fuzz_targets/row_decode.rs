#![no_main]

use std::sync::OnceLock;

use fracdec::presets::hermitian_f81;
use fracdec::{Elem, FractionalSpec};
use libfuzzer_sys::fuzz_target;

fn spec() -> &'static FractionalSpec {
    static SPEC: OnceLock<FractionalSpec> = OnceLock::new();
    SPEC.get_or_init(hermitian_f81)
}

fuzz_target!(|data: &[u8]| {
    let spec = spec();
    let code = &spec.row_codes()[0];
    if data.len() != code.len() {
        return;
    }
    let word: Vec<Elem> = data.iter().map(|&b| Elem(b as u32)).collect();
    if let Ok(d) = code.decode_basic(&word) {
        assert_eq!(code.interpolate(&d.codeword).unwrap(), d.message);
    }
});
