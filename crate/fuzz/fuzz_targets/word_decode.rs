#![no_main]

use std::sync::OnceLock;

use fracdec::presets::hermitian_f81;
use fracdec::{Elem, FractionalSpec, StoredWord};
use libfuzzer_sys::fuzz_target;

fn spec() -> &'static FractionalSpec {
    static SPEC: OnceLock<FractionalSpec> = OnceLock::new();
    SPEC.get_or_init(hermitian_f81)
}

fuzz_target!(|data: &[u8]| {
    let Ok(word) = serde_json::from_slice::<Vec<Elem>>(data) else { return };
    let spec = spec();
    let Ok(pi) = spec.project_word(&word) else { return };
    let Ok(store) = StoredWord::new(spec.tower(), &word) else { return };
    let direct = spec.fractional_decode(&pi);
    let stored = spec.decode(&store);
    assert_eq!(direct.is_ok(), stored.is_ok());
    if let (Ok(a), Ok(b)) = (direct, stored) {
        assert_eq!(a.codeword, b.codeword);
    }
});
