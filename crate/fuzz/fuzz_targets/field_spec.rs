#![no_main]

use fracdec::field::parse_field_spec;
use fracdec::Field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let (spec, poly) = match text.split_once('|') {
        Some((s, rest)) => (s, Some(rest.split(',').filter_map(|c| c.trim().parse().ok()).collect::<Vec<u32>>())),
        None => (text, None),
    };
    let Ok((p, e)) = parse_field_spec(spec) else { return };
    assert!(e >= 1);
    if (p as u64).pow(e) > 1 << 12 {
        return;
    }
    if let Ok(f) = Field::from_spec(spec, poly.as_deref()) {
        assert_eq!(f.order(), p.pow(e));
    }
});
