#![no_main]

use dni::precision::parse_exact;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 256 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_exact(s) {
        assert_eq!(parse_exact(&r.to_string()).expect("p/q form parses"), r);
    }
});
