#![no_main]

use dni::dimfun::DimensionFunction;
use libfuzzer_sys::fuzz_target;
use rug::Float;

fuzz_target!(|data: &[u8]| {
    if data.len() > 256 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = s.parse::<DimensionFunction>() {
        let echo: DimensionFunction = f.to_string().parse().expect("display form parses");
        assert_eq!(echo.to_string(), f.to_string());
        let _ = f.eval(&Float::with_val(128, Float::u_exp(1, -20)));
    }
});
