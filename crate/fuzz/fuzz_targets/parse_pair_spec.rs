#![no_main]

use dni::approx::{ApproximatingFn, ApproximatingPair, AuxiliaryFn};
use dni::series::SeriesKind;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 256 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = s.parse::<ApproximatingFn>();
    let _ = s.parse::<SeriesKind>();
    if let Ok(aux) = s.parse::<AuxiliaryFn>() {
        let echo: AuxiliaryFn = aux.to_string().parse().expect("display form parses");
        assert_eq!(echo.to_string(), aux.to_string());
    }
    if let Ok(pair) = ApproximatingPair::parse(s) {
        assert!(ApproximatingPair::parse(&pair.spec()).is_ok());
    }
});
