#![no_main]

use libfuzzer_sys::fuzz_target;
use vandervolt::io::BasisSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = text.parse::<BasisSpec>() {
        assert_eq!(spec.to_string().parse::<BasisSpec>().ok(), Some(spec));
    }
});
