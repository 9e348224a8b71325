#![no_main]

use libfuzzer_sys::fuzz_target;
use vandervolt::io::{parse_basis_table, write_basis_table};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(basis) = parse_basis_table(text) {
        let again = parse_basis_table(&write_basis_table(&basis)).expect("written table parses");
        assert_eq!(again, basis);
    }
});
