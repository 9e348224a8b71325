#![no_main]

use libfuzzer_sys::fuzz_target;
use vandervolt::io::{parse_nodes, parse_values, write_nodes};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_values(text);
    if let Ok(nodes) = parse_nodes(text, None) {
        assert!(nodes.points().iter().all(|p| p.len() == nodes.dim()));
        // 9-digit output may merge nodes closer than that, so only a clean re-parse is required
        let _ = parse_nodes(&write_nodes(&nodes), Some(nodes.dim()));
    }
});
