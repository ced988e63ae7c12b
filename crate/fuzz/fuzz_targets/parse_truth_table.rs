#![no_main]

use libfuzzer_sys::fuzz_target;
use rtlogic::synth::{emit_truth_table, minimize, parse_table_source, parse_truth_table};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(src) = parse_table_source(text) else {
        return;
    };
    assert!(src.on_cubes.matches(&src.table));
    if src.table.num_vars() <= 8 {
        let again = parse_truth_table(&emit_truth_table(&src.table)).expect("emitted table must parse");
        assert_eq!(again, src.table);
        assert!(minimize(&src.table).unwrap().matches(&src.table));
    }
});
