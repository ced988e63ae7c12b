#![no_main]

use libfuzzer_sys::fuzz_target;
use rtlogic::synth::{parse_expr, to_truth_table};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(e) = parse_expr(text) else {
        return;
    };
    let again = parse_expr(&e.to_string()).expect("displayed expression must parse");
    assert_eq!(again.vars, e.vars);
    // Tabulate only small functions to keep iterations fast.
    if e.vars.len() <= 12 {
        assert_eq!(to_truth_table(&again).unwrap(), to_truth_table(&e).unwrap());
    }
});
