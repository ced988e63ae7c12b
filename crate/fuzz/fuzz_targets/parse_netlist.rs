#![no_main]

use libfuzzer_sys::fuzz_target;
use rtlogic::netlist::{emit_netlist, parse_netlist};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(n) = parse_netlist(text) {
        let again = parse_netlist(&emit_netlist(&n)).expect("emitted netlist must parse");
        assert_eq!(again, n);
    }
});
