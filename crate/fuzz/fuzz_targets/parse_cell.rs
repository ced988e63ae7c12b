#![no_main]

use libfuzzer_sys::fuzz_target;
use rtlogic::cell::GateCellConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = GateCellConfig::parse(text) {
        let again = GateCellConfig::parse(&c.emit()).expect("emitted cell must parse");
        assert_eq!(again, c);
    }
});
