#![no_main]

use libfuzzer_sys::fuzz_target;
use rtlogic::sim::Stimulus;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = Stimulus::parse_csv(text) {
        let csv = s.to_csv();
        let again = Stimulus::parse_csv(&csv).expect("emitted stimulus must parse");
        assert_eq!(again.to_csv(), csv);
    }
});
