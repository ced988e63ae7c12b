#![no_main]

use libfuzzer_sys::fuzz_target;
use rtlogic::profile::Profile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = Profile::parse(text) {
        let again = Profile::parse(&p.emit()).expect("emitted profile must parse");
        assert_eq!(again, p);
    }
});
