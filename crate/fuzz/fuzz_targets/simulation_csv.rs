#![no_main]

use kgsol::experiment::read_simulation;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = read_simulation(text) {
        let t = s.get("t").expect("t column");
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        assert!(s.columns.iter().all(|(_, v)| v.len() == t.len() && v.iter().all(|x| x.is_finite())));
    }
});
