#![no_main]

use kgsol::data::parse_custom;
use kgsol::Grid;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let grid = Grid::new(8.0, 8).unwrap();
    if let Ok(d) = parse_custom(text, &grid) {
        assert_eq!(d.phi0.len(), 8);
        assert_eq!(d.phi1.len(), 8);
    }
});
