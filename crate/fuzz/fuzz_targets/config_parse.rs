#![no_main]

use kgsol::config::{ExperimentConfig, Subcommand};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ExperimentConfig::parse(text) {
        let again = ExperimentConfig::parse(&cfg.canonical()).expect("canonical form parses");
        assert_eq!(again.hash(), cfg.hash());
        for sub in [Subcommand::VerifyIdentities, Subcommand::Simulate, Subcommand::Shoot] {
            let _ = cfg.validate(sub);
        }
    }
});
