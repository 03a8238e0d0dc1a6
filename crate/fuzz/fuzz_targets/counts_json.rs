#![no_main]
use libfuzzer_sys::fuzz_target;
use qbench_core::counts::CountsDistribution;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(c) = CountsDistribution::from_json(src) {
        assert_eq!(CountsDistribution::from_json(&c.to_json()).unwrap(), c);
        assert_eq!(c.counts().values().sum::<u64>(), c.shots());
    }
});
