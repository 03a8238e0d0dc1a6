#![no_main]
use libfuzzer_sys::fuzz_target;
use qbench_core::noise::NoiseModel;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(nm) = NoiseModel::from_json(src) {
        assert_eq!(NoiseModel::from_json(&nm.to_json()).unwrap(), nm);
    }
});
