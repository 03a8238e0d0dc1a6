#![no_main]
use libfuzzer_sys::fuzz_target;
use qbench_core::transpiler::HardwareTarget;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(t) = HardwareTarget::from_json(src) {
        let back = HardwareTarget::from_json(&t.to_json()).unwrap();
        assert_eq!(back.n_physical(), t.n_physical());
        assert_eq!(back.edges(), t.edges());
    }
});
