#![no_main]
use libfuzzer_sys::fuzz_target;
use qbench_core::transpiler::Layout;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(l) = Layout::from_json(src) {
        assert_eq!(Layout::from_json(&l.to_json()).unwrap(), l);
        for k in 0..l.n_logical() {
            assert!(l.final_physical(k).is_some());
        }
    }
});
