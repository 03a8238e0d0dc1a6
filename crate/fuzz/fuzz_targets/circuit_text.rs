#![no_main]
use libfuzzer_sys::fuzz_target;
use qbench_core::circuit::parse_circuit;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(c) = parse_circuit(src) {
        // printing must produce text the parser reads back to the same circuit
        let again = parse_circuit(&c.to_string()).expect("printed circuit parses");
        assert_eq!(again, c);
    }
});
