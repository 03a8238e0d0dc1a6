//! Replays the checked-in fuzz seeds through the same properties the fuzz
//! targets assert, so the corpus stays meaningful on stable toolchains.

use std::fs;
use std::path::PathBuf;

use qbench_core::circuit::parse_circuit;
use qbench_core::counts::CountsDistribution;
use qbench_core::noise::NoiseModel;
use qbench_core::transpiler::{HardwareTarget, Layout};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

/// Seeds named `seed_bad_*` must be rejected; all others must parse.
fn expect_ok(name: &str) -> bool {
    !name.starts_with("seed_bad_")
}

#[test]
fn circuit_text_seeds() {
    for (name, src) in seeds("circuit_text") {
        match parse_circuit(&src) {
            Ok(c) => {
                assert!(expect_ok(&name), "{name} parsed");
                assert_eq!(parse_circuit(&c.to_string()).unwrap(), c, "{name}");
            }
            Err(e) => assert!(!expect_ok(&name), "{name}: {e}"),
        }
    }
}

#[test]
fn counts_json_seeds() {
    for (name, src) in seeds("counts_json") {
        match CountsDistribution::from_json(&src) {
            Ok(c) => {
                assert!(expect_ok(&name), "{name} parsed");
                assert_eq!(CountsDistribution::from_json(&c.to_json()).unwrap(), c);
            }
            Err(e) => assert!(!expect_ok(&name), "{name}: {e}"),
        }
    }
}

#[test]
fn target_json_seeds() {
    for (name, src) in seeds("target_json") {
        match HardwareTarget::from_json(&src) {
            Ok(t) => {
                assert!(expect_ok(&name), "{name} parsed");
                let back = HardwareTarget::from_json(&t.to_json()).unwrap();
                assert_eq!(back.edges(), t.edges());
            }
            Err(e) => assert!(!expect_ok(&name), "{name}: {e}"),
        }
    }
}

#[test]
fn noise_json_seeds() {
    for (name, src) in seeds("noise_json") {
        match NoiseModel::from_json(&src) {
            Ok(nm) => {
                assert!(expect_ok(&name), "{name} parsed");
                assert_eq!(NoiseModel::from_json(&nm.to_json()).unwrap(), nm);
            }
            Err(e) => assert!(!expect_ok(&name), "{name}: {e}"),
        }
    }
}

#[test]
fn layout_json_seeds() {
    for (name, src) in seeds("layout_json") {
        match Layout::from_json(&src) {
            Ok(l) => {
                assert!(expect_ok(&name), "{name} parsed");
                assert_eq!(Layout::from_json(&l.to_json()).unwrap(), l);
            }
            Err(e) => assert!(!expect_ok(&name), "{name}: {e}"),
        }
    }
}

#[test]
fn malformed_inputs_never_panic() {
    let junk =
        ["", "{", "qubits", "qubits 99999999999999999999 clbits 0", "[1,2]", "\u{0}\u{ff}", "{\"n\": -1}", "null"];
    for s in junk {
        let _ = parse_circuit(s);
        let _ = CountsDistribution::from_json(s);
        let _ = HardwareTarget::from_json(s);
        let _ = NoiseModel::from_json(s);
        let _ = Layout::from_json(s);
    }
}

/// Byte-level mutations of every seed: flips, truncations and splices.
#[test]
fn mutated_seeds_keep_round_trip_properties() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xf022);
    let all: Vec<(&str, String)> = ["circuit_text", "counts_json", "target_json", "noise_json", "layout_json"]
        .into_iter()
        .flat_map(|t| seeds(t).into_iter().map(move |(_, s)| (t, s)))
        .collect();
    let alphabet = b"0123456789,.-{}[]\":e \n#ABCDEGHIMNRSTWXYZ>";
    for _ in 0..4000 {
        let (target, src) = &all[rng.random_range(0..all.len())];
        let mut bytes = src.as_bytes().to_vec();
        for _ in 0..rng.random_range(1..4) {
            if bytes.is_empty() {
                break;
            }
            let at = rng.random_range(0..bytes.len());
            match rng.random_range(0..3) {
                0 => bytes[at] = alphabet[rng.random_range(0..alphabet.len())],
                1 => bytes.truncate(at),
                _ => {
                    let other = &all[rng.random_range(0..all.len())].1;
                    let from = rng.random_range(0..other.len());
                    bytes.splice(at..at, other.as_bytes()[from..].iter().take(8).copied());
                }
            }
        }
        let Ok(s) = std::str::from_utf8(&bytes) else { continue };
        match *target {
            "circuit_text" => {
                if let Ok(c) = parse_circuit(s) {
                    assert_eq!(parse_circuit(&c.to_string()).unwrap(), c, "{s}");
                }
            }
            "counts_json" => {
                if let Ok(c) = CountsDistribution::from_json(s) {
                    assert_eq!(CountsDistribution::from_json(&c.to_json()).unwrap(), c);
                }
            }
            "target_json" => {
                if let Ok(t) = HardwareTarget::from_json(s) {
                    assert_eq!(HardwareTarget::from_json(&t.to_json()).unwrap().edges(), t.edges());
                }
            }
            "noise_json" => {
                if let Ok(nm) = NoiseModel::from_json(s) {
                    assert_eq!(NoiseModel::from_json(&nm.to_json()).unwrap(), nm);
                }
            }
            _ => {
                if let Ok(l) = Layout::from_json(s) {
                    assert_eq!(Layout::from_json(&l.to_json()).unwrap(), l);
                }
            }
        }
    }
}
