use qbench_core::circuit::{build_ghz, Family};
use qbench_core::counts::bitstring;
use qbench_core::metrics::{compare, hellinger, tvd};
use qbench_core::noise::{noisy_sample, NoiseModel};
use qbench_core::statevector::ideal_distribution;
use qbench_core::transpiler::{
    heavy_hex_target, transpile, HardwareTarget, TargetPreset, TranspileOptions, TranspiledCircuit,
};

const SHOTS: u64 = 4096;

fn eagle() -> HardwareTarget {
    heavy_hex_target(TargetPreset::Eagle127).unwrap()
}

fn transpiled(family: Family, n: usize, t: &HardwareTarget) -> TranspiledCircuit {
    transpile(&family.build(n).unwrap(), t, &TranspileOptions::default()).unwrap()
}

#[test]
fn zero_noise_is_plain_sampling() {
    let tc = transpiled(Family::Ghz, 4, &eagle());
    let counts = noisy_sample(&tc, &NoiseModel::noiseless(1), SHOTS).unwrap();
    let ideal = ideal_distribution(Family::Ghz, 4).unwrap();
    assert!(tvd(&counts, &ideal).unwrap() < 0.03);
    assert_eq!(counts.get("0000") + counts.get("1111"), SHOTS);
}

fn marginals(counts: &qbench_core::CountsDistribution, n: usize) -> Vec<f64> {
    (0..n)
        .map(|bit| {
            let ones: u64 =
                counts.counts().iter().filter(|(k, _)| k.as_bytes()[n - 1 - bit] == b'1').map(|(_, c)| c).sum();
            ones as f64 / counts.shots() as f64
        })
        .collect()
}

#[test]
fn coin_flip_readout_gives_fair_marginals() {
    let t = eagle();
    let nm = NoiseModel::new(0.0, 0.0, 0.5, 11).unwrap();
    let counts = noisy_sample(&transpiled(Family::Ghz, 4, &t), &nm, SHOTS).unwrap();
    for m in marginals(&counts, 4) {
        assert!((m - 0.5).abs() < 0.02, "{m}");
    }
    // across many bits use 5 sigma so the family-wide check is not a lottery
    let bound = 5.0 * (0.25 / SHOTS as f64).sqrt();
    for family in Family::ALL {
        let counts = noisy_sample(&transpiled(family, 7, &t), &nm, SHOTS).unwrap();
        for (bit, m) in marginals(&counts, 7).into_iter().enumerate() {
            assert!((m - 0.5).abs() < bound, "{family} bit {bit}: {m}");
        }
    }
}

#[test]
fn two_qubit_noise_leaks_outside_ghz_support() {
    let tc = transpiled(Family::Ghz, 4, &eagle());
    let nm = NoiseModel::new(0.0, 0.01, 0.0, 5).unwrap();
    let counts = noisy_sample(&tc, &nm, SHOTS).unwrap();
    let inside = counts.get("0000") + counts.get("1111");
    assert!(inside < SHOTS);
    assert!(inside > SHOTS / 2);
}

#[test]
fn heavy_noise_makes_every_metric_positive() {
    let tc = transpiled(Family::Ghz, 4, &eagle());
    let nm = NoiseModel::new(0.05, 0.1, 0.05, 2).unwrap();
    let noisy = noisy_sample(&tc, &nm, SHOTS).unwrap();
    let r = compare(&ideal_distribution(Family::Ghz, 4).unwrap(), &noisy, None).unwrap();
    assert!(r.tvd > 0.0 && r.kl > 0.0 && r.js > 0.0 && r.hellinger > 0.0, "{r:?}");
}

fn mean_over_seeds(
    tc: &TranspiledCircuit,
    n: usize,
    base: NoiseModel,
    metric: fn(&qbench_core::CountsDistribution, &qbench_core::Distribution) -> f64,
) -> f64 {
    let ideal = ideal_distribution(Family::Ghz, n).unwrap();
    (0..10u64).map(|seed| metric(&noisy_sample(tc, &NoiseModel { seed, ..base }, SHOTS).unwrap(), &ideal)).sum::<f64>()
        / 10.0
}

#[test]
fn tvd_is_monotone_in_two_qubit_error_rate() {
    let t = eagle();
    for n in [4, 6, 8] {
        let tc = transpiled(Family::Ghz, n, &t);
        let means: Vec<f64> = [0.0, 0.01, 0.03]
            .iter()
            .map(|&p2| mean_over_seeds(&tc, n, NoiseModel { p2, ..NoiseModel::default() }, |a, b| tvd(a, b).unwrap()))
            .collect();
        assert!(means.windows(2).all(|w| w[0] <= w[1]), "n={n}: {means:?}");
    }
}

#[test]
fn ghz_hellinger_grows_with_width() {
    let t = eagle();
    let means: Vec<f64> = (4..=10)
        .map(|n| {
            let tc = transpiled(Family::Ghz, n, &t);
            mean_over_seeds(&tc, n, NoiseModel::default(), |a, b| hellinger(a, b).unwrap())
        })
        .collect();
    assert!(means.windows(2).all(|w| w[0] <= w[1]), "{means:?}");
}

#[test]
fn counts_cover_the_full_register() {
    let t = eagle();
    let tc = transpile(&build_ghz(6).unwrap(), &t, &TranspileOptions { seed: 3, ..Default::default() }).unwrap();
    let counts = noisy_sample(&tc, &NoiseModel { seed: 4, ..NoiseModel::default() }, 1000).unwrap();
    assert_eq!(counts.shots(), 1000);
    assert!(counts.counts().keys().all(|k| k.len() == 6));
    assert!(counts.get(&bitstring(0, 6)) > 300);
}
