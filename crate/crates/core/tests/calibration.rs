use dftt_core::dft_test::{run_test, ThresholdRule, VarianceModel};
use dftt_core::experiments::mt_sequence;

#[test]
fn small_p_values_occur_at_the_nominal_rate() {
    let runs = 10_000;
    let below = (0..runs)
        .filter(|&i| {
            let seq = mt_sequence(1 << 13, 99, i).unwrap();
            run_test(&seq, ThresholdRule::Log005, VarianceModel::Limit)
                .unwrap()
                .p
                < 0.01
        })
        .count();
    let rate = below as f64 / runs as f64;
    assert!((rate - 0.01).abs() < 0.003, "rate {rate}");
}
