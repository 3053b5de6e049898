//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any criterion fails.
//!
//! Randomized criteria run twice, with 1 and with 4 workers; their serialized
//! reports must match byte for byte.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dftt::report::{Envelope, McConfigOut, McOut, NormalityOut, SimplexOut};
use dftt::RayonExecutor;
use dftt_core::dft_test::{ThresholdRule, PASS_FRACTION};
use dftt_core::experiments::{self, McConfig};
use dftt_core::spectrum::{dft_naive, FftPlan};
use dftt_core::theory::{self, TheoryParams};
use dftt_core::{simplex, Executor, Mt19937};
use serde_json::json;

const SEED: u32 = 20_240_601;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

/// A randomized criterion: returns its verdict and the serialized report.
type Randomized = fn(&RayonExecutor) -> (Verdict, String);

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

fn ac1_parseval(exec: &RayonExecutor) -> (Verdict, String) {
    let n = 1024;
    let plan = FftPlan::new(n).unwrap();
    let errors = exec.map(1000, |i| {
        let x = experiments::mt_sequence(n, SEED, i).unwrap().signed();
        let norm = (n * n) as f64;
        let naive = (dft_naive(&x).unwrap().parseval_energy() / norm - 1.0).abs();
        let fast = (plan.magnitudes(&x).unwrap().parseval_energy() / norm - 1.0).abs();
        (naive, fast)
    });
    let naive = errors.iter().map(|e| e.0).fold(0.0, f64::max);
    let fast = errors.iter().map(|e| e.1).fold(0.0, f64::max);
    let pass = naive < 1e-9 && fast < 1e-7;
    let report = json!({ "n": n, "sequences": 1000, "seed": SEED, "errors": errors });
    (
        Verdict::new(
            pass,
            format!("max |E/n^2 - 1|: naive {naive:.2e} (< 1e-9), fast {fast:.2e} (< 1e-7)"),
        ),
        report.to_string(),
    )
}

fn ac2_enumeration() -> Verdict {
    let t = experiments::exhaustive_moments(8).unwrap();
    let dc = t.lines[0].variance;
    let interior: Vec<f64> = t.lines[1..=3].iter().map(|l| l.variance).collect();
    let pass = (dc - 112.0).abs() < 1e-6
        && interior.iter().all(|v| (v - 48.0).abs() < 1e-6)
        && t.identity_max_error < 1e-9
        && t.parseval_max_error < 1e-9;
    Verdict::new(
        pass,
        format!(
            "V|f0|^2 = {dc}, V|f1..3|^2 = {interior:?}, identity err {:.1e}, parseval err {:.1e}",
            t.identity_max_error, t.parseval_max_error
        ),
    )
}

fn ac3_calibration(exec: &RayonExecutor) -> (Verdict, String) {
    let analytic = ThresholdRule::Log005.pass_probability();
    let config = McConfig {
        n: 1 << 13,
        n_sequences: 10_000,
        master_seed: SEED,
        batches: 10,
    };
    let counts = experiments::n1_counts(&config, ThresholdRule::Log005, exec).unwrap();
    let total: u64 = counts.iter().map(|&c| c as u64).sum();
    let fraction = total as f64 / (counts.len() * config.m()) as f64;
    let pass = (analytic - PASS_FRACTION).abs() < 1e-12 && (fraction - 0.95).abs() < 0.002;
    let report = json!({ "config": McConfigOut::from(&config), "counts": counts });
    (
        Verdict::new(
            pass,
            format!(
                "analytic {analytic:.15}, empirical mean N1/(n/2) {fraction:.6} (0.95 +- 0.002)"
            ),
        ),
        report.to_string(),
    )
}

fn ac4_limit() -> Verdict {
    let start = Instant::now();
    let a = theory::limit_a();
    let elapsed = start.elapsed();
    let pass = (a - 3.7903).abs() < 1e-3 && within(elapsed, Duration::from_millis(1));
    Verdict::new(
        pass,
        format!("a(2^24) = {a:.8} (3.7903 +- 1e-3) in {elapsed:?} (< 1 ms)"),
    )
}

fn ac5_variance(exec: &RayonExecutor) -> (Verdict, String) {
    let config = McConfig {
        n: 1 << 13,
        n_sequences: 200_000,
        master_seed: SEED,
        batches: 10,
    };
    let report = experiments::experiment_variance(&config, exec).unwrap();
    let reference = theory::divisor_a(&TheoryParams::log005(1 << 12).unwrap()).unwrap();
    let a = report.estimate;
    let pass = (a - reference).abs() < 3.0 * report.stderr && a > 3.5 && a < 4.1;
    let out = Envelope::new(
        "mc-variance",
        McConfigOut::from(&config),
        McOut::from(&report),
    );
    (
        Verdict::new(
            pass,
            format!(
                "a_hat = {a:.5} +- {:.5}, a(4096) = {reference:.5}, |z| = {:.2} (< 3)",
                report.stderr,
                (a - reference).abs() / report.stderr
            ),
        ),
        out.to_json(),
    )
}

fn ac6_correlation(exec: &RayonExecutor) -> (Verdict, String) {
    let config = McConfig {
        n: 1 << 13,
        n_sequences: 100_000,
        master_seed: SEED,
        batches: 10,
    };
    let report = experiments::experiment_correlation(&config, 1, 2, exec).unwrap();
    let reference = theory::indicator_correlation(&TheoryParams::log005(1 << 12).unwrap()).unwrap();
    let z = (report.estimate - reference).abs() / report.stderr;
    let pass = report.per_batch.len() == config.batches && z < 3.0;
    let out = Envelope::new(
        "mc-correlation",
        McConfigOut::from(&config),
        McOut::from(&report),
    );
    (
        Verdict::new(
            pass,
            format!(
                "C[F1,F2] = {:.3e} +- {:.3e}, closed form {reference:.3e}, |z| = {z:.2} (< 3)",
                report.estimate, report.stderr
            ),
        ),
        out.to_json(),
    )
}

fn ac7_simplex(exec: &RayonExecutor) -> (Verdict, String) {
    let mut pass = true;
    let mut details = Vec::new();
    let mut outs = Vec::new();
    for m in [10usize, 100, 1000] {
        let config = McConfig {
            n: 2 * m,
            n_sequences: 100_000,
            master_seed: SEED,
            batches: 10,
        };
        let report = simplex::verify_closed_forms(&config, exec).unwrap();
        let zs: Vec<f64> = [&report.variance, &report.correlation, &report.n1_variance]
            .iter()
            .map(|r| r.z_score().unwrap())
            .collect();
        pass &= zs.iter().all(|&z| z < 3.0);
        details.push(format!(
            "m={m}: |z| vF {:.2}, corr {:.2}, varN1 {:.2}",
            zs[0], zs[1], zs[2]
        ));
        outs.push(
            Envelope::new(
                "simplex",
                McConfigOut::from(&config),
                SimplexOut::from(&report),
            )
            .to_json(),
        );
    }
    (Verdict::new(pass, details.join("; ")), outs.concat())
}

fn ac8_normality(exec: &RayonExecutor) -> (Verdict, String) {
    let config = McConfig {
        n: 4096,
        n_sequences: 100_000,
        master_seed: SEED,
        batches: 10,
    };
    let report = experiments::normality_check(&config, 3, exec).unwrap();
    let root = (config.n_sequences as f64).sqrt();
    let max_abs = |xs: &mut dyn Iterator<Item = f64>| xs.map(f64::abs).fold(0.0, f64::max);
    let mean = max_abs(&mut report.means.iter().copied());
    let var = max_abs(&mut report.variances.iter().map(|v| v - 1.0));
    let corr = max_abs(&mut report.correlations.iter().map(|c| c.2));
    let ks = report.ks_statistics.iter().copied().fold(0.0, f64::max);
    let pass = report.coefficients.len() == 6
        && mean < 3.0 / root
        && var < 0.015
        && corr < 3.0 / root
        && ks < 1.95 / root;
    let out = Envelope::new(
        "normality",
        McConfigOut::from(&config),
        NormalityOut::from(&report),
    );
    (
        Verdict::new(
            pass,
            format!(
                "max |mean| {mean:.2e} (< {:.2e}), max |var-1| {var:.2e} (< 1.5e-2), \
                 max |corr| {corr:.2e} (< {:.2e}), max KS {ks:.2e} (< {:.2e})",
                3.0 / root,
                3.0 / root,
                1.95 / root
            ),
        ),
        out.to_json(),
    )
}

fn ac9_lemma() -> Verdict {
    let r = experiments::lemma_a1_check(0.5, 0.1, 10_000).unwrap();
    let pass = r.pass && r.max_ratio < 0.1 && (r.ratio_at_min - 1.0 / 12.0).abs() < 1e-6;
    Verdict::new(
        pass,
        format!(
            "max ratio {:.6} at x = {} (< 0.1), ratio at smallest x {:.9} (1/12 = {:.9})",
            r.max_ratio,
            r.argmax,
            r.ratio_at_min,
            1.0 / 12.0
        ),
    )
}

/// MT19937 as published: `mag01` table, `genrand_int32` regenerating the
/// whole state when the index reaches `N`.
struct ReferenceMt {
    mt: [u32; 624],
    mti: usize,
}

impl ReferenceMt {
    fn init_genrand(s: u32) -> Self {
        let mut mt = [0u32; 624];
        mt[0] = s;
        for mti in 1..624 {
            mt[mti] = 1_812_433_253u32
                .wrapping_mul(mt[mti - 1] ^ (mt[mti - 1] >> 30))
                .wrapping_add(mti as u32);
        }
        Self { mt, mti: 624 }
    }

    fn genrand_int32(&mut self) -> u32 {
        const N: usize = 624;
        const M: usize = 397;
        const UPPER_MASK: u32 = 0x8000_0000;
        const LOWER_MASK: u32 = 0x7fff_ffff;
        let mag01 = [0u32, 0x9908_b0df];
        if self.mti >= N {
            let mt = &mut self.mt;
            let mut kk = 0;
            while kk < N - M {
                let y = (mt[kk] & UPPER_MASK) | (mt[kk + 1] & LOWER_MASK);
                mt[kk] = mt[kk + M] ^ (y >> 1) ^ mag01[(y & 1) as usize];
                kk += 1;
            }
            while kk < N - 1 {
                let y = (mt[kk] & UPPER_MASK) | (mt[kk + 1] & LOWER_MASK);
                mt[kk] = mt[kk + M - N] ^ (y >> 1) ^ mag01[(y & 1) as usize];
                kk += 1;
            }
            let y = (mt[N - 1] & UPPER_MASK) | (mt[0] & LOWER_MASK);
            mt[N - 1] = mt[M - 1] ^ (y >> 1) ^ mag01[(y & 1) as usize];
            self.mti = 0;
        }
        let mut y = self.mt[self.mti];
        self.mti += 1;
        y ^= y >> 11;
        y ^= (y << 7) & 0x9d2c_5680;
        y ^= (y << 15) & 0xefc6_0000;
        y ^= y >> 18;
        y
    }
}

fn ac11_mt() -> Verdict {
    let mut reference = ReferenceMt::init_genrand(5489);
    let mut ours = Mt19937::new(5489);
    let expected: Vec<u32> = (0..1000).map(|_| reference.genrand_int32()).collect();
    let got: Vec<u32> = (0..1000).map(|_| ours.next_u32()).collect();
    let mismatch = expected.iter().zip(&got).position(|(a, b)| a != b);
    let pass = mismatch.is_none() && expected[0] == 3_499_211_612;
    Verdict::new(
        pass,
        match mismatch {
            None => format!("1000 outputs match; first {}, last {}", got[0], got[999]),
            Some(i) => format!(
                "first mismatch at output {i}: {} vs {}",
                got[i], expected[i]
            ),
        },
    )
}

fn report(id: &str, name: &str, verdict: &Verdict, elapsed: Duration) -> bool {
    println!(
        "{id:<5} {:<4} {name}: {} [{:.2?}]",
        if verdict.pass { "PASS" } else { "FAIL" },
        verdict.detail,
        elapsed
    );
    verdict.pass
}

fn main() -> ExitCode {
    let single = RayonExecutor::new(1).unwrap();
    let quad = RayonExecutor::new(4).unwrap();
    let mut all = true;
    let mut identical = Vec::new();

    let mut randomized = |id: &str, name: &str, run: Randomized, limit: Option<Duration>| {
        let start = Instant::now();
        let (mut verdict, bytes) = run(&single);
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if !within(elapsed, limit) {
                verdict.pass = false;
                verdict
                    .detail
                    .push_str(&format!("; runtime over {limit:?}"));
            }
        }
        let (_, again) = run(&quad);
        identical.push((id.to_string(), bytes.len(), bytes == again));
        report(id, name, &verdict, elapsed)
    };

    all &= randomized(
        "AC1",
        "Parseval invariant",
        ac1_parseval,
        Some(Duration::from_secs(10)),
    );

    let start = Instant::now();
    let v = ac2_enumeration();
    let elapsed = start.elapsed();
    let v = Verdict::new(v.pass && within(elapsed, Duration::from_secs(1)), v.detail);
    all &= report("AC2", "exact moments by enumeration", &v, elapsed);

    all &= randomized("AC3", "threshold calibration", ac3_calibration, None);

    let start = Instant::now();
    let v = ac4_limit();
    all &= report("AC4", "limit constant", &v, start.elapsed());

    all &= randomized(
        "AC5",
        "divisor from MT sequences",
        ac5_variance,
        Some(Duration::from_secs(20 * 60)),
    );
    all &= randomized(
        "AC6",
        "indicator correlation from MT sequences",
        ac6_correlation,
        Some(Duration::from_secs(10 * 60)),
    );
    all &= randomized(
        "AC7",
        "simplex closed loop",
        ac7_simplex,
        Some(Duration::from_secs(2 * 60)),
    );
    all &= randomized(
        "AC8",
        "coefficient normality",
        ac8_normality,
        Some(Duration::from_secs(5 * 60)),
    );

    let start = Instant::now();
    let v = ac9_lemma();
    let elapsed = start.elapsed();
    let v = Verdict::new(v.pass && within(elapsed, Duration::from_secs(1)), v.detail);
    all &= report("AC9", "log-cos remainder bound", &v, elapsed);

    let same = identical.iter().all(|(_, _, same)| *same);
    let detail = identical
        .iter()
        .map(|(id, len, same)| {
            format!(
                "{id} {len} bytes {}",
                if *same { "equal" } else { "DIFFER" }
            )
        })
        .collect::<Vec<_>>()
        .join(", ");
    all &= report(
        "AC10",
        "identical output for 1 and 4 workers",
        &Verdict::new(same, detail),
        Duration::ZERO,
    );

    let start = Instant::now();
    let v = ac11_mt();
    all &= report("AC11", "MT19937 bit-exactness", &v, start.elapsed());

    if all {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
