//! Statistical self-checks for the samplers in [`crate::rng`].
//!
//! Each check draws from its own derived stream, so the battery is
//! reproducible for a given seed.

use std::fmt;

use crate::rng::{derive_stream, MasterSeed, RngStream, BETA_CLAMP};

/// Scenario slot reserved for validation streams.
const VALIDATION_SLOT: u64 = u64::MAX - 1;
const DRAWS: usize = 100_000;
const UNIFORM_DRAWS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn within(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.into(),
            observed,
            expected,
            tolerance,
            passed: (observed - expected).abs() < tolerance,
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: observed {:.6}, expected {:.6} +/- {:.6}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.observed,
            self.expected,
            self.tolerance
        )
    }
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Kolmogorov-Smirnov distance between the sample and `Uniform(0, 1)`.
pub fn ks_uniform(sample: &[f64]) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let above = (i as f64 + 1.0) / n - x;
            let below = x - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// Run every sampler check. All pass for a correct implementation.
pub fn run_sampler_battery(seed: MasterSeed) -> Vec<CheckResult> {
    let mut next_id = 0u64;
    let mut stream = || {
        next_id += 1;
        derive_stream(seed, VALIDATION_SLOT, next_id, 0)
    };
    let sample = |s: &mut RngStream, n: usize, f: &dyn Fn(&mut RngStream) -> f64| -> Vec<f64> {
        (0..n).map(|_| f(s)).collect()
    };
    let mut checks = Vec::new();

    let us = sample(&mut stream(), UNIFORM_DRAWS, &|s| s.next_uniform());
    let (m, v) = mean_var(&us);
    checks.push(CheckResult::within("uniform mean", m, 0.5, 0.002));
    checks.push(CheckResult::within(
        "uniform variance",
        v,
        1.0 / 12.0,
        0.002,
    ));
    let out_of_range = us.iter().filter(|u| !(0.0..1.0).contains(*u)).count();
    checks.push(CheckResult::within(
        "uniform range [0,1) violations",
        out_of_range as f64,
        0.0,
        0.5,
    ));

    let p = 0.3;
    let bs = sample(&mut stream(), DRAWS, &|s| {
        f64::from(s.next_bernoulli(p).unwrap())
    });
    let (m, _) = mean_var(&bs);
    let four_sigma = 4.0 * (p * (1.0 - p) / DRAWS as f64).sqrt();
    checks.push(CheckResult::within(
        "bernoulli(0.3) frequency",
        m,
        p,
        four_sigma,
    ));

    let n = DRAWS as f64;
    for shape in [0.5, 1.0, 3.0, 9.0] {
        let gs = sample(&mut stream(), DRAWS, &|s| s.next_gamma(shape).unwrap());
        let (m, v) = mean_var(&gs);
        let se_mean = (shape / n).sqrt();
        let se_var = ((2.0 * shape * shape + 6.0 * shape) / n).sqrt();
        checks.push(CheckResult::within(
            format!("gamma({shape}) mean [5 SE]"),
            m,
            shape,
            5.0 * se_mean,
        ));
        checks.push(CheckResult::within(
            format!("gamma({shape}) variance [5 SE]"),
            v,
            shape,
            5.0 * se_var,
        ));
        let fixed_mean_tol = if shape == 3.0 {
            Some(0.03)
        } else if shape <= 1.0 {
            Some(0.02)
        } else {
            None
        };
        if let Some(tol) = fixed_mean_tol {
            checks.push(CheckResult::within(
                format!("gamma({shape}) mean"),
                m,
                shape,
                tol,
            ));
        }
        if shape == 3.0 {
            checks.push(CheckResult::within("gamma(3) variance", v, 3.0, 0.1));
        }
    }

    let mut clamp_violations = 0usize;
    let mut clamp_tally = |xs: &[f64]| {
        clamp_violations += xs
            .iter()
            .filter(|x| !(BETA_CLAMP..=1.0 - BETA_CLAMP).contains(*x))
            .count();
    };

    let b11 = sample(&mut stream(), DRAWS, &|s| s.next_beta(1.0, 1.0).unwrap());
    clamp_tally(&b11);
    checks.push(CheckResult::within(
        "beta(1,1) KS distance to uniform",
        ks_uniform(&b11),
        0.0,
        0.01,
    ));

    let b48 = sample(&mut stream(), DRAWS, &|s| s.next_beta(4.0, 8.0).unwrap());
    clamp_tally(&b48);
    checks.push(CheckResult::within(
        "beta(4,8) mean",
        mean_var(&b48).0,
        1.0 / 3.0,
        0.005,
    ));

    let b13 = sample(&mut stream(), DRAWS, &|s| s.next_beta(1.0, 3.0).unwrap());
    clamp_tally(&b13);
    let (m, v) = mean_var(&b13);
    checks.push(CheckResult::within("beta(1,3) mean", m, 0.25, 0.005));
    checks.push(CheckResult::within(
        "beta(1,3) variance",
        v,
        3.0 / 80.0,
        0.002,
    ));

    // tiny shapes push mass against both ends and exercise the clamp
    let tiny = sample(&mut stream(), DRAWS, &|s| s.next_beta(0.05, 0.05).unwrap());
    clamp_tally(&tiny);
    checks.push(CheckResult::within(
        "beta clamp [2^-53, 1-2^-53] violations",
        clamp_violations as f64,
        0.0,
        0.5,
    ));

    checks
}
