//! Shared fixtures for the criterion benches.

use solzeta::arith::{int, rat};
use solzeta::{PrimeSet, ProbeConfig, SolenoidSpec};

/// `r = 2`, `S = {3}`.
pub fn two_three() -> SolenoidSpec {
    SolenoidSpec::finite(int(2), PrimeSet::new([3]).unwrap()).unwrap()
}

/// Probe at `delta = 1/27` with `points` grid values ending at 999/1000.
pub fn probe_config(points: usize, precision_bits: u32) -> ProbeConfig {
    let mut cfg = ProbeConfig::new(3, rat(1, 27));
    cfg.lambda_grid = solzeta::probe::linear_grid(&rat(9, 10), &rat(999, 1000), points);
    cfg.precision_bits = precision_bits;
    cfg
}
