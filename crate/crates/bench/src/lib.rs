//! Shared inputs for the benchmarks in `benches/`.

use qcycle::DriveSpec;

/// Unit-rate drives at the exponents the benchmarks sweep over.
pub fn unit_drives() -> Vec<(f64, DriveSpec)> {
    [0.5, 1.0, 2.0]
        .iter()
        .map(|&znu| (znu, DriveSpec::power_law(znu, 1.0).expect("valid drive")))
        .collect()
}

/// `n` evenly spaced times from `a` to `b` inclusive.
pub fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}
