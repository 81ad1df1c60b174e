//! Inputs shared by the benchmarks in `benches/`.

use repmeasure_core::{FamilySpec, Text};

/// Sizes used for the scaling groups.
pub const SIZES: [usize; 3] = [1 << 12, 1 << 16, 1 << 20];

/// A random text over 16 symbols and a Fibonacci-word prefix of length `n`.
pub fn inputs(n: usize) -> Vec<(&'static str, Text)> {
    let random = FamilySpec::Random { n, sigma: 16, seed: 1 };
    let fibonacci = FamilySpec::Fibonacci { n };
    vec![
        ("random16", random.generate().expect("valid spec")),
        ("fibonacci", fibonacci.generate().expect("valid spec")),
    ]
}

/// `inputs(n)` with a terminator appended, as the CDAWG requires.
pub fn terminated_inputs(n: usize) -> Vec<(&'static str, Text)> {
    inputs(n)
        .into_iter()
        .map(|(name, t)| (name, t.with_terminator(None).expect("byte alphabet has room")))
        .collect()
}
