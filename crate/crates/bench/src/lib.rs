//! Fixtures shared by the benchmarks in benches/.

use mfunctor::{generate, BasicData};

/// A built-in theory, panicking on generator failure.
pub fn theory(name: &str) -> BasicData {
    generate(name).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// The same theory with S removed, for the reconstruction path.
pub fn without_s(name: &str) -> BasicData {
    theory(name).with_s(None)
}
