//! Benchmark-only crate; see `benches/cloning.rs`.
