//! Benchmark-only crate; see `benches/erasure.rs`.
