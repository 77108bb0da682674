//! Benchmarks only; see `benches/covers.rs`.
