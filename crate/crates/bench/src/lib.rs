//! Benchmark-only crate; see `benches/greedy.rs`.
