//! Benchmark-only crate: see `benches/core.rs`.
//!
//! This crate intentionally exports nothing; it exists so the criterion
//! benchmarks live outside the library crate and its dependency set.
