//! Criterion benchmarks for `covop-core`; see `benches/kernels.rs`.
