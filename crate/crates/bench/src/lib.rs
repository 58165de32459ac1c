//! Criterion benchmarks for radsum-core; see `benches/`.
