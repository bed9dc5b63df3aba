//! Criterion benchmarks for `deltaprop-core`. See `benches/`.
