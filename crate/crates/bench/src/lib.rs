//! Criterion benchmarks for `expdiv-core`; see `benches/`.
