//! Criterion benchmarks for `cfk-core`; see `benches/`.
