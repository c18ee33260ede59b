//! Criterion benchmarks for torusloop live in `benches/`.
