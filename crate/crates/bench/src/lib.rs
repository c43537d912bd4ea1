//! Benchmarks for the core constructions live in `benches/`.
