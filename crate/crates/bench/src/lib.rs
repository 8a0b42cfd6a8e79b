//! Criterion benchmarks for the hurwitzkit engines; see `benches/`.
