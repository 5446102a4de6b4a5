//! Criterion benchmarks for vpquad-core live in `benches/`.
