//! Criterion benchmarks for smoothlab; see `benches/`.
