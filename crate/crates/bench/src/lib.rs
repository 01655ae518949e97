//! Criterion benchmarks for the trfocus pipeline; see `benches/`.
