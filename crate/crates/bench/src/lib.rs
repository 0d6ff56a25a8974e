//! Criterion benchmarks for `entmono-core`; see `benches/`.
