//! Criterion benchmarks for composition and gluing; see `benches/compose_glue.rs`.
