//! Criterion benchmarks for cubica live in `benches/cubics.rs`; run them with
//! `cargo bench -p cubica-bench`.
