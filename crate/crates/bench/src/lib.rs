//! Benchmark-only crate. The measurements live in `benches/engine.rs`;
//! run them with `cargo bench -p indset-bench`.
