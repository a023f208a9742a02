//! Benchmarks for `sqfree-core`. Run with `cargo bench -p sqfree-bench`.
