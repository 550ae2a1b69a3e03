//! Holds the workspace acceptance suite (`tests/acceptance.rs`).
//!
//! It lives in its own package so that a failing criterion does not stop the
//! other packages' test binaries under a plain `cargo test --workspace`.
