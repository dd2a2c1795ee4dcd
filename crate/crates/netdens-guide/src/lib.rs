//! The chapters of the guide under `book/` double as this crate's module
//! documentation, so every fenced Rust block in the book compiles and runs
//! with `cargo test`. A snippet that drifts from the library breaks the
//! build, not just the prose.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/graphs.md")]
pub mod graphs {}

#[doc = include_str!("../../../book/src/decomposition.md")]
pub mod decomposition {}

#[doc = include_str!("../../../book/src/metrics.md")]
pub mod metrics {}

#[doc = include_str!("../../../book/src/generators.md")]
pub mod generators {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/public-data.md")]
pub mod public_data {}
