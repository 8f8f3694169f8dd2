//! Compiles the guide's code snippets as doc-tests so the book stays in
//! sync with the library. Each chapter of book/src is included verbatim;
//! `cargo test` runs every ```rust block.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/waves.md")]
pub mod waves {}

#[doc = include_str!("../../../book/src/operators.md")]
pub mod operators {}

#[doc = include_str!("../../../book/src/spectra.md")]
pub mod spectra {}

#[doc = include_str!("../../../book/src/thresholds.md")]
pub mod thresholds {}

#[doc = include_str!("../../../book/src/scanning.md")]
pub mod scanning {}
