//! Compiles the guide's code samples as doc-tests so `book/` and the crate
//! cannot drift apart.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/observations.md")]
pub mod observations {}

#[doc = include_str!("../../../book/src/encodings.md")]
pub mod encodings {}

#[doc = include_str!("../../../book/src/triples.md")]
pub mod triples {}

#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}

#[doc = include_str!("../../../book/src/benchmark.md")]
pub mod benchmark {}
