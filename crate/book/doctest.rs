// mdbook cannot run snippets that depend on workspace crates, so each chapter
// is included here as a module doc and `cargo test --doc` runs its code blocks.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("src/plfun.md")]
pub mod plfun {}

#[doc = include_str!("src/complexes.md")]
pub mod complexes {}

#[doc = include_str!("src/staircases.md")]
pub mod staircases {}

#[doc = include_str!("src/cabling.md")]
pub mod cabling {}

#[doc = include_str!("src/pinning.md")]
pub mod pinning {}

#[doc = include_str!("src/summands.md")]
pub mod summands {}

#[doc = include_str!("src/cli.md")]
pub mod cli {}
