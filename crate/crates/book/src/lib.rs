//! Each chapter of the guide is a module here, so `cargo test --doc`
//! runs its code blocks.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/diagrams.md")]
pub mod diagrams {}
#[doc = include_str!("../../../book/src/pairing.md")]
pub mod pairing {}
#[doc = include_str!("../../../book/src/skein.md")]
pub mod skein {}
#[doc = include_str!("../../../book/src/moves.md")]
pub mod moves {}
#[doc = include_str!("../../../book/src/plane_curves.md")]
pub mod plane_curves {}
#[doc = include_str!("../../../book/src/tangles.md")]
pub mod tangles {}
#[doc = include_str!("../../../book/src/integrals.md")]
pub mod integrals {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
