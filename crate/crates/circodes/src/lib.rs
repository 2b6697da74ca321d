//! Perfect codes in circulant graphs.
//!
//! A set `D ⊂ Z_n` is a perfect code of `Cay(Z_n, S)` when `S_0 ⊕ D = Z_n`
//! with `S_0 = S ∪ {0}`. For `|S_0| = p^l` this crate decides whether a code
//! exists ([`pyramidal::decide_existence`]), constructs codes from a subgroup
//! series ([`codes`]), generates the circulants that have `<p^l>` as a code
//! ([`lifts`]), and counts them ([`counting`]).
//!
//! ```
//! use circodes::pyramidal::decide_existence;
//! use circodes::zmod::ResidueSet;
//!
//! let s: ResidueSet = "90:1,5,6,7,83,84,85,89".parse()?;
//! assert!(decide_existence(&s, 3, 2)?.exists);
//! # Ok::<(), circodes::Error>(())
//! ```
//!
//! The guide in `book/` walks through the same material with more examples.

pub mod cli;
pub mod codes;
pub mod counting;
pub mod error;
pub mod lifts;
pub mod pyramidal;
pub mod tiling;
pub mod zmod;

pub use error::{Error, Result};

// Book chapters, compiled as doctests.
#[doc = include_str!("../../../book/src/intro.md")]
mod intro {}
#[doc = include_str!("../../../book/src/residues.md")]
mod residues {}
#[doc = include_str!("../../../book/src/tilings.md")]
mod tilings {}
#[doc = include_str!("../../../book/src/pyramidal.md")]
mod pyramidal_chapter {}
#[doc = include_str!("../../../book/src/codes.md")]
mod codes_chapter {}
#[doc = include_str!("../../../book/src/lifts.md")]
mod lifts_chapter {}
#[doc = include_str!("../../../book/src/counting.md")]
mod counting_chapter {}
#[doc = include_str!("../../../book/src/cli.md")]
mod cli_chapter {}
