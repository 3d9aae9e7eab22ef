//! Exact computations with Hecke algebras for the first congruence subgroup
//! of loop groups over finite fields, and their actions on bundle points.
#![cfg_attr(not(test), no_std)]
extern crate alloc;

pub mod arith;
pub mod bundles;
pub mod characters;
pub mod divhecke;
pub mod error;
pub mod funspace;
pub mod groups;
pub mod linalg;
pub mod loophecke;
pub mod poly;

pub use error::{Error, Result};
