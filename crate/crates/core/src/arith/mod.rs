//! Finite fields, their towers, and exact cyclotomic scalars.

pub mod cyclo;
pub mod gf;
pub mod gfpoly;
pub mod tower;

pub use cyclo::{Rational, Scalar};
pub use gf::{prime_power, Gf};
pub use tower::{Divisor, ExtElem, FieldTower, TowerDescription};
