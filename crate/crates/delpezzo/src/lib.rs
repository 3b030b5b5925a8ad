//! Exact lattice, cone and fan computations for the degree-one del Pezzo surface and the blow-up of P⁴ in eight points.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod lattice;
pub mod linalg;
pub mod classes;
pub mod cones;
pub mod farkas;
pub mod fan;
pub mod determinant;
pub mod surgery;
pub mod gale;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{Basis, PicClass, RatClass};
