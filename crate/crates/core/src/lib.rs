//! Computational tools for mixed Hodge structures and their degenerations.
//!
//! Everything is generic over a [`field::Scalar`]; the exact instantiation
//! [`field::Gq`] makes every structural check decidable.

pub mod corpus;
pub mod error;
pub mod field;
pub mod io;
pub mod mhs;
pub mod orbits;
pub mod record;
pub mod scenarios;
pub mod suite;
pub mod weights;

pub use error::{Error, Result};
