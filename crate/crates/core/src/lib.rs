//! Exact symplectic capacity computations for toric domains.
//!
//! The crate works entirely with exact rationals. It provides
//!
//! * the ellipsoid values `N_k` and the lattice min–max formulas for
//!   convex and concave toric domains ([`capacities`]),
//! * weight expansions of concave 4-d domains ([`weights`]),
//! * two independent ball-packing deciders ([`packing`]),
//! * the 2-normalized capacity computations and gap certificates built on
//!   top of them ([`bounds`]).
//!
//! Domains are described by their moment images ([`domains`]); the
//! polygon machinery lives in [`geometry`].

pub mod bounds;
pub mod capacities;
pub mod cli;
pub mod domains;
pub mod error;
pub mod geometry;
pub mod packing;
pub mod rational;
pub mod weights;

pub use error::{Error, Result};
pub use rational::Rational;
