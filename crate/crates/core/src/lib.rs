//! Daniell-style rigorous integration engine.
//!
//! The exact layer (`steps1d`, `stepsnd`) implements the algebra-lattice of
//! step functions over arbitrary-precision rationals with width, Stieltjes
//! and volume preintegrals. The analysis layers build on it: certified
//! Darboux enclosures, monotone-extension machinery, improper and
//! transform integrals, Jacobian/surface/coarea geometry, a catalog of
//! closed-form integral values, and Coulomb potentials.

pub mod cli;
pub mod daniell;
pub mod darboux;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod improper;
pub mod potentials;
pub mod quad;
pub mod rational;
pub mod special;
pub mod steps1d;
pub mod stepsnd;
pub mod toolbox;

pub use error::{Error, Result};
