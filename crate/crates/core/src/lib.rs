//! Computational workbench for Hurwitz-space combinatorics.
//!
//! The crate is organised bottom-up:
//!
//! - [`groups`]: multiplication-table groups, conjugation-invariant classes,
//!   subgroup lattices and the generalized dihedral construction.
//! - [`linalg`]: exact sparse rank, homology dimensions, Smith normal form.
//! - [`hurwitz`]: braid orbits on `c^n`, the component ring `R`, the
//!   stabilizing element `U_D` and the U/V stability scans.
//! - [`rack`]: conjugation racks, the cubical rack complex, rational rack
//!   homology and the shuffle coproduct.
//! - [`koszul`]: discrete `R`-modules and their Koszul complexes, A-module
//!   homology, regularity and cofiber-degree checks.
//! - [`ff`]: finite fields, squarefree polynomials, hyperelliptic Jacobians and
//!   Cohen-Lenstra statistics.
//! - [`spec`]: parsing of the textual group / rack / abelian-group
//!   descriptors used by the command line.

pub mod error;
pub mod ff;
pub mod groups;
pub mod hurwitz;
pub mod koszul;
pub mod linalg;
pub mod rack;
pub mod spec;

pub use error::{Error, Result};
