//! Exact linear algebra over `Q` and `Z`.
//!
//! Everything here is arbitrary precision. Modular rank exists only as an
//! independent cross-check for tests.

mod smith;
mod sparse;

pub use smith::{smith_normal_form, SmithForm, MAX_SNF_DIM};
pub use sparse::{homology_dim, rank, rank_mod_prime, SparseMat};
