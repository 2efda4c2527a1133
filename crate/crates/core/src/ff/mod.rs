//! Finite fields, squarefree polynomials, imaginary quadratic function
//! fields `F_q(t)(√f)` with their class groups, and Cohen–Lenstra statistics.

mod cl;
mod curve;
mod field;
mod poly;

pub use cl::*;
pub use curve::*;
pub use field::{is_irreducible, prime_power, Fe, Field, MAX_FIELD_SIZE};
pub use poly::Poly;

/// `q` odd and `ℓ` divides neither `q` nor `q − 1`.
pub fn good_for_ell(q: u64, ell: u64) -> bool {
    q % 2 == 1 && q % ell != 0 && (q - 1) % ell != 0
}
