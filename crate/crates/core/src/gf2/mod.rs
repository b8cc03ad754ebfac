//! Bit-exact GF(2) primitives: cylinder vectors, words, polynomials and
//! circulant nullspaces.

mod bitstring;
mod nullspace;
mod poly;
mod word;

pub use bitstring::{convolve, cyclic_shift, BitString};
pub use nullspace::circulant_nullspace;
pub use poly::{poly_gcd, poly_inverse_mod, poly_powmod, Gf2Poly};
pub use word::{parity, Word};

/// Inverse rule of `v` on its cylinder, or `None` when `v` is irreversible.
pub fn inverse_rule(v: &BitString) -> Option<BitString> {
    poly_inverse_mod(v.as_poly(), v.len())
        .expect("cylinder size is positive")
        .map(|w| BitString::from_poly(v.len(), &w))
}
