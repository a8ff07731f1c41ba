//! Exact arithmetic kernel: rationals, rational vectors over abstract real
//! basis symbols, polynomials in `u, b1, …, bd`, and integer matrices.

pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod qvec;
pub mod rational;
pub mod snf;

pub use matrix::IntMatrix;
pub use poly::Poly;
pub use qvec::QVec;
pub use rational::{format_rational, parse_rational, Rational};
pub use snf::{smith_normal_form, SmithForm};

/// Convenience wrapper over [`QVec::proportionality`].
pub fn qvec_proportionality(a: &QVec, b: &QVec) -> crate::error::Result<Option<Rational>> {
    a.proportionality(b)
}
