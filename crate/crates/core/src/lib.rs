//! Exact invariants of split Nakamura manifolds `Γ\(ℂⁿ ⋊_ρ ℂ)`.
//!
//! Every verdict is computed with exact rational arithmetic. The weights
//! `λ_i` are rational vectors over declared ℚ-independent positive real
//! symbols `b_1, …, b_d`, and the modulus τ is either declared generic
//! (`Re τ / |τ|² ∉ ℚ`) or given by an integer triple `(c, h, k)`.

pub mod automorphisms;
pub mod cli;
pub mod cohomology;
pub mod construct;
pub mod error;
pub mod forms;
pub mod model;
pub mod scalars;
pub mod tau;

pub use error::{Error, Result};
pub use model::{LambdaSpec, ManifoldSpec, SpecialTau, TauSpec};
pub use scalars::{IntMatrix, Poly, QVec, Rational};
