//! Order estimates for Kolmogorov `n`-widths of intersections of balls in
//! mixed norms `l^{m,k}_{p,θ}`, measured in `l^{m,k}_{q,σ}` with
//! `2 ≤ q, σ < ∞` and `n ≤ mk/2`.
//!
//! The crate is `no_std` (it needs `alloc`). Exponents are handled through
//! their reciprocals `u = 1/p ∈ [0, 1]` as exact rationals, so every region
//! test and every candidate-set predicate is decided without rounding. Only
//! the final magnitudes (powers of `m`, `k`, `n`, radii) are evaluated in
//! double precision.
//!
//! Layout:
//!
//! * [`exponent`] and [`geometry`]: reciprocal exponents, interpolation
//!   weights and the exact planar predicates behind the candidate sets.
//! * [`phi`]: `ω_{p,q}` and the six-branch single-ball quantity `Φ(p, θ)`.
//! * [`instance`] and [`psi`]: ball families, the eight values `Ψ_0..Ψ_7`
//!   with certificates, and the covering reduction of large families.
//! * [`norms`]: mixed norms, membership and interpolation inequalities.
//! * [`witness`]: the sets `V^{m,k}_{r,l}` and lower-bound witnesses.
//! * [`oracles`]: exact classical widths and a seeded numerical estimator.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub mod exponent;
pub mod geometry;
pub mod instance;
pub mod norms;
pub mod oracles;
pub mod phi;
pub mod psi;
mod subspace;
pub mod witness;

pub use error::Error;
pub use exponent::{Exponent, Rational, ReciprocalPoint, Weight};
pub use instance::{BallSpec, Instance};
pub use norms::Matrix;
pub use phi::{Dimensions, PhiValue, TargetSpace};
pub use psi::{Certificate, PsiEstimate};

pub type Result<T> = core::result::Result<T, Error>;
