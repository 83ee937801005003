//! Numerics for the hierarchy of multiple elliptic gamma functions `G_r`,
//! multiple sine functions `S_r`, multiple Bernoulli polynomials `B_{r,n}`,
//! q-shifted factorials and generalized q-polylogarithms — together with an
//! identity engine that verifies their functional equations and modular
//! transformations by computing both sides through independent
//! representations (series vs. infinite product vs. contour integral).
//!
//! The layers, bottom up:
//!
//! - [`bernoulli`] — exact-coefficient multiple Bernoulli polynomials; these
//!   supply every exponential prefactor in the modular identities.
//! - [`qseries`] — the q-shifted factorial `(x; q0,…,qr)∞` for mixed
//!   modulus patterns and the q-polylogarithm that is its logarithm.
//! - [`gammafuncs`] — `G_r(z|τ)`, with the theta function `θ0` and the
//!   elliptic gamma `Γ(z,τ,σ)` as the `r = 0, 1` members.
//! - [`multisine`] — `S_r(z|ω)` through two infinite-product
//!   representations and through indented-contour integrals.
//! - [`quadrature`] — composite Gauss–Legendre contour integration for all
//!   integral representations (indented real lines, the loop around the
//!   positive integers, vertical paths for `ψ2`).
//! - [`identities`] — the modular theorems and corollaries as executable
//!   checks producing [`identities::IdentityReport`]s.
//!
//! Every evaluation returns a value together with an absolute error bound;
//! identity checks compare the two sides with the residual convention
//! `|lhs − rhs| / max(|lhs|, |rhs|, 1)`.

// negated comparisons in the precondition guards double as NaN rejection
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bernoulli;
pub mod gammafuncs;
pub mod identities;
pub mod multisine;
pub mod policy;
pub mod qseries;
pub mod quadrature;

mod cplx;

pub use num_complex::Complex64;
pub use policy::{Estimate, EvalError, TruncationPolicy};
