//! Exact computations around the divisor sum
//! `M(R_X) = Σ_{x ∈ R_X ∩ Z^{k-1}} τ_k(f(x))` where `f` is the incomplete norm
//! form of a Galois number field of degree `k ≥ 3`.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches the
//! filesystem, threads or the command line lives in the companion `normdiv`
//! crate.
//!
//! Module map:
//!
//! - [`field`]: fields given by an integral basis and a multiplication tensor,
//!   the norm and the incomplete norm form.
//! - [`embed`]: numeric conjugates, unit balancing and the Dedekind residue.
//! - [`ideal`]: prime splitting, ideals in Hermite normal form, inclusion-exclusion
//!   coefficients `μ_n`.
//! - [`density`]: the local densities `ρ(𝔫)`, `ϱ(n)` and `ϱ*(p^α)`.
//! - [`lattice`]: multiplier lattices, LLL, exact lattice point counts, region volume.
//! - [`divisor`]: segmented sieving of `τ_k`, the full sum, hyperbola decomposition.
//! - [`asymptotic`]: the Euler product constant and the predicted main term.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod asymptotic;
pub mod dd;
pub mod density;
pub mod divisor;
pub mod embed;
mod error;
pub mod field;
pub mod hnf;
pub mod ideal;
pub mod lattice;
pub mod linalg;
pub mod lll;
pub mod mpoly;
pub mod polyfp;
pub mod region;

pub use error::{Error, Result};
pub use field::{AlgebraicInt, Field, FieldSpec};
pub use hnf::IdealHnf;
pub use ideal::{MuCoefficients, PrimeIdealRep};
pub use region::Region;

