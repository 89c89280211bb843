//! Exact computation of Betti-number and total-degree bounds for varieties
//! and exponential sums over finite fields, together with the machinery to
//! check them against brute-force point counts.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactmath`]: rationals, dense polynomials, truncated power series,
//!   cyclotomic integers and rational-function reconstruction.
//! - [`polytope`]: lattice polytopes, volumes, mixed volumes, Newton polytopes
//!   and the gauge (weight) function of a polytope.
//! - [`polygon`]: Newton and Hodge polygons and their dominance order.
//! - [`bounds`]: every closed-form bound as an exact value.
//! - [`ffcount`]: finite fields, exhaustive point counts, character sums,
//!   zeta and L-function reconstruction.
//! - [`verify`]: scenario harness tying counts to the bounds.

pub mod bounds;
pub mod error;
pub mod exactmath;
pub mod ffcount;
pub mod polygon;
pub mod polytope;
pub mod verify;

pub use error::{Error, Result};
