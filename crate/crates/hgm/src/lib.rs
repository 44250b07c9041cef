//! Exact invariants of hypergeometric motives H(gamma, t).
//!
//! The crate computes, in exact arithmetic, the defining data of the
//! rank-n motives attached to a family parameter (a ratio of products
//! of cyclotomic polynomials) and a rational specialization point:
//!
//! - family-parameter algebra and hypergeometric series coefficients
//!   ([`family`]);
//! - Hodge vectors, weight, and the zigzag normalization offset
//!   ([`hodge`]);
//! - Levelt monodromy matrices and the orthogonal/symplectic
//!   dichotomy ([`monodromy`]);
//! - toric and BCM source-variety models with brute-force point
//!   counting oracles ([`geometry`]);
//! - Frobenius traces at good primes by finite-field character sums
//!   and by the p-adic gamma route, plus the erasing principle at
//!   wild primes ([`arith`]);
//! - Frobenius polynomials, tame/wild conductor exponents, gamma
//!   factors, and Dirichlet coefficients ([`lseries`]);
//! - a census of Hodge vectors over all parameters of a given rank
//!   ([`census`]) and a command-line surface ([`cli`]).

pub mod arith;
pub mod census;
pub mod cli;
pub mod error;
pub mod family;
pub mod fq;
pub mod geometry;
pub mod hodge;
pub mod lseries;
pub mod matrix;
pub mod monodromy;
pub mod nt;
pub mod poly;

mod book;

pub use error::{Error, Result};
