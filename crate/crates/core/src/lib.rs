//! Correlation sums of the Möbius and Liouville functions against their
//! summatory functions, Riemann zeta evaluation, and zero-side sums over
//! tables of nontrivial zeros.
//!
//! The crate is organised bottom-up:
//!
//! * [`sieve`] generates μ, λ, μ² over arbitrary ranges and streams the exact
//!   summatory functions M(n) and L(n).
//! * [`corr`] accumulates the logarithmically averaged correlation sums
//!   ∑ f(n)F(n−1)/n, their δ-weighted variants and shifted autocorrelations.
//! * [`zeta`] evaluates ζ(s) by Euler–Maclaurin summation and supplies the
//!   constants the correlation limits are compared against.
//! * [`zeros`] ingests zero tables (γ, ζ′(ρ)) and computes the zero-side sums
//!   and truncated explicit-formula reconstructions.
//! * [`report`] drives whole runs and formats their output for the CLI.

pub mod corr;
pub mod error;
pub mod report;
pub mod selftest;
pub mod sieve;
pub mod sum;
pub mod zeros;
pub mod zeta;

pub use error::{Error, Result};
