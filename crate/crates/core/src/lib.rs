//! Numerical library for expectation values of characteristic polynomials in
//! three non-Hermitian Gaussian random-matrix ensembles: the complex Ginibre
//! ensemble (class A), complex symmetric matrices (class AI†) and complex
//! self-dual matrices (class AII†).
//!
//! The crate provides
//!
//! * closed-form finite-`N` evaluators for `⟨det(z−J) det(w*−J*)⟩` and their
//!   global / bulk / edge scaling limits ([`charpoly`], [`asymptotics`]),
//! * the special functions those formulas are built from, with complex
//!   arguments where needed ([`specfun`]),
//! * samplers for the three matrix ensembles and for Haar-distributed
//!   elements of the classical compact groups ([`ensembles`], [`kpairs`]),
//! * reproducible, embarrassingly parallel Monte Carlo estimators that act
//!   as independent oracles for every closed form ([`montecarlo`]),
//! * the k-pair machinery: duality integrals, Harish-Chandra–Itzykson–Zuber
//!   determinants, edge matrix integrals and their normalization constants
//!   ([`kpairs`]).
//!
//! All estimators are deterministic given an [`rng::RngStream`]; parallel
//! runs reproduce serial runs bit for bit.

pub mod asymptotics;
pub mod charpoly;
pub mod ensembles;
mod error;
pub mod kpairs;
pub mod linalg;
pub mod montecarlo;
pub mod quadrature;
pub mod rng;
pub mod specfun;

pub use error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Complex = num_complex::Complex64;

/// Complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
