//! Bipotentials for set-valued constitutive laws.
//!
//! A bipotential `b(x, y)` is convex in each argument, dominates the duality
//! product `<x, y>`, and its equality set is the graph of a (possibly
//! non-associated) constitutive law. This crate provides
//!
//! * extended-real arithmetic and sampled convexity / subgradient checks,
//! * the generic constructions (separable `phi + phi*` and the indicator
//!   bipotential `b_inf`) with an axiom verification suite,
//! * convex covers and their inf-envelope,
//! * three blurred laws with closed forms: elasticity with a tolerance band,
//!   plasticity with an uncertain yield threshold, and Coulomb friction with
//!   an uncertain friction coefficient,
//! * brute-force grid oracles to cross-check every closed form.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bipotential;
pub mod convex;
pub mod cover;
mod error;
mod ext_real;
pub mod laws;
pub mod oracles;
mod vector;

pub use error::Error;
pub use ext_real::ExtReal;
pub use vector::{duality, Vector};

/// Default absolute tolerance of every verdict-producing check.
pub const DEFAULT_TOL: f64 = 1e-9;

pub type Result<T> = core::result::Result<T, Error>;
