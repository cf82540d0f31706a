//! Typicality of coherence and entanglement for Haar-random pure states.
//!
//! Closed-form Haar averages, Lévy-type concentration bounds and a
//! reproducible Monte Carlo harness that checks one against the other.
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod accumulator;
pub mod closedform;
pub mod concentration;
pub mod distances;
mod error;
pub mod measures;
pub mod montecarlo;
pub mod rng;
pub mod specfun;
pub mod states;

pub use error::{Error, Result};
