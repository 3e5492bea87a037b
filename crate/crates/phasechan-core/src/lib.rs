//! Numerics for M-ary phase-keyed quantum communication channels built on
//! coherent states.
//!
//! The crate computes outcome distributions, mutual information and capacity
//! ratios for phase-shift-keyed channels read out by covariant phase
//! measurements (the canonical one and the Husimi-Q marginal), under either
//! static phase diffusion or dynamical Ornstein-Uhlenbeck dephasing with
//! optional detuning.
//!
//! The core is `no_std`-compatible (`alloc` required); IO, the validation
//! oracles and the CLI live in the companion `phasechan` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod fock;
pub mod infotheory;
pub mod math;
pub mod noise;
pub mod quad;
pub mod receiver;

pub use error::Error;

pub type Result<T> = core::result::Result<T, Error>;
