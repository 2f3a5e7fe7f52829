//! Information measures for single- and dual-rail bosonic communication
//! between an inertial sender and a uniformly accelerated receiver.
//!
//! The receiver's vacuum is related to the sender's by a two-mode squeezer of
//! strength `r`; tracing out the causally disconnected partner mode turns it
//! into a noisy channel. The crate evaluates fidelity, mutual information,
//! conditional entropy, channel capacity and coherent information two ways:
//!
//! * [`closedform`] sums the closed-form series directly;
//! * [`oracle`] builds truncated Fock-space states, traces them and
//!   diagonalizes, sharing only the [`fockcore`] primitives with the former.
//!
//! [`analysis`] runs sweeps and asymptotic fits; [`cli`] backs the
//! `horizon-channels` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod closedform;
pub mod error;
pub mod fockcore;
pub mod oracle;
pub mod parallel;
pub mod unruh;

pub use error::{Error, Result};
