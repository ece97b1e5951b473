//! Target-oriented control of chaotic multidimensional maps.
//!
//! The crate is `no_std` (it needs `alloc`). It provides the state-space
//! primitives, the control laws (VTOC, VMTOC, PF, MPF and diagonal VMTOC),
//! the benchmark LPA and delayed Ricker maps, minimum control intensity
//! estimates, and the orbit machinery used for bifurcation scans.
//!
//! File formats, configuration and the command-line driver live in the
//! `chaosctl` crate.

#![no_std]
// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod controls;
pub mod cost;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod map;
pub mod models;
pub mod state;

pub use controls::{ControlConfig, Intensity, Scheme};
pub use error::{Error, Result};
pub use map::{FnMap, MapModel};
pub use state::{DomainSpec, NormKind, StateVector};

/// Square real matrix used for Jacobians.
pub type Matrix = nalgebra::DMatrix<f64>;
