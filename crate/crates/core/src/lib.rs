//! Spin-1/2 chain dynamics for generating and certifying many-body Bell
//! correlations and spin squeezing.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! * [`spinspace`]: product-basis states, collective spin operators,
//!   rotations, Wigner d-matrices and the symmetric (Dicke) projector;
//! * [`models`]: staggered XXX, long-range XXZ, Ising-limit and one-axis
//!   twisting Hamiltonians, plus the probe coupling;
//! * [`evolve`]: exact propagation by sector-blocked Hermitian
//!   eigendecomposition and second-order Trotter circuits;
//! * [`swt`]: magnon dispersions and effective twisting strengths, both
//!   analytic and extracted from the one-magnon sector;
//! * [`observables`]: GHZ coherence, Bell correlator, squeezing, symmetric
//!   fidelity and harmonic analysis;
//! * [`probe`]: single-probe-qubit readout of the magnetization distribution
//!   and of the extremal Dicke coherence.
//!
//! Basis convention: a product state is indexed by an integer whose bit `j`
//! describes site `j`; a zero bit is spin up (`m_j = +1/2`). The all-up state
//! has index 0.

#![no_std]

extern crate alloc;

pub mod error;
pub mod evolve;
pub mod linalg;
pub mod models;
pub mod observables;
pub mod operator;
pub mod probe;
pub mod spinspace;
pub mod swt;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Largest chain handled by the dense state-vector paths.
pub const MAX_SITES: usize = 14;

/// Crate version, recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
