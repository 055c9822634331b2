//! Exact scattering of identical bosons or fermions through passive
//! multiport beam splitters.
//!
//! One particle enters each of the `N` input ports of an `N × N` network.
//! The crate builds the transition matrix (the symmetric Bell multiport is
//! the discrete Fourier transform), evaluates output amplitudes through
//! permanents (bosons) or determinants (fermions), and reproduces the
//! generalised Hong-Ou-Mandel dip: bosons never exit one per port when `N`
//! is even, fermions always do.
//!
//! ```
//! use homport::fock::{coincidence_probability, ParticleStatistics};
//! use homport::multiport::build_dft;
//!
//! let u = build_dft(4).unwrap();
//! assert!(coincidence_probability(&u, ParticleStatistics::Boson).unwrap() < 1e-18);
//! let p = coincidence_probability(&u, ParticleStatistics::Fermion).unwrap();
//! assert!((p - 1.0).abs() < 1e-12);
//! ```
//!
//! The [`oracle`] module re-derives every amplitude by expanding the output
//! state term by term, without permanents or determinants, and serves as
//! the independent check on [`fock`].

pub mod error;
pub mod fock;
pub mod hom;
pub mod matrix;
pub mod matrixfn;
pub mod multiport;
pub mod oracle;

pub use error::{Error, Result};
pub use fock::{FockConfig, OutputDistribution, ParticleStatistics};
pub use matrix::ComplexMatrix;
