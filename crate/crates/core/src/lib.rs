//! Magnetostatics of a solenoid under massive-photon (Proca)
//! electrodynamics, the resulting corrections to Aharonov-Bohm-type phases,
//! and the inversion of a phase-measurement precision into a photon-mass
//! bound.
//!
//! Units are Gaussian cgs throughout: lengths in cm, fields in gauss,
//! charges in statC, the photon mass as an inverse range `m_gamma` in cm^-1
//! (see [`units`] for the gram equivalent).

pub mod bessel;
pub mod cli;
pub mod bounds;
pub mod deflection;
pub mod error;
pub mod field;
pub mod numerics;
pub mod phases;
pub mod units;

pub use error::{Error, Result};
pub use units::{InverseRange, MassGrams};
