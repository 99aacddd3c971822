//! Dipolar exchange collisions between Rydberg polaritons in multichannel
//! optical geometries.
//!
//! A photon propagating as a Rydberg polariton in one optical rail collides
//! with a stored spin wave in a neighbouring rail. Dipolar excitation exchange
//! lets the photon hop between rails. This crate computes
//!
//! * the loss and exchange coefficients of the effective propagation equation
//!   ([`coefficients`]),
//! * the transmission and exchange amplitudes `T(r_perp)`, `H(r_perp)` from a
//!   transfer-matrix solution ([`scattering`]),
//! * mode-averaged exchange efficiency, double-exchange figure of merit and
//!   output density maps for Gaussian rails ([`modes`]),
//! * separation sweeps, optimal rail separation and power-law fits
//!   ([`sweeps`]),
//! * the three-rail controlled-Z network built from two collisions
//!   ([`network`]).
//!
//! All lengths are in units of the blockade radius and all rates in units of
//! the EIT linewidth; [`params`] converts from physical parameters.

pub mod coefficients;
pub mod error;
pub mod modes;
pub mod network;
pub mod ode;
pub mod params;
pub mod quadrature;
pub mod scattering;
pub mod spline;
pub mod sweeps;

pub use error::{Error, Result};
pub use params::{derive_model, ModelParams, PhysicalParams, Sign};
pub use scattering::{ScatteringResult, SolverOptions, TransferMatrix};

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
/// Output order always matches input order.
#[cfg(feature = "parallel")]
pub(crate) fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
