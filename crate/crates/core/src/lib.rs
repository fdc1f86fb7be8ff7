//! Pseudo-spectral solvers for the incompressible Euler, inviscid Burgers,
//! Euler–Voigt and Navier–Stokes–Voigt equations on the periodic box, with
//! Gevrey–Sobolev norm diagnostics, the nonlinear strip-width transforms and
//! certification of trajectories against closed-form a priori bounds.

pub mod bounds;
pub mod dynamics;
pub mod error;
mod fft;
pub mod harness;
pub mod lattice;
pub mod norms;
pub mod xform;

pub use error::{Error, Result};
pub use lattice::{Lattice, SpectralField};
