//! Casimir-Polder interaction between a ground-state atom and a dielectric
//! sphere, and its effect on Poisson-spot matter-wave diffraction.
//!
//! The crate is organised as a pipeline:
//!
//! * [`specfun`]: scaled modified spherical Bessel rows and associated
//!   Legendre rows on the imaginary frequency axis.
//! * [`materials`]: Drude-Lorentz permittivity, Kramers-Kronig ingestion of
//!   optical tables, least-squares fitting, atomic polarizability and the
//!   layered-film effective `C3`.
//! * [`cp_potential`]: Mie coefficients, the full multipole series, every
//!   asymptotic limit and the stitched production potential.
//! * [`eikonal`]: WKB validity, eikonal phase shifts, `C52`, annulus radii and
//!   the classical capture radius.
//! * [`fresnel`]: the ray-decomposed Fresnel integral, radial profiles, source
//!   convolution, b-scans and image assembly.
//! * [`cli`]: run configuration, beam thermodynamics and the reproducible
//!   pipeline driver behind the `poisson-cp` binary.
//!
//! Runnable walkthroughs of each stage live in `examples/`.

// `!(x > 0.0)` style checks are how NaN inputs get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constants;
pub mod cp_potential;
pub mod eikonal;
mod error;
pub mod fresnel;
pub mod materials;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
