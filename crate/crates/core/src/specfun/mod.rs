//! Special functions on the imaginary frequency axis.
//!
//! Everything here is real-valued: spherical Bessel and Hankel functions are
//! evaluated at `z = i x` and the powers of `i` are stripped off, leaving
//! positive (first kind) or negative (third kind) real mantissas. Magnitudes
//! span thousands of decades for `l` near 1000, so every value carries its own
//! power-of-two exponent.

mod bessel;
mod legendre;
mod scaled;

pub use bessel::{modified_sph_bessel, ScaledBesselRow, MAX_ORDER};
pub use legendre::{assoc_legendre_row, LegendreRow};
pub use scaled::{ldexp, Scaled};
