//! Casimir-Polder potential of a ground-state atom outside a dielectric
//! sphere.
//!
//! Distances follow one convention throughout: `r` is the distance from the
//! sphere centre, `z = r - R` the distance from its surface.

mod asymptotes;
mod curve;
mod mie;
mod series;

pub use asymptotes::{asymptotic_potentials, c3_halfspace, AsymptoticPotentials};
pub use curve::{stitched_potential, CurvePoint, Method, PotentialCurve};
pub use mie::{mie_coefficients, mode_factors, ModeFactors};
pub use series::{cp_potential_full, cp_potential_nonretarded, potential_integrand};

use crate::constants::SPEED_OF_LIGHT;
use crate::materials::{DrudeLorentzModel, PolarizabilityModel};
use crate::specfun::MAX_ORDER;
use crate::{Error, Result};

pub const DEFAULT_STITCH_TOL: f64 = 0.03;

/// A dielectric sphere, the atom outside it and the series controls.
#[derive(Clone, Debug)]
pub struct SphereSystem {
    pub radius: f64,
    pub sphere: DrudeLorentzModel,
    pub atom: PolarizabilityModel,
    pub l_max: usize,
    /// Accepted relative mismatch between the full series and `-C3/z^3`
    /// before the curve switches to the latter. A value of 1 selects the
    /// half-space form everywhere.
    pub stitch_tol: f64,
}

impl SphereSystem {
    pub fn new(
        radius: f64,
        sphere: DrudeLorentzModel,
        atom: PolarizabilityModel,
        l_max: usize,
    ) -> Result<Self> {
        let sys = SphereSystem {
            radius,
            sphere,
            atom,
            l_max,
            stitch_tol: DEFAULT_STITCH_TOL,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn with_stitch_tol(mut self, tol: f64) -> Result<Self> {
        self.stitch_tol = tol;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::domain("sphere radius", self.radius));
        }
        if self.l_max < 1 || self.l_max > MAX_ORDER {
            return Err(Error::Config(format!(
                "l_max must lie in 1..={MAX_ORDER}, got {}",
                self.l_max
            )));
        }
        if !(self.stitch_tol > 0.0 && self.stitch_tol <= 1.0) {
            return Err(Error::domain("stitch tolerance", self.stitch_tol));
        }
        Ok(())
    }

    pub(crate) fn check_outside(&self, r: f64) -> Result<()> {
        if !(r > self.radius) || !r.is_finite() {
            return Err(Error::Geometry(format!(
                "atom at r = {r:e} m is not outside the sphere of radius {:e} m",
                self.radius
            )));
        }
        Ok(())
    }
}

/// Frequency scale for the `xi` map: the dominant atomic line, or the
/// retardation cutoff `c / 2z` when that is lower.
pub(crate) fn xi_scale(atom: &PolarizabilityModel, z: f64) -> Option<f64> {
    let w = atom.dominant_frequency()?;
    Some(w.min(SPEED_OF_LIGHT / (2.0 * z)))
}
