//! Poisson-spot diffraction in the Fresnel approximation.
//!
//! The amplitude at a detection point is integrated in polar coordinates
//! centred where the source-to-point line crosses the sphere plane. Each
//! ray is split at its crossings with the blocked disk and the CP annulus:
//! free stretches have closed-form endpoint terms, the annulus is
//! integrated numerically with the local eikonal phase.

mod image;
mod profile;
mod rays;

pub use image::{assemble_image, DiffractionImage};
pub use profile::{b_scan, convolve_source, radial_profile, BScanEntry, RadialProfile};
pub use rays::{
    cp_segment_amplitude, free_amplitude, free_segment_amplitude, point_amplitude,
    ray_intersections, relative_intensity, Chord,
};

use std::f64::consts::PI;

use crate::eikonal::{Beam, PhaseProfile};
use crate::{Error, Result};

pub const DEFAULT_N_THETA: usize = 19_997;
pub const DEFAULT_CP_STEP: f64 = 0.1e-9;
pub const DEFAULT_PIXELS_RADIAL: usize = 2000;
pub const DEFAULT_SOURCE_DIAMETER: f64 = 20e-6;

/// Point source, spherical obstacle and detection plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    /// sphere radius; 0 means no obstacle
    pub radius: f64,
    /// source to sphere, m
    pub g: f64,
    /// sphere to detector, m
    pub b: f64,
    pub beam: Beam,
    /// CP phase around the sphere; `None` switches the interaction off
    pub phase: Option<PhaseProfile>,
    pub source_diameter: f64,
    pub n_theta: usize,
    pub cp_step: f64,
    pub n_pixels_radial: usize,
    /// radial extent of profiles in the detection plane (defaults to `R`)
    pub extent: f64,
}

impl Scene {
    pub fn new(radius: f64, g: f64, b: f64, beam: Beam) -> Result<Self> {
        let scene = Scene {
            radius,
            g,
            b,
            beam,
            phase: None,
            source_diameter: DEFAULT_SOURCE_DIAMETER,
            n_theta: DEFAULT_N_THETA,
            cp_step: DEFAULT_CP_STEP,
            n_pixels_radial: DEFAULT_PIXELS_RADIAL,
            extent: if radius > 0.0 { radius } else { 100e-9 },
        };
        scene.validate()?;
        Ok(scene)
    }

    pub fn with_phase(mut self, phase: PhaseProfile) -> Result<Self> {
        self.phase = Some(phase);
        self.validate()?;
        Ok(self)
    }

    pub fn without_phase(mut self) -> Self {
        self.phase = None;
        self
    }

    pub fn with_resolution(mut self, n_theta: usize, n_pixels_radial: usize) -> Result<Self> {
        self.n_theta = n_theta;
        self.n_pixels_radial = n_pixels_radial;
        self.validate()?;
        Ok(self)
    }

    pub fn with_source_diameter(mut self, d: f64) -> Result<Self> {
        self.source_diameter = d;
        self.validate()?;
        Ok(self)
    }

    pub fn with_b(mut self, b: f64) -> Result<Self> {
        self.b = b;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius >= 0.0) || !self.radius.is_finite() {
            return Err(Error::domain("sphere radius", self.radius));
        }
        if !(self.g > 0.0) || !self.g.is_finite() {
            return Err(Error::domain("source distance g", self.g));
        }
        if !(self.b > 0.0) || !self.b.is_finite() {
            return Err(Error::domain("detector distance b", self.b));
        }
        if self.n_theta < 3 {
            return Err(Error::Config(format!(
                "N_theta must be at least 3, got {}",
                self.n_theta
            )));
        }
        if self.n_pixels_radial < 2 {
            return Err(Error::Config(
                "a radial profile needs at least two pixels".into(),
            ));
        }
        if !(self.cp_step > 0.0) {
            return Err(Error::domain("CP step", self.cp_step));
        }
        if !(self.source_diameter >= 0.0) {
            return Err(Error::domain("source diameter", self.source_diameter));
        }
        if !(self.extent > 0.0) {
            return Err(Error::domain("profile extent", self.extent));
        }
        if let Some(p) = &self.phase {
            if (p.radius - self.radius).abs() > 1e-12 * self.radius.max(1e-300) {
                return Err(Error::Config(format!(
                    "phase profile built for R = {:e} m used with R = {:e} m",
                    p.radius, self.radius
                )));
            }
        }
        Ok(())
    }

    /// Notes on how well the Fresnel regime `lambda << R << min(g, b)` holds.
    pub fn fresnel_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.radius > 0.0 {
            if self.beam.wavelength > 1e-2 * self.radius {
                out.push(format!(
                    "wavelength {:e} m is not small against R = {:e} m",
                    self.beam.wavelength, self.radius
                ));
            }
            if self.radius > 1e-2 * self.g.min(self.b) {
                out.push(format!(
                    "R = {:e} m is not small against min(g, b) = {:e} m",
                    self.radius,
                    self.g.min(self.b)
                ));
            }
        }
        out
    }

    /// `kappa = (pi / lambda)(1/g + 1/b)`, so that the geometric phase is
    /// `kappa rho^2`.
    pub fn kappa(&self) -> f64 {
        PI / self.beam.wavelength * (1.0 / self.g + 1.0 / self.b)
    }

    /// Axis offset of the integration origin for detection radius `rho_p`.
    pub fn origin_offset(&self, rho_p: f64) -> f64 {
        rho_p * self.g / (self.g + self.b)
    }

    /// Radius of the opaque disk and of the outer edge of the CP annulus.
    pub(crate) fn circles(&self) -> (f64, f64) {
        match &self.phase {
            Some(p) => (p.r_inner, p.r_outer),
            None => (self.radius, self.radius),
        }
    }
}

/// `phi_g = (pi/lambda)(1/g + 1/b) rho^2`.
pub fn geometric_phase(rho: f64, scene: &Scene) -> f64 {
    scene.kappa() * rho * rho
}

/// Width of the first Fresnel zone outside the rim,
/// `sqrt(R^2 + lambda g b/(g+b)) - R`.
pub fn fresnel_zone_width(scene: &Scene) -> f64 {
    let r = scene.radius;
    let q = scene.beam.wavelength * scene.g * scene.b / (scene.g + scene.b);
    // rationalised to avoid cancellation when q << R^2
    q / ((r * r + q).sqrt() + r)
}
