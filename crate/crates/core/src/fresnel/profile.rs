use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{relative_intensity, Scene};
use crate::quad::GaussLegendre;
use crate::{Error, Result};

const KERNEL_RADIAL_NODES: usize = 48;
const KERNEL_ANGULAR_NODES: usize = 96;

/// Relative intensity along a radius of the detection plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    /// `(rho_P [m], I_rel)`, `rho_P` increasing from 0
    pub samples: Vec<(f64, f64)>,
    pub b: f64,
    pub radius: f64,
    pub cp: bool,
    /// factor applied to `C3` (1 for the nominal potential)
    pub corridor: f64,
    pub convolved: bool,
    pub notes: Vec<String>,
}

impl RadialProfile {
    /// Linear interpolation, clamped to the end samples.
    pub fn at(&self, rho: f64) -> f64 {
        let s = &self.samples;
        let n = s.len();
        if rho <= s[0].0 {
            return s[0].1;
        }
        if rho >= s[n - 1].0 {
            return s[n - 1].1;
        }
        let idx = s.partition_point(|p| p.0 < rho);
        let (p, q) = (s[idx - 1], s[idx]);
        p.1 + (q.1 - p.1) * (rho - p.0) / (q.0 - p.0)
    }

    pub fn on_axis(&self) -> f64 {
        self.samples[0].1
    }

    /// Local maxima away from the axis, as `(rho, I_rel)`.
    pub fn side_maxima(&self) -> Vec<(f64, f64)> {
        self.samples
            .windows(3)
            .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1)
            .map(|w| w[1])
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# b = {:e} m", self.b);
        let _ = writeln!(out, "# R = {:e} m", self.radius);
        let _ = writeln!(out, "# CP = {}", if self.cp { "on" } else { "off" });
        let _ = writeln!(out, "# corridor factor = {}", self.corridor);
        let _ = writeln!(out, "# source convolved = {}", self.convolved);
        for n in &self.notes {
            let _ = writeln!(out, "# note: {n}");
        }
        let _ = writeln!(out, "# rho_P[m] I_rel");
        for &(r, i) in &self.samples {
            let _ = writeln!(out, "{:.10e} {:.10e}", r, i);
        }
        out
    }
}

/// Point-source profile on `n_pixels_radial` equally spaced radii in
/// `[0, extent]`.
pub fn radial_profile(scene: &Scene) -> Result<RadialProfile> {
    scene.validate()?;
    let n = scene.n_pixels_radial;
    let step = scene.extent / (n - 1) as f64;
    let samples = (0..n)
        .into_par_iter()
        .map(|k| {
            let rho = k as f64 * step;
            Ok((rho, relative_intensity(rho, scene)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RadialProfile {
        samples,
        b: scene.b,
        radius: scene.radius,
        cp: scene.phase.is_some(),
        corridor: scene.phase.as_ref().map_or(0.0, |p| p.strength),
        convolved: false,
        notes: scene.fresnel_warnings(),
    })
}

/// Blur by the demagnified image of the source, a uniform disk of diameter
/// `source_diameter * b / g`.
///
/// Each output radius averages the interpolated profile over the disk in
/// polar coordinates about the output point (Gauss-Legendre in distance,
/// trapezoid in angle). Radii beyond the profile are clamped to its last
/// sample.
pub fn convolve_source(profile: &RadialProfile, scene: &Scene) -> Result<RadialProfile> {
    if profile.convolved {
        return Err(Error::Config("profile is already convolved".into()));
    }
    let diameter = scene.source_diameter * scene.b / scene.g;
    let pitch = profile
        .samples
        .windows(2)
        .map(|w| w[1].0 - w[0].0)
        .fold(f64::INFINITY, f64::min);
    let mut out = profile.clone();
    out.convolved = true;
    if diameter < pitch {
        out.notes.push(format!(
            "source image {diameter:e} m is below the pixel pitch; convolution skipped"
        ));
        return Ok(out);
    }
    let rk = 0.5 * diameter;
    let gl = GaussLegendre::new(KERNEL_RADIAL_NODES);
    let m = KERNEL_ANGULAR_NODES;
    let angles: Vec<(f64, f64)> = (0..m)
        .map(|j| (2.0 * PI * (j as f64 + 0.5) / m as f64).sin_cos())
        .collect();
    let reach = profile.samples.last().map_or(0.0, |s| s.0);
    out.samples = profile
        .samples
        .par_iter()
        .map(|&(rho, _)| {
            let mut acc = 0.0;
            for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
                let s = 0.5 * rk * (x + 1.0);
                let ring: f64 = angles
                    .iter()
                    .map(|&(sin, cos)| {
                        let px = rho + s * cos;
                        let py = s * sin;
                        profile.at(px.hypot(py))
                    })
                    .sum::<f64>()
                    / m as f64;
                acc += 0.5 * rk * w * s * ring;
            }
            (rho, acc * 2.0 / (rk * rk))
        })
        .collect();
    if reach < profile.samples[0].0 + rk || rk > 0.5 * reach {
        out.notes.push(format!(
            "kernel radius {rk:e} m is comparable to the profile extent; edge values are clamped"
        ));
    }
    out.notes
        .push(format!("uniform disk kernel, diameter {diameter:e} m"));
    Ok(out)
}

/// Profiles with and without the CP phase at one detector distance.
#[derive(Clone, Debug)]
pub struct BScanEntry {
    pub b: f64,
    pub with_cp: Option<RadialProfile>,
    pub without_cp: RadialProfile,
}

/// Radial profiles for each detector distance, with and without the CP
/// phase when the scene carries one.
pub fn b_scan(scene: &Scene, b_values: &[f64]) -> Result<Vec<BScanEntry>> {
    b_values
        .iter()
        .map(|&b| {
            let at_b = scene.clone().with_b(b)?;
            let with_cp = match at_b.phase {
                Some(_) => Some(radial_profile(&at_b)?),
                None => None,
            };
            let without_cp = radial_profile(&at_b.without_phase())?;
            Ok(BScanEntry {
                b,
                with_cp,
                without_cp,
            })
        })
        .collect()
}
