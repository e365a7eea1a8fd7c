use std::f64::consts::PI;

use super::{DrudeLorentzModel, PolarizabilityModel};
use crate::constants::{EPSILON_0, HBAR};
use crate::quad::{semi_infinite, semi_infinite_at_level};
use crate::{Error, Result};

const XI_TOL: f64 = 1e-7;
// level-2 rule (240 nodes) for the wavevector integral
const Q_LEVEL: usize = 2;

/// Effective non-retarded `C3` seen at distance `z` above a film of
/// thickness `d` on a substrate, defined as `z^3 |U(z)|`.
///
/// The electrostatic reflection of the film/substrate stack is
/// `(r1 + r2 e^{-2qd}) / (1 + r1 r2 e^{-2qd})`. With `d = 0` this reduces to
/// the bare-substrate half-space constant, and for `d >> z` to the film's.
pub fn effective_c3_layered(
    film: &DrudeLorentzModel,
    substrate: &DrudeLorentzModel,
    atom: &PolarizabilityModel,
    d: f64,
    z: f64,
) -> Result<f64> {
    if !(d >= 0.0) || !d.is_finite() {
        return Err(Error::domain("film thickness", d));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("atom-surface distance", z));
    }
    let Some(scale) = atom.dominant_frequency() else {
        return Ok(0.0);
    };
    let ratio = d / z;
    let integrand = |xi: f64| -> Result<f64> {
        let ef = film.eps_imag(xi);
        let es = substrate.eps_imag(xi);
        let r1 = (ef - 1.0) / (ef + 1.0);
        let r2 = (es - ef) / (es + ef);
        // s = 2 q z, so e^{-2qd} = e^{-s d/z}
        let inner = semi_infinite_at_level(Q_LEVEL, 2.0, &|s: f64| {
            let damp = (-s * ratio).exp();
            let r = (r1 + r2 * damp) / (1.0 + r1 * r2 * damp);
            Ok(s * s * (-s).exp() * r)
        })?;
        Ok(atom.alpha(xi) * inner / 8.0)
    };
    let total = semi_infinite(scale, XI_TOL, &integrand)?;
    Ok((HBAR / (4.0 * PI * PI * EPSILON_0) * total).abs())
}
