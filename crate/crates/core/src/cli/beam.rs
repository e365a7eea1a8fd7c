use std::f64::consts::PI;

use crate::constants::{BOLTZMANN, HBAR};
use crate::eikonal::Beam;
use crate::materials::PolarizabilityModel;
use crate::{Error, Result};

/// Beam at the mean thermal speed `sqrt(8 k_B T / (pi m))` of an oven at
/// temperature `t_s`.
pub fn beam_from_temperature(t_s: f64, mass: f64) -> Result<Beam> {
    if !(t_s > 0.0) || !t_s.is_finite() {
        return Err(Error::domain("source temperature", t_s));
    }
    let speed = (8.0 * BOLTZMANN * t_s / (PI * mass)).sqrt();
    Beam::new(mass, speed)
}

/// Thermal population factor `exp(-hbar w01 / k_B T)` of the lowest
/// transition; 0 for an atom without transitions.
pub fn boltzmann_excited_fraction(atom: &PolarizabilityModel, t_s: f64) -> f64 {
    let Some(w) = atom.lowest_frequency() else {
        return 0.0;
    };
    if t_s <= 0.0 {
        return 0.0;
    }
    (-HBAR * w / (BOLTZMANN * t_s)).exp()
}
