use std::f64::consts::PI;

use super::{xi_scale, SphereSystem};
use crate::constants::{EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::materials::{DrudeLorentzModel, PolarizabilityModel};
use crate::quad::semi_infinite;
use crate::Result;

const TIGHT: f64 = 1e-8;

/// Half-space constant `C3` in J·m³, so that `U = -C3 / z^3` near a flat
/// surface of the sphere material.
pub fn c3_halfspace(sphere: &DrudeLorentzModel, atom: &PolarizabilityModel) -> Result<f64> {
    let Some(scale) = atom.dominant_frequency() else {
        return Ok(0.0);
    };
    let v = semi_infinite(scale, TIGHT, &|xi| {
        let e = sphere.eps_imag(xi);
        Ok(atom.alpha(xi) * (e - 1.0) / (e + 1.0))
    })?;
    Ok(HBAR / (16.0 * PI * PI * EPSILON_0) * v)
}

/// Small-sphere limits of the potential, all in joules.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticPotentials {
    /// dipole term with full retardation
    pub small_sphere: f64,
    /// its van der Waals limit, `r^-6`
    pub small_sphere_nonretarded: f64,
    /// its Casimir limit, `r^-7`
    pub small_sphere_retarded: f64,
}

pub fn asymptotic_potentials(r: f64, sys: &SphereSystem) -> Result<AsymptoticPotentials> {
    sys.check_outside(r)?;
    let Some(scale) = xi_scale(&sys.atom, r) else {
        return Ok(AsymptoticPotentials {
            small_sphere: 0.0,
            small_sphere_nonretarded: 0.0,
            small_sphere_retarded: 0.0,
        });
    };
    let clausius = |xi: f64| {
        let e = sys.sphere.eps_imag(xi);
        (e - 1.0) / (e + 2.0)
    };
    let geometry = sys.radius.powi(3) / r.powi(6);

    let retarded_integral = semi_infinite(scale, TIGHT, &|xi| {
        let u = xi * r / SPEED_OF_LIGHT;
        let poly = 3.0 + u * (6.0 + u * (5.0 + u * (2.0 + u)));
        Ok(sys.atom.alpha(xi) * clausius(xi) * (-2.0 * u).exp() * poly)
    })?;
    let small_sphere = -HBAR / (4.0 * PI * PI * EPSILON_0) * geometry * retarded_integral;

    let nr_scale = sys.atom.dominant_frequency().unwrap_or(scale);
    let plain = semi_infinite(nr_scale, TIGHT, &|xi| Ok(sys.atom.alpha(xi) * clausius(xi)))?;
    let small_sphere_nonretarded = -3.0 * HBAR / (4.0 * PI * PI * EPSILON_0) * geometry * plain;

    let small_sphere_retarded = -23.0 * HBAR * SPEED_OF_LIGHT / (16.0 * PI * PI * EPSILON_0)
        * sys.radius.powi(3)
        / r.powi(7)
        * sys.atom.alpha(0.0)
        * clausius(0.0);

    Ok(AsymptoticPotentials {
        small_sphere,
        small_sphere_nonretarded,
        small_sphere_retarded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(radius: f64) -> SphereSystem {
        SphereSystem::new(
            radius,
            DrudeLorentzModel::silica(),
            PolarizabilityModel::indium(),
            10,
        )
        .unwrap()
    }

    #[test]
    fn c3_of_silica_and_indium() {
        let c3 =
            c3_halfspace(&DrudeLorentzModel::silica(), &PolarizabilityModel::indium()).unwrap();
        assert!(((c3 - 9.77e-50) / 9.77e-50).abs() < 0.02, "{c3:e}");
    }

    #[test]
    fn vacuum_has_no_c3() {
        let c3 =
            c3_halfspace(&DrudeLorentzModel::vacuum(), &PolarizabilityModel::indium()).unwrap();
        assert_eq!(c3, 0.0);
    }

    #[test]
    fn perfect_mirror_limit_from_below() {
        let atom = PolarizabilityModel::indium();
        let mirror = HBAR / (16.0 * PI * PI * EPSILON_0)
            * semi_infinite(6e15, 1e-10, &|xi| Ok(atom.alpha(xi))).unwrap();
        let mut prev = 0.0;
        for k in 0..6 {
            let model = DrudeLorentzModel::silica().scaled_strength(10f64.powi(2 * k));
            let c3 = c3_halfspace(&model, &atom).unwrap();
            assert!(c3 > prev && c3 < mirror);
            prev = c3;
        }
        assert!((prev / mirror - 1.0).abs() < 1e-3, "{}", prev / mirror);
    }

    #[test]
    fn nonretarded_limit_of_small_sphere() {
        // the retardation correction falls off as (omega r / c)^2
        let near = asymptotic_potentials(3e-9, &system(0.3e-9)).unwrap();
        let ratio = near.small_sphere / near.small_sphere_nonretarded;
        assert!((ratio - 1.0).abs() < 0.01, "{ratio}");
        let far = asymptotic_potentials(30e-9, &system(3e-9)).unwrap();
        let ratio_far = far.small_sphere / far.small_sphere_nonretarded;
        assert!(ratio_far < ratio);
    }

    #[test]
    fn retarded_limit_of_small_sphere() {
        let a = asymptotic_potentials(1e-3, &system(50e-9)).unwrap();
        let ratio = a.small_sphere / a.small_sphere_retarded;
        assert!((ratio - 1.0).abs() < 0.02, "{ratio}");
    }

    #[test]
    fn retarded_power_law() {
        let sys = system(50e-9);
        let a = asymptotic_potentials(1e-6, &sys)
            .unwrap()
            .small_sphere_retarded;
        let b = asymptotic_potentials(2e-6, &sys)
            .unwrap()
            .small_sphere_retarded;
        assert!(a < 0.0);
        assert!((b / a - 2f64.powi(-7)).abs() < 1e-15);
    }
}
