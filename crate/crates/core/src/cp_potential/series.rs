use std::f64::consts::PI;

use super::mie::SphereModes;
use super::{xi_scale, SphereSystem};
use crate::constants::{EPSILON_0, HBAR, MU_0, SPEED_OF_LIGHT};
use crate::quad::{semi_infinite_par, DEFAULT_REL_TOL};
use crate::specfun::modified_sph_bessel;
use crate::Result;

/// Terms below this fraction of the running sum count as negligible.
const TERM_REL: f64 = 1e-8;
/// Consecutive negligible terms needed to stop the l-series.
const QUIET_RUN: usize = 10;
/// Beyond this exponent of `e^{-2 xi z / c}` the integrand is zero in f64.
const DECAY_CUTOFF: f64 = 1500.0;

/// Sum of positive terms `term(1), term(2), ...` with the shared stopping
/// rule, capped at `l_max`.
fn series(l_max: usize, mut term: impl FnMut(usize) -> f64) -> f64 {
    let mut sum = 0.0;
    let mut quiet = 0;
    for l in 1..=l_max {
        let t = term(l);
        sum += t;
        if t.abs() <= TERM_REL * sum.abs() {
            quiet += 1;
            if quiet >= QUIET_RUN {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    sum
}

/// Spectral density of the full potential, so that
/// `U(r) = int_0^inf potential_integrand(r, xi) d xi`.
pub fn potential_integrand(r: f64, xi: f64, sys: &SphereSystem) -> Result<f64> {
    sys.check_outside(r)?;
    let alpha = sys.atom.alpha(xi);
    if alpha == 0.0 || 2.0 * xi * (r - sys.radius) / SPEED_OF_LIGHT > DECAY_CUTOFF {
        return Ok(0.0);
    }
    let modes = SphereModes::new(sys.l_max, xi, sys)?;
    let at = modified_sph_bessel(sys.l_max, xi * r / SPEED_OF_LIGHT)?;
    let trace = series(sys.l_max, |l| modes.factors(l, &at).trace_term());
    Ok(-HBAR * MU_0 / (8.0 * PI * PI * SPEED_OF_LIGHT) * xi.powi(3) * alpha * trace)
}

/// Full multipole-series potential at centre distance `r`, in joules.
pub fn cp_potential_full(r: f64, sys: &SphereSystem) -> Result<f64> {
    sys.check_outside(r)?;
    let Some(scale) = xi_scale(&sys.atom, r - sys.radius) else {
        return Ok(0.0);
    };
    semi_infinite_par(scale, DEFAULT_REL_TOL, &|xi| {
        potential_integrand(r, xi, sys)
    })
}

/// Non-retarded multipole series, free of Bessel functions.
pub fn cp_potential_nonretarded(r: f64, sys: &SphereSystem) -> Result<f64> {
    sys.check_outside(r)?;
    let Some(scale) = sys.atom.dominant_frequency() else {
        return Ok(0.0);
    };
    let q = sys.radius / r;
    let integrand = |xi: f64| -> Result<f64> {
        let eps = sys.sphere.eps_imag(xi);
        let mut weight = q.powi(3) / r.powi(3);
        let sum = series(sys.l_max, |l| {
            let lf = l as f64;
            let t = (2.0 * lf + 1.0) * (lf + 1.0) * weight * (eps - 1.0) / (eps + (lf + 1.0) / lf);
            weight *= q * q;
            t
        });
        Ok(sys.atom.alpha(xi) * sum)
    };
    let v = semi_infinite_par(scale, 1e-8, &integrand)?;
    Ok(-HBAR / (8.0 * PI * PI * EPSILON_0) * v)
}
