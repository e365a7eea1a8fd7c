//! Eikonal (WKB) phase shifts imprinted by the potential on a matter wave
//! passing the sphere.

mod profile;

pub use profile::{default_grazing_grid, AnnulusRule, PhaseInterpolator, PhaseProfile};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, PLANCK};
use crate::{Error, Result};

/// Default phase thresholds defining the CP annulus.
pub const PHI_INNER: f64 = 4.0 * PI;
pub const PHI_OUTER: f64 = PI / 1000.0;

/// A monochromatic atomic beam.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Beam {
    /// kg
    pub mass: f64,
    /// m/s
    pub speed: f64,
    /// de Broglie wavelength `h / (m v)`, m
    pub wavelength: f64,
}

impl Beam {
    pub fn new(mass: f64, speed: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::domain("particle mass", mass));
        }
        if !(speed > 0.0) || !speed.is_finite() {
            return Err(Error::domain("beam speed", speed));
        }
        Ok(Beam {
            mass,
            speed,
            wavelength: PLANCK / (mass * speed),
        })
    }

    pub fn from_wavelength(mass: f64, wavelength: f64) -> Result<Self> {
        if !(wavelength > 0.0) || !wavelength.is_finite() {
            return Err(Error::domain("de Broglie wavelength", wavelength));
        }
        Beam::new(mass, PLANCK / (mass * wavelength))
    }

    pub fn kinetic_energy(&self) -> f64 {
        0.5 * self.mass * self.speed * self.speed
    }
}

/// WKB validity ratio `|d/dz sqrt(2m(E-U))| / (2m(E-U)/hbar)` at surface
/// distance `z`, by central differences on `potential(z)`. Values far below
/// 1 mean the eikonal treatment is safe.
pub fn wkb_validity(potential: &dyn Fn(f64) -> f64, beam: &Beam, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain("surface distance", z));
    }
    let e = beam.kinetic_energy();
    let h = 1e-4 * z;
    let momentum = |z: f64| -> Result<f64> {
        let u = potential(z);
        if !(e > u) {
            return Err(Error::TurningPoint {
                energy: e,
                potential: u,
            });
        }
        Ok((2.0 * beam.mass * (e - u)).sqrt())
    };
    let (lo, mid, hi) = (momentum(z - h)?, momentum(z)?, momentum(z + h)?);
    let slope = (hi - lo) / (2.0 * h);
    Ok(slope.abs() / (mid * mid / HBAR))
}

/// Relative size of the neglected tail beyond the integration window.
const TAIL_TOL: f64 = 1e-7;
const MAX_HALVINGS: usize = 14;

/// `-(1/hbar v) int U(x, rho) dx` along the straight line at `rho = R + a`.
///
/// The integrand is symmetric in `x`. It is sampled on `x = w sinh t`, with
/// `w = sqrt(a (2R + a))` the width of the potential peak, so points crowd
/// near closest approach. The `t` grid is halved until the estimate settles.
pub fn eikonal_phase_numeric(
    potential: &(dyn Fn(f64, f64) -> f64 + Sync),
    a: f64,
    radius: f64,
    beam: &Beam,
) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain("grazing distance", a));
    }
    let rho = radius + a;
    let w = (a * (2.0 * radius + a)).sqrt();
    let f = |t: f64| {
        let x = w * t.sinh();
        potential(x, rho) * w * t.cosh()
    };
    let f0 = f(0.0);

    // extend the window until the power-law tail is negligible
    let mut t_max = 4.0;
    let mut crude = integrate_trapezoid(&f, f0, t_max, 0.05);
    loop {
        let x = w * t_max.sinh();
        let tail = (potential(x, rho) * x).abs();
        if tail <= TAIL_TOL * crude.abs() || crude == 0.0 && tail == 0.0 {
            break;
        }
        t_max += 2.0;
        if t_max > 60.0 {
            return Err(Error::Quadrature {
                partial: -2.0 * crude / (HBAR * beam.speed),
                rel_err: tail / crude.abs(),
            });
        }
        crude = integrate_trapezoid(&f, f0, t_max, 0.05);
    }

    let mut step = 0.05;
    let mut prev = integrate_trapezoid(&f, f0, t_max, step);
    let mut rel = f64::INFINITY;
    for _ in 0..MAX_HALVINGS {
        step *= 0.5;
        let cur = integrate_trapezoid(&f, f0, t_max, step);
        rel = if cur == 0.0 {
            (cur - prev).abs()
        } else {
            ((cur - prev) / cur).abs()
        };
        prev = cur;
        if rel < 1e-11 {
            break;
        }
    }
    if rel > 1e-8 {
        return Err(Error::Quadrature {
            partial: -2.0 * prev / (HBAR * beam.speed),
            rel_err: rel,
        });
    }
    Ok(-2.0 * prev / (HBAR * beam.speed))
}

fn integrate_trapezoid(f: &dyn Fn(f64) -> f64, f0: f64, t_max: f64, step: f64) -> f64 {
    let n = (t_max / step).ceil() as usize;
    let h = t_max / n as f64;
    let mut acc = 0.5 * f0;
    for k in 1..n {
        acc += f(k as f64 * h);
    }
    acc += 0.5 * f(t_max);
    acc * h
}

/// Closed-form phase for `U = -C3/z^3` past a sphere of radius `R`.
pub fn eikonal_phase_analytic(a: f64, radius: f64, c3: f64, beam: &Beam) -> f64 {
    let s = (a * (2.0 * radius + a)).sqrt();
    let pre = c3 / (2.0 * HBAR * beam.speed) / (s * s * s * s);
    let poly = 6.0 * radius * radius + 8.0 * radius * a + 4.0 * a * a;
    let arc = 3.0 * radius * (radius + a).powi(2) / s * (2.0 * (radius / s).atan() + PI);
    pre * (poly + arc)
}

/// Leading `a << R` behaviour of [`eikonal_phase_analytic`]: `C52 a^{-5/2}`.
pub fn phase_power_law(a: f64, c52: f64) -> f64 {
    c52 / a.powf(2.5)
}

/// `C52 = (C3 / 2 hbar v) 3 pi sqrt(R) / (2 sqrt 2)`, in m^{5/2}.
pub fn c52(radius: f64, c3: f64, beam: &Beam) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::domain("sphere radius", radius));
    }
    Ok(c3 / (2.0 * HBAR * beam.speed) * 3.0 * PI * radius.sqrt() / (2.0 * 2f64.sqrt()))
}

/// Axis distances `(R_i, R_o)` where the power-law phase equals `phi_hi`
/// and `phi_lo`.
pub fn annulus_radii(c52: f64, radius: f64, phi_hi: f64, phi_lo: f64) -> Result<(f64, f64)> {
    if !(phi_hi > phi_lo && phi_lo > 0.0) {
        return Err(Error::Config(format!(
            "annulus thresholds need phi_hi > phi_lo > 0, got {phi_hi} and {phi_lo}"
        )));
    }
    let at = |phi: f64| radius + (c52 / phi).powf(0.4);
    Ok((at(phi_hi), at(phi_lo)))
}

/// Classical capture radius: the smallest grazing distance whose orbit in
/// `U = -C3/(s - R)^3` still has a turning point.
///
/// An orbit of impact parameter `b` turns where `E b^2 = s^2 (E - U(s))`, so
/// it escapes capture iff `b^2 >= min_s s^2 (E - U(s)) / E`. The minimum is
/// located by golden-section search in `ln(s - R)`.
pub fn capture_impact_parameter(radius: f64, c3: f64, beam: &Beam) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::domain("sphere radius", radius));
    }
    if !(c3 >= 0.0) {
        return Err(Error::domain("C3", c3));
    }
    if c3 == 0.0 {
        return Ok(0.0);
    }
    let e = beam.kinetic_energy();
    // F(z) / E with s = R + z
    let barrier = |lnz: f64| {
        let z = lnz.exp();
        (radius + z).powi(2) * (1.0 + c3 / (e * z.powi(3)))
    };
    let (lo, hi) = ((1e-18f64).ln(), (1e3 * radius).ln());
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (barrier(c), barrier(d));
    while b - a > 1e-12 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = barrier(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = barrier(d);
        }
    }
    let best = 0.5 * (a + b);
    if best - lo < 1e-6 || hi - best < 1e-6 {
        return Err(Error::Bracket {
            lo: lo.exp(),
            hi: hi.exp(),
        });
    }
    Ok(barrier(best).sqrt() - radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ATOMIC_MASS_UNIT;

    const C3: f64 = 9.77e-50;

    fn beam() -> Beam {
        Beam::new(114.8 * ATOMIC_MASS_UNIT, 521.0).unwrap()
    }

    #[test]
    fn de_broglie_relation() {
        let b = beam();
        assert!((b.wavelength * b.mass * b.speed / PLANCK - 1.0).abs() < 1e-12);
        let c = Beam::from_wavelength(b.mass, b.wavelength).unwrap();
        assert!((c.speed / b.speed - 1.0).abs() < 1e-12);
        assert!(Beam::new(1.0, 0.0).is_err());
    }

    #[test]
    fn wkb_ratio_free_and_near_surface() {
        let b = beam();
        assert_eq!(wkb_validity(&|_| 0.0, &b, 1e-9).unwrap(), 0.0);
        let bnr = |z: f64| -C3 / z.powi(3);
        let mut prev = 0.0;
        for z in [50e-9, 10e-9, 3e-9, 1e-9, 0.3e-9] {
            let r = wkb_validity(&bnr, &b, z).unwrap();
            assert!(r > prev && r < 1e-3);
            prev = r;
        }
        assert!(matches!(
            wkb_validity(&|_| 1.0, &b, 1e-9),
            Err(Error::TurningPoint { .. })
        ));
    }

    #[test]
    fn numeric_phase_matches_closed_form() {
        let b = beam();
        let radius = 50e-9;
        let bnr = move |x: f64, rho: f64| {
            let z = (rho - radius) + x * x / ((rho * rho + x * x).sqrt() + rho);
            -C3 / z.powi(3)
        };
        for a in [0.3e-9, 1e-9, 5e-9, 40e-9, 400e-9] {
            let num = eikonal_phase_numeric(&bnr, a, radius, &b).unwrap();
            let ana = eikonal_phase_analytic(a, radius, C3, &b);
            assert!((num / ana - 1.0).abs() < 1e-6, "a={a}: {num} vs {ana}");
        }
        assert_eq!(
            eikonal_phase_numeric(&|_, _| 0.0, 1e-9, radius, &b).unwrap(),
            0.0
        );
    }

    #[test]
    fn slowly_decaying_potential_is_rejected() {
        let b = beam();
        let slow = |x: f64, rho: f64| -1e-30 / (x * x + rho * rho).sqrt();
        assert!(matches!(
            eikonal_phase_numeric(&slow, 1e-9, 50e-9, &b),
            Err(Error::Quadrature { .. })
        ));
    }

    #[test]
    fn closed_form_limits() {
        let b = beam();
        let radius = 50e-9;
        let k = c52(radius, C3, &b).unwrap();
        let a = radius / 100.0;
        let ratio = eikonal_phase_analytic(a, radius, C3, &b) / phase_power_law(a, k);
        assert!((ratio - 1.0).abs() < 0.02, "{ratio}");
        let near = eikonal_phase_analytic(1e-9, radius, C3, &b);
        let far = eikonal_phase_analytic(1.0, radius, C3, &b);
        assert!(far > 0.0 && far < 1e-15 * near);
    }

    #[test]
    fn c52_scales_with_root_radius() {
        let b = beam();
        let one = c52(50e-9, C3, &b).unwrap();
        let four = c52(200e-9, C3, &b).unwrap();
        assert!((four / one - 2.0).abs() < 1e-14);
        assert!(((one - 6.622e-22) / 6.622e-22).abs() < 0.01);
    }

    #[test]
    fn annulus_and_capture_for_small_sphere() {
        let b = beam();
        let radius = 50e-9;
        let k = c52(radius, C3, &b).unwrap();
        let (ri, ro) = annulus_radii(k, radius, PHI_INNER, PHI_OUTER).unwrap();
        assert!((ri - 51.2e-9).abs() < 0.2e-9 && (ro - 83.8e-9).abs() < 0.2e-9);
        let amin = capture_impact_parameter(radius, C3, &b).unwrap();
        assert!((amin - 1.0e-9).abs() < 0.1e-9);
        assert!(amin < ri - radius);
        assert!(annulus_radii(k, radius, 1.0, 2.0).is_err());
    }

    #[test]
    fn no_force_no_capture() {
        assert_eq!(capture_impact_parameter(50e-9, 0.0, &beam()).unwrap(), 0.0);
        let tiny = capture_impact_parameter(50e-9, 1e-70, &beam()).unwrap();
        assert!(tiny < 1e-10);
    }
}
