use std::f64::consts::PI;

use num_complex::Complex64;

use super::Scene;
use crate::eikonal::{PhaseInterpolator, PhaseProfile};
use crate::{Error, Result};

/// Largest CP phase change allowed across one integration panel, rad.
const MAX_PHASE_STEP: f64 = 0.02;
/// Below this total phase advance a panel uses the Taylor series.
const SMALL_THETA: f64 = 0.1;

/// The part `[enter, exit]` of a ray (`rho_bar >= 0`) lying inside a circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chord {
    pub enter: f64,
    pub exit: f64,
}

/// Where the ray at angle `theta` from the shifted origin runs inside the
/// circle of radius `r_circle` whose centre lies a distance `c0` along
/// `theta = 0`.
///
/// Roots of `rho^2 - 2 rho c0 cos(theta) + c0^2 - r^2 = 0`. When the origin
/// is inside the circle `enter` is 0 and only the exit is a true crossing.
pub fn ray_intersections(theta: f64, c0: f64, r_circle: f64) -> Option<Chord> {
    let (sin, cos) = theta.sin_cos();
    let along = c0 * cos;
    let disc = r_circle * r_circle - (c0 * sin).powi(2);
    if !(disc > 0.0) || r_circle <= 0.0 {
        return None;
    }
    let root = disc.sqrt();
    let exit = along + root;
    if exit <= 0.0 {
        return None;
    }
    // the product of the roots is c0^2 - r^2; avoids cancellation in enter
    let enter = ((c0 - r_circle) * (c0 + r_circle) / exit).max(0.0);
    Some(Chord { enter, exit })
}

/// `e^{i kappa s^2} / (2 i kappa)`, the antiderivative of `s e^{i kappa s^2}`.
fn endpoint(s: f64, kappa: f64) -> Complex64 {
    Complex64::from_polar(1.0, kappa * s * s) / Complex64::new(0.0, 2.0 * kappa)
}

/// `int_{rho_start}^inf rho e^{i kappa rho^2} d rho` with the oscillating
/// term at infinity dropped.
pub fn free_segment_amplitude(rho_start: f64, scene: &Scene) -> Complex64 {
    -endpoint(rho_start, scene.kappa())
}

/// `int_0^1 e^{i t s} ds`, by its Taylor series for small `t`.
fn panel_weight(t: f64) -> Complex64 {
    if t.abs() < SMALL_THETA {
        let it = Complex64::new(0.0, t);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for n in 0..12 {
            sum += term / (n as f64 + 1.0);
            term *= it / (n as f64 + 1.0);
        }
        sum
    } else {
        (Complex64::from_polar(1.0, t) - 1.0) / Complex64::new(0.0, t)
    }
}

struct RayGeometry<'a> {
    radius: f64,
    kappa: f64,
    c0: f64,
    cos: f64,
    phase: Option<&'a PhaseInterpolator>,
    step: f64,
}

/// A node of the annulus integration: `rho`, CP phase, and
/// `e^{i(kappa rho^2 + dphi)}`.
#[derive(Clone, Copy)]
struct Node {
    rho: f64,
    phi: f64,
    wave: Complex64,
}

impl RayGeometry<'_> {
    fn cp_phase(&self, rho: f64) -> Result<f64> {
        let Some(p) = self.phase else { return Ok(0.0) };
        let d2 = rho * rho + self.c0 * self.c0 - 2.0 * rho * self.c0 * self.cos;
        let a = d2.max(0.0).sqrt() - self.radius;
        if !(a > 0.0) {
            return Err(Error::Geometry(format!(
                "CP annulus point at grazing distance {a:e} m is not outside the sphere"
            )));
        }
        Ok(p.phase_at(a))
    }

    fn node(&self, rho: f64) -> Result<Node> {
        let phi = self.cp_phase(rho)?;
        Ok(Node {
            rho,
            phi,
            wave: Complex64::from_polar(1.0, self.kappa * rho * rho + phi),
        })
    }

    /// `int_{s1}^{s2} rho e^{i(kappa rho^2 + dphi)} d rho` with `dphi`
    /// piecewise-linear in `u = rho^2` and each panel integrated exactly.
    fn annulus(&self, s1: f64, s2: f64) -> Result<Complex64> {
        if s2 <= s1 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let n = ((s2 - s1) / self.step).ceil().max(1.0) as usize;
        let h = (s2 - s1) / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut na = self.node(s1)?;
        for k in 1..=n {
            let nb = self.node(if k == n { s2 } else { s1 + k as f64 * h })?;
            let jump = (nb.phi - na.phi).abs();
            if jump > MAX_PHASE_STEP {
                let m = (jump / MAX_PHASE_STEP).ceil() as usize;
                let hh = (nb.rho - na.rho) / m as f64;
                let mut sa = na;
                for j in 1..m {
                    let sb = self.node(na.rho + j as f64 * hh)?;
                    acc += self.panel(&sa, &sb);
                    sa = sb;
                }
                acc += self.panel(&sa, &nb);
            } else {
                acc += self.panel(&na, &nb);
            }
            na = nb;
        }
        Ok(acc)
    }

    /// `(du/2) int_0^1 e^{i(alpha + theta s)} ds` for the panel between two
    /// nodes, `theta` being the total phase advance across it.
    fn panel(&self, a: &Node, b: &Node) -> Complex64 {
        let du = (b.rho - a.rho) * (b.rho + a.rho);
        let theta = self.kappa * du + (b.phi - a.phi);
        let integral = if theta.abs() < SMALL_THETA {
            a.wave * panel_weight(theta)
        } else {
            (b.wave - a.wave) / Complex64::new(0.0, theta)
        };
        0.5 * du * integral
    }
}

fn geometry<'a>(
    scene: &Scene,
    phase: Option<&'a PhaseInterpolator>,
    theta: f64,
    c0: f64,
) -> RayGeometry<'a> {
    RayGeometry {
        radius: scene.radius,
        kappa: scene.kappa(),
        c0,
        cos: theta.cos(),
        phase,
        step: scene.cp_step,
    }
}

fn cp_segment(
    theta: f64,
    c0: f64,
    scene: &Scene,
    phase: Option<&PhaseInterpolator>,
) -> Result<Complex64> {
    let (r_in, r_out) = scene.circles();
    let Some(outer) = ray_intersections(theta, c0, r_out) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let geo = geometry(scene, phase, theta, c0);
    match ray_intersections(theta, c0, r_in) {
        Some(inner) => {
            Ok(geo.annulus(outer.enter, inner.enter)? + geo.annulus(inner.exit, outer.exit)?)
        }
        None => geo.annulus(outer.enter, outer.exit),
    }
}

/// Contribution of the CP annulus to the radial integral along one ray:
/// the stretches inside the outer circle but outside the opaque disk.
pub fn cp_segment_amplitude(theta: f64, c0: f64, scene: &Scene) -> Result<Complex64> {
    let table = scene.phase.as_ref().map(PhaseProfile::interpolator);
    cp_segment(theta, c0, scene, table.as_ref())
}

/// Whole radial integral along one ray: free stretches plus annulus.
fn ray_amplitude(
    theta: f64,
    c0: f64,
    scene: &Scene,
    phase: Option<&PhaseInterpolator>,
) -> Result<Complex64> {
    let kappa = scene.kappa();
    let (_, r_out) = scene.circles();
    let outer = if scene.radius > 0.0 {
        ray_intersections(theta, c0, r_out)
    } else {
        None
    };
    let Some(outer) = outer else {
        return Ok(-endpoint(0.0, kappa));
    };
    let mut acc = -endpoint(outer.exit, kappa);
    if outer.enter > 0.0 {
        acc += endpoint(outer.enter, kappa) - endpoint(0.0, kappa);
    }
    if phase.is_some() {
        acc += cp_segment(theta, c0, scene, phase)?;
    }
    Ok(acc)
}

/// `A(P)` for a detection point at distance `rho_p` from the axis.
///
/// `N_theta` equally spaced rays; the integrand is even in `theta`, so only
/// half of them are evaluated. Summation order is fixed.
pub fn point_amplitude(rho_p: f64, scene: &Scene) -> Result<Complex64> {
    let c0 = scene.origin_offset(rho_p);
    let table = scene.phase.as_ref().map(PhaseProfile::interpolator);
    let phase = table.as_ref();
    let n = scene.n_theta;
    let dtheta = 2.0 * PI / n as f64;
    let sum = if c0 == 0.0 {
        // every ray sees the same circles
        n as f64 * ray_amplitude(0.0, c0, scene, phase)?
    } else {
        let mut sum = ray_amplitude(0.0, c0, scene, phase)?;
        for k in 1..=((n - 1) / 2) {
            sum += 2.0 * ray_amplitude(k as f64 * dtheta, c0, scene, phase)?;
        }
        if n.is_multiple_of(2) {
            sum += ray_amplitude(PI, c0, scene, phase)?;
        }
        sum
    };
    let prefactor = Complex64::new(0.0, -1.0 / (scene.beam.wavelength * scene.g * scene.b));
    Ok(prefactor * dtheta * sum)
}

/// Amplitude of the unobstructed wave, by the same ray machinery.
pub fn free_amplitude(scene: &Scene) -> Complex64 {
    let prefactor = Complex64::new(0.0, -1.0 / (scene.beam.wavelength * scene.g * scene.b));
    prefactor * 2.0 * PI * -endpoint(0.0, scene.kappa())
}

/// `|A(P)|^2 / |A_free|^2`.
pub fn relative_intensity(rho_p: f64, scene: &Scene) -> Result<f64> {
    let a = point_amplitude(rho_p, scene)?;
    Ok(a.norm_sqr() / free_amplitude(scene).norm_sqr())
}
