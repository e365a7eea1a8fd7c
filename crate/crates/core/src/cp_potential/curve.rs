use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{c3_halfspace, cp_potential_full, SphereSystem};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    FullSeries,
    HalfSpaceAsymptote,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::FullSeries => "full-series",
            Method::HalfSpaceAsymptote => "half-space-asymptote",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// centre distance, m
    pub r: f64,
    /// potential, J
    pub u: f64,
    pub method: Method,
}

/// Tabulated potential: the full series outside `r_stitch`, `-C3/z^3`
/// inside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialCurve {
    pub radius: f64,
    pub c3: f64,
    pub points: Vec<CurvePoint>,
    /// Smallest centre distance evaluated with the full series; infinite
    /// when the whole curve is half-space.
    pub r_stitch: f64,
    /// `|U_BNR/U_full - 1|` where the curve hands over to the half-space
    /// form. Exceeds the stitch tolerance only when the truncated series
    /// never reaches it.
    pub joint_mismatch: f64,
}

impl PotentialCurve {
    /// Potential at surface distance `z`.
    ///
    /// Interpolates `ln|U|` linearly in `ln z` between samples. Below the
    /// grid the half-space form is used, above it the last two samples are
    /// extended as a power law.
    pub fn at_surface_distance(&self, z: f64) -> f64 {
        let zs = |p: &CurvePoint| p.r - self.radius;
        let n = self.points.len();
        if n == 0 || z <= zs(&self.points[0]) {
            return -self.c3 / z.powi(3);
        }
        let idx = self.points.partition_point(|p| zs(p) < z);
        let (a, b) = if idx >= n {
            if n == 1 {
                let p = self.points[0];
                return p.u * (zs(&p) / z).powi(3);
            }
            (self.points[n - 2], self.points[n - 1])
        } else {
            (self.points[idx - 1], self.points[idx])
        };
        let (za, zb) = (zs(&a).ln(), zs(&b).ln());
        let (ua, ub) = ((-a.u).ln(), (-b.u).ln());
        let t = (z.ln() - za) / (zb - za);
        -(ua + t * (ub - ua)).exp()
    }

    /// Potential along a straight line at axis distance `rho`, a distance
    /// `x` from the point of closest approach.
    pub fn lateral(&self, x: f64, rho: f64) -> f64 {
        let a = rho - self.radius;
        let h = (rho * rho + x * x).sqrt();
        self.at_surface_distance(a + x * x / (h + rho))
    }

    /// `r[m] U[J] method`, one row per sample.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# sphere radius R = {:e} m", self.radius);
        let _ = writeln!(out, "# C3 = {:e} J m^3", self.c3);
        let _ = writeln!(out, "# r_stitch = {:e} m", self.r_stitch);
        let _ = writeln!(out, "# joint mismatch = {:e}", self.joint_mismatch);
        let _ = writeln!(out, "# r[m] U[J] method");
        for p in &self.points {
            let _ = writeln!(out, "{:.10e} {:.10e} {}", p.r, p.u, p.method.label());
        }
        out
    }
}

/// Production potential on `r_grid`: the full series is evaluated from the
/// outermost radius inwards until it agrees with `-C3/z^3` to within
/// `stitch_tol`; from that radius in, the half-space form is used.
///
/// If truncation at `l_max` makes the mismatch grow again before the band
/// is reached, the switch happens at the point of best agreement and the
/// achieved mismatch is recorded in `joint_mismatch`.
pub fn stitched_potential(sys: &SphereSystem, r_grid: &[f64]) -> Result<PotentialCurve> {
    sys.validate()?;
    for w in r_grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Config(
                "radial grid must be strictly increasing".into(),
            ));
        }
    }
    for &r in r_grid {
        sys.check_outside(r)?;
    }
    let c3 = c3_halfspace(&sys.sphere, &sys.atom)?;
    let half_space = |r: f64| -c3 / (r - sys.radius).powi(3);

    let mut points: Vec<CurvePoint> = Vec::with_capacity(r_grid.len());
    let mut switched = sys.stitch_tol >= 1.0;
    let mut r_stitch = f64::INFINITY;
    let mut joint_mismatch = f64::INFINITY;
    for &r in r_grid.iter().rev() {
        let bnr = half_space(r);
        if !switched {
            let full = cp_potential_full(r, sys)?;
            let mismatch = (bnr / full - 1.0).abs();
            if mismatch > sys.stitch_tol && mismatch <= joint_mismatch {
                points.push(CurvePoint {
                    r,
                    u: full,
                    method: Method::FullSeries,
                });
                r_stitch = r;
                joint_mismatch = mismatch;
                continue;
            }
            joint_mismatch = joint_mismatch.min(mismatch);
            switched = true;
        }
        points.push(CurvePoint {
            r,
            u: bnr,
            method: Method::HalfSpaceAsymptote,
        });
    }
    points.reverse();
    Ok(PotentialCurve {
        radius: sys.radius,
        c3,
        points,
        r_stitch,
        joint_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{DrudeLorentzModel, PolarizabilityModel};

    fn system(radius: f64, l_max: usize) -> SphereSystem {
        SphereSystem::new(
            radius,
            DrudeLorentzModel::silica(),
            PolarizabilityModel::indium(),
            l_max,
        )
        .unwrap()
    }

    fn grid(radius: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| radius + 1e-9 * 10f64.powf(3.0 * i as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn unit_tolerance_is_pure_half_space() {
        let sys = system(100e-9, 50).with_stitch_tol(1.0).unwrap();
        let curve = stitched_potential(&sys, &grid(100e-9, 12)).unwrap();
        assert!(curve
            .points
            .iter()
            .all(|p| p.method == Method::HalfSpaceAsymptote));
        assert!(curve.r_stitch.is_infinite());
    }

    #[test]
    fn stitched_curve_is_monotone_and_switches_once() {
        let sys = system(100e-9, 400);
        let curve = stitched_potential(&sys, &grid(100e-9, 24)).unwrap();
        let mut seen_full = false;
        for w in curve.points.windows(2) {
            assert!(w[0].u < w[1].u && w[1].u < 0.0);
            if w[0].method == Method::FullSeries {
                seen_full = true;
                assert_eq!(w[1].method, Method::FullSeries);
            }
        }
        assert!(seen_full || curve.points[0].method == Method::FullSeries);
        let first_full = curve
            .points
            .iter()
            .find(|p| p.method == Method::FullSeries)
            .unwrap();
        assert_eq!(first_full.r, curve.r_stitch);
    }

    #[test]
    fn interpolation_reproduces_samples_and_power_laws() {
        let curve = PotentialCurve {
            radius: 1e-7,
            c3: 1e-49,
            points: (1..=5)
                .map(|k| {
                    let z = 1e-9 * k as f64;
                    CurvePoint {
                        r: 1e-7 + z,
                        u: -1e-49 / z.powi(3),
                        method: Method::HalfSpaceAsymptote,
                    }
                })
                .collect(),
            r_stitch: f64::INFINITY,
            joint_mismatch: f64::INFINITY,
        };
        for z in [0.5e-9, 2.5e-9, 3e-9, 9e-9] {
            let u = curve.at_surface_distance(z);
            assert!((u / (-1e-49 / z.powi(3)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_unsorted_grid() {
        let sys = system(100e-9, 50);
        assert!(stitched_potential(&sys, &[120e-9, 110e-9]).is_err());
        assert!(stitched_potential(&sys, &[90e-9, 110e-9]).is_err());
    }
}
