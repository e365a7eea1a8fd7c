use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    annulus_radii, c52, eikonal_phase_analytic, eikonal_phase_numeric, Beam, PHI_INNER, PHI_OUTER,
};
use crate::{Error, Result};

/// Eikonal phase tabulated against grazing distance `a`, with the CP
/// annulus it defines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseProfile {
    pub c3: f64,
    pub c52: f64,
    pub radius: f64,
    /// `(a [m], phase [rad])`, `a` increasing
    pub samples: Vec<(f64, f64)>,
    /// inner annulus radius, measured from the axis
    pub r_inner: f64,
    /// outer annulus radius, measured from the axis
    pub r_outer: f64,
    /// overall factor on the phase (1 for the physical profile)
    pub strength: f64,
    #[serde(default)]
    pub annulus: AnnulusRule,
}

/// How the annulus radii follow from a profile.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnnulusRule {
    /// thresholds applied to the `C52 a^{-5/2}` power law
    PowerLaw,
    /// thresholds applied to the tabulated samples themselves
    #[default]
    Samples,
}

/// Grazing distance where the log-log interpolant of `samples`, times
/// `strength`, equals `target`.
fn crossing(samples: &[(f64, f64)], strength: f64, target: f64) -> f64 {
    let goal = (target / strength).ln();
    let n = samples.len();
    let idx = samples
        .partition_point(|p| p.1 > target / strength)
        .clamp(1, n - 1);
    let (p, q) = (samples[idx - 1], samples[idx]);
    let t = (goal - p.1.ln()) / (q.1.ln() - p.1.ln());
    (p.0.ln() + t * (q.0.ln() - p.0.ln())).exp()
}

/// Log-log interpolation table built by [`PhaseProfile::interpolator`].
#[derive(Clone, Debug)]
pub struct PhaseInterpolator {
    a: Vec<f64>,
    ln_a: Vec<f64>,
    ln_phi: Vec<f64>,
    strength: f64,
}

impl PhaseInterpolator {
    pub fn phase_at(&self, a: f64) -> f64 {
        if self.strength == 0.0 {
            return 0.0;
        }
        let n = self.a.len();
        let idx = self.a.partition_point(|&x| x < a).clamp(1, n - 1);
        let (la, lb) = (self.ln_a[idx - 1], self.ln_a[idx]);
        let (pa, pb) = (self.ln_phi[idx - 1], self.ln_phi[idx]);
        let t = (a.ln() - la) / (lb - la);
        self.strength * (pa + t * (pb - pa)).exp()
    }
}

/// Logarithmic grazing-distance grid covering the annulus of any sphere up
/// to a few microns.
pub fn default_grazing_grid(radius: f64) -> Vec<f64> {
    let lo = 1e-11f64.ln();
    let hi = (10.0 * radius).max(1e-6).ln();
    let n = 240;
    (0..n)
        .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

impl PhaseProfile {
    pub fn from_samples(
        radius: f64,
        c3: f64,
        beam: &Beam,
        samples: Vec<(f64, f64)>,
    ) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Config(
                "a phase profile needs at least two samples".into(),
            ));
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Config("phase samples must have increasing a".into()));
            }
            if !(w[1].1 < w[0].1) {
                return Err(Error::Config(format!(
                    "phase must decrease with a (at a = {:e} m)",
                    w[1].0
                )));
            }
        }
        if !(samples[0].0 > 0.0) || samples.iter().any(|s| !(s.1 > 0.0)) {
            return Err(Error::Config(
                "phase samples must have a > 0 and phase > 0".into(),
            ));
        }
        let k = c52(radius, c3, beam)?;
        Ok(PhaseProfile {
            c3,
            c52: k,
            radius,
            r_inner: radius + crossing(&samples, 1.0, PHI_INNER),
            r_outer: radius + crossing(&samples, 1.0, PHI_OUTER),
            samples,
            strength: 1.0,
            annulus: AnnulusRule::Samples,
        })
    }

    /// Profile of the closed-form half-space phase. Its annulus follows the
    /// `C52 a^{-5/2}` power law.
    pub fn analytic(radius: f64, c3: f64, beam: &Beam, grid: &[f64]) -> Result<Self> {
        let samples = grid
            .iter()
            .map(|&a| (a, eikonal_phase_analytic(a, radius, c3, beam)))
            .collect();
        let p = Self::from_samples(radius, c3, beam, samples)?;
        let (r_inner, r_outer) = annulus_radii(p.c52, radius, PHI_INNER, PHI_OUTER)?;
        Ok(PhaseProfile {
            r_inner,
            r_outer,
            annulus: AnnulusRule::PowerLaw,
            ..p
        })
    }

    /// Profile of the numerically integrated phase of an arbitrary lateral
    /// potential `U(x, rho)`. The annulus is read off the samples.
    pub fn numeric(
        radius: f64,
        c3: f64,
        beam: &Beam,
        grid: &[f64],
        potential: &(dyn Fn(f64, f64) -> f64 + Sync),
    ) -> Result<Self> {
        let samples = grid
            .par_iter()
            .map(|&a| Ok((a, eikonal_phase_numeric(potential, a, radius, beam)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_samples(radius, c3, beam, samples)
    }

    /// The same profile with `C3` multiplied by `factor`; the annulus moves
    /// accordingly and collapses onto the sphere for `factor = 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor >= 0.0) || !factor.is_finite() {
            return Err(Error::domain("phase scale factor", factor));
        }
        let k = self.c52 * factor;
        let strength = self.strength * factor;
        let (r_inner, r_outer) = if k == 0.0 {
            (self.radius, self.radius)
        } else {
            match self.annulus {
                AnnulusRule::PowerLaw => annulus_radii(k, self.radius, PHI_INNER, PHI_OUTER)?,
                AnnulusRule::Samples => (
                    self.radius + crossing(&self.samples, strength, PHI_INNER),
                    self.radius + crossing(&self.samples, strength, PHI_OUTER),
                ),
            }
        };
        Ok(PhaseProfile {
            c3: self.c3 * factor,
            c52: k,
            r_inner,
            r_outer,
            strength,
            ..self.clone()
        })
    }

    /// Phase at grazing distance `a`, log-log interpolated; outside the
    /// tabulated range the end segments are continued as power laws.
    pub fn phase_at(&self, a: f64) -> f64 {
        if self.strength == 0.0 {
            return 0.0;
        }
        let s = &self.samples;
        let n = s.len();
        let idx = s.partition_point(|p| p.0 < a).clamp(1, n - 1);
        let (p, q) = (s[idx - 1], s[idx]);
        let t = (a.ln() - p.0.ln()) / (q.0.ln() - p.0.ln());
        self.strength * (p.1.ln() + t * (q.1.ln() - p.1.ln())).exp()
    }

    /// Same values as [`phase_at`](Self::phase_at) with the sample
    /// logarithms precomputed, for repeated evaluation.
    pub fn interpolator(&self) -> PhaseInterpolator {
        PhaseInterpolator {
            ln_a: self.samples.iter().map(|p| p.0.ln()).collect(),
            ln_phi: self.samples.iter().map(|p| p.1.ln()).collect(),
            a: self.samples.iter().map(|p| p.0).collect(),
            strength: self.strength,
        }
    }

    /// Header block followed by `a[m] phase[rad]` rows.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# R = {:e} m", self.radius);
        let _ = writeln!(out, "# C3 = {:e} J m^3", self.c3);
        let _ = writeln!(out, "# C52 = {:e} m^2.5", self.c52);
        let _ = writeln!(out, "# R_i_CP = {:e} m", self.r_inner);
        let _ = writeln!(out, "# R_o_CP = {:e} m", self.r_outer);
        let _ = writeln!(out, "# strength = {}", self.strength);
        let rule = match self.annulus {
            AnnulusRule::PowerLaw => "power law",
            AnnulusRule::Samples => "samples",
        };
        let _ = writeln!(out, "# annulus from = {rule}");
        let _ = writeln!(out, "# a[m] dphi[rad]");
        for &(a, phi) in &self.samples {
            let _ = writeln!(out, "{:.10e} {:.10e}", a, self.strength * phi);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ATOMIC_MASS_UNIT;
    use crate::eikonal::phase_power_law;

    fn beam() -> Beam {
        Beam::new(114.8 * ATOMIC_MASS_UNIT, 521.0).unwrap()
    }

    #[test]
    fn sample_annulus_hits_the_thresholds() {
        let beam = Beam::new(114.8 * crate::constants::ATOMIC_MASS_UNIT, 521.0).unwrap();
        let r = 50e-9;
        let grid = default_grazing_grid(r);
        let u = |x: f64, rho: f64| -9.77e-50 / (rho.hypot(x) - r).powi(3) * 0.5;
        let p = PhaseProfile::numeric(r, 9.77e-50, &beam, &grid, &u).unwrap();
        assert_eq!(p.annulus, AnnulusRule::Samples);
        for (edge, phi) in [(p.r_inner, PHI_INNER), (p.r_outer, PHI_OUTER)] {
            assert!((p.phase_at(edge - r) / phi - 1.0).abs() < 1e-9);
        }
        let s = p.scaled(1.8).unwrap();
        assert!((s.phase_at(s.r_inner - r) / PHI_INNER - 1.0).abs() < 1e-9);
        assert!((s.phase_at(s.r_outer - r) / PHI_OUTER - 1.0).abs() < 1e-9);
        // half the potential pulls both edges inwards
        let full = PhaseProfile::analytic(r, 9.77e-50, &beam, &grid).unwrap();
        assert!(p.r_inner < full.r_inner && p.r_outer < full.r_outer);
    }

    #[test]
    fn interpolator_matches_direct_evaluation() {
        let beam = Beam::new(114.8 * crate::constants::ATOMIC_MASS_UNIT, 521.0).unwrap();
        let p =
            PhaseProfile::analytic(50e-9, 9.77e-50, &beam, &default_grazing_grid(50e-9)).unwrap();
        let fast = p.interpolator();
        for a in [1e-12, 3.3e-10, 1.2e-9, 7e-9, 4e-8, 2e-6] {
            assert_eq!(fast.phase_at(a), p.phase_at(a));
        }
    }

    #[test]
    fn analytic_profile_invariants() {
        let radius = 50e-9;
        let p = PhaseProfile::analytic(radius, 9.77e-50, &beam(), &default_grazing_grid(radius))
            .unwrap();
        assert!(p.radius < p.r_inner && p.r_inner < p.r_outer);
        // small-a end follows the power law
        let a = p.samples[0].0;
        let ratio = p.samples[0].1 / phase_power_law(a, p.c52);
        assert!((ratio - 1.0).abs() < 1e-3);
    }

    #[test]
    fn interpolation_exact_for_power_laws() {
        let samples: Vec<(f64, f64)> = (1..10)
            .map(|k| {
                let a = 1e-9 * k as f64;
                (a, 1e-22 / a.powf(2.5))
            })
            .collect();
        let p = PhaseProfile::from_samples(50e-9, 1e-49, &beam(), samples).unwrap();
        for a in [0.3e-9, 2.2e-9, 7.7e-9, 30e-9] {
            assert!((p.phase_at(a) * a.powf(2.5) / 1e-22 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn scaling_moves_and_collapses_the_annulus() {
        let radius = 100e-9;
        let p = PhaseProfile::analytic(radius, 9.77e-50, &beam(), &default_grazing_grid(radius))
            .unwrap();
        let big = p.scaled(1.8).unwrap();
        assert!(big.r_outer > p.r_outer && big.r_inner > p.r_inner);
        assert!((big.phase_at(3e-9) / p.phase_at(3e-9) - 1.8).abs() < 1e-12);
        let off = p.scaled(0.0).unwrap();
        assert_eq!((off.r_inner, off.r_outer), (radius, radius));
        assert_eq!(off.phase_at(1e-9), 0.0);
    }

    #[test]
    fn rejects_non_monotone_samples() {
        let bad = vec![(1e-9, 1.0), (2e-9, 2.0)];
        assert!(PhaseProfile::from_samples(50e-9, 1e-49, &beam(), bad).is_err());
    }
}
