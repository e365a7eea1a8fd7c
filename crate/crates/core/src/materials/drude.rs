use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One Drude-Lorentz line, all frequencies in rad/s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub plasma: f64,
    pub transverse: f64,
    pub damping: f64,
}

/// `eps(i xi) = 1 + sum_i wP_i^2 / (wT_i^2 + gamma_i xi + xi^2)`.
///
/// A line with `transverse == 0` is a free-electron (Drude metal) term.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DrudeLorentzModel {
    pub resonances: Vec<Resonance>,
}

impl DrudeLorentzModel {
    pub fn new(resonances: Vec<Resonance>) -> Result<Self> {
        for r in &resonances {
            if !(r.plasma > 0.0) || !r.plasma.is_finite() {
                return Err(Error::domain("plasma frequency", r.plasma));
            }
            if !(r.transverse >= 0.0) || !r.transverse.is_finite() {
                return Err(Error::domain("transverse frequency", r.transverse));
            }
            if !(r.damping > 0.0) || !r.damping.is_finite() {
                return Err(Error::domain("damping", r.damping));
            }
        }
        Ok(DrudeLorentzModel { resonances })
    }

    pub fn vacuum() -> Self {
        DrudeLorentzModel::default()
    }

    /// Two-line fit for amorphous SiO2 (frequencies taken as rad/s).
    pub fn silica() -> Self {
        DrudeLorentzModel {
            resonances: vec![
                Resonance {
                    plasma: 1.75e14,
                    transverse: 1.32e14,
                    damping: 4.28e13,
                },
                Resonance {
                    plasma: 2.96e16,
                    transverse: 2.72e16,
                    damping: 8.09e15,
                },
            ],
        }
    }

    /// Permittivity at imaginary frequency `i xi`, no argument checks.
    #[inline]
    pub fn eps_imag(&self, xi: f64) -> f64 {
        1.0 + self
            .resonances
            .iter()
            .map(|r| r.plasma * r.plasma / (r.transverse * r.transverse + r.damping * xi + xi * xi))
            .sum::<f64>()
    }

    /// Permittivity on the real frequency axis.
    pub fn eps_real(&self, omega: f64) -> Complex64 {
        let mut eps = Complex64::new(1.0, 0.0);
        for r in &self.resonances {
            let denom = Complex64::new(
                r.transverse * r.transverse - omega * omega,
                -r.damping * omega,
            );
            eps += r.plasma * r.plasma / denom;
        }
        eps
    }

    /// `eps(0)`, infinite for a model with a free-electron line.
    pub fn static_permittivity(&self) -> f64 {
        self.eps_imag(0.0)
    }

    pub fn scaled_strength(&self, factor: f64) -> Self {
        let k = factor.sqrt();
        DrudeLorentzModel {
            resonances: self
                .resonances
                .iter()
                .map(|r| Resonance {
                    plasma: r.plasma * k,
                    ..*r
                })
                .collect(),
        }
    }
}

pub fn permittivity(model: &DrudeLorentzModel, xi: f64) -> Result<f64> {
    if !(xi >= 0.0) {
        return Err(Error::domain("imaginary frequency xi", xi));
    }
    Ok(model.eps_imag(xi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_value_of_silica() {
        let eps0 = permittivity(&DrudeLorentzModel::silica(), 0.0).unwrap();
        let expected = 1.0 + (1.75f64 / 1.32).powi(2) + (2.96f64 / 2.72).powi(2);
        assert!((eps0 - expected).abs() < 1e-12);
        assert!((eps0 - 3.94).abs() < 5e-3);
    }

    #[test]
    fn vacuum_is_one() {
        for &xi in &[0.0, 1e10, 1e18] {
            assert_eq!(permittivity(&DrudeLorentzModel::vacuum(), xi).unwrap(), 1.0);
        }
    }

    #[test]
    fn transparent_at_high_frequency() {
        let e = permittivity(&DrudeLorentzModel::silica(), 1e20).unwrap();
        assert!(e > 1.0 && e - 1.0 < 1e-7);
    }

    #[test]
    fn monotone_decreasing_on_log_grid() {
        let m = DrudeLorentzModel::silica();
        let vals: Vec<f64> = (0..100)
            .map(|i| m.eps_imag(10f64.powf(10.0 + 10.0 * i as f64 / 99.0)))
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert!(vals.iter().all(|&v| v > 1.0));
    }

    #[test]
    fn rejects_negative_xi_and_bad_lines() {
        assert!(permittivity(&DrudeLorentzModel::silica(), -1.0).is_err());
        assert!(DrudeLorentzModel::new(vec![Resonance {
            plasma: -1.0,
            transverse: 1.0,
            damping: 1.0
        }])
        .is_err());
    }

    #[test]
    fn real_axis_continuation_is_causal() {
        // Im eps > 0 for omega > 0 in a passive medium
        let m = DrudeLorentzModel::silica();
        for &w in &[1e13, 1.32e14, 1e15, 2.72e16, 1e18] {
            assert!(m.eps_real(w).im > 0.0);
        }
    }
}
