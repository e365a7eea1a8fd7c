use serde::{Deserialize, Serialize};

use super::Flagged;
use crate::constants::HBAR;
use crate::{Error, Result};

/// Ground-state dipole transition: angular frequency (rad/s) and dipole
/// matrix element (C·m).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub frequency: f64,
    pub dipole: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarizabilityModel {
    /// Total angular momentum of the ground state.
    pub j0: f64,
    pub transitions: Vec<Transition>,
}

impl PolarizabilityModel {
    pub fn new(j0: f64, transitions: Vec<Transition>) -> Result<Self> {
        if !(j0 >= 0.0) {
            return Err(Error::domain("ground-state J0", j0));
        }
        for t in &transitions {
            if !(t.frequency > 0.0) {
                return Err(Error::domain("transition frequency", t.frequency));
            }
            if !(t.dipole > 0.0) {
                return Err(Error::domain("dipole matrix element", t.dipole));
            }
        }
        Ok(PolarizabilityModel { j0, transitions })
    }

    /// Indium `5P_{1/2}` ground state, six strongest transitions.
    pub fn indium() -> Self {
        const ROWS: [(f64, f64); 6] = [
            (4.594, 16.092),
            (6.200, 22.048),
            (6.843, 4.587),
            (7.360, 7.910),
            (7.659, 2.518),
            (7.886, 3.582),
        ];
        PolarizabilityModel {
            j0: 0.5,
            transitions: ROWS
                .iter()
                .map(|&(w, d)| Transition {
                    frequency: w * 1e15,
                    dipole: d * 1e-30,
                })
                .collect(),
        }
    }

    /// `alpha(i xi)` in C²·m²/J.
    #[inline]
    pub fn alpha(&self, xi: f64) -> f64 {
        let weight = 2.0 / (3.0 * HBAR * (2.0 * self.j0 + 1.0));
        weight
            * self
                .transitions
                .iter()
                .map(|t| t.frequency * t.dipole * t.dipole / (t.frequency * t.frequency + xi * xi))
                .sum::<f64>()
    }

    /// Transition contributing most to the static polarizability.
    pub fn dominant_frequency(&self) -> Option<f64> {
        self.transitions
            .iter()
            .max_by(|a, b| {
                let wa = a.dipole * a.dipole / a.frequency;
                let wb = b.dipole * b.dipole / b.frequency;
                wa.total_cmp(&wb)
            })
            .map(|t| t.frequency)
    }

    pub fn lowest_frequency(&self) -> Option<f64> {
        self.transitions
            .iter()
            .map(|t| t.frequency)
            .min_by(f64::total_cmp)
    }
}

pub fn polarizability(model: &PolarizabilityModel, xi: f64) -> Result<Flagged<f64>> {
    if !(xi >= 0.0) {
        return Err(Error::domain("imaginary frequency xi", xi));
    }
    let mut out = Flagged::clean(model.alpha(xi));
    if model.transitions.is_empty() {
        out.warnings
            .push("polarizability model has no transitions; alpha = 0".into());
    }
    Ok(out)
}
