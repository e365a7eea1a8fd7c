use nalgebra::{DMatrix, DVector};

use super::{DrudeLorentzModel, Resonance};
use crate::{Error, Result};

const MAX_ITERATIONS: usize = 500;

#[derive(Clone, Debug)]
pub struct FitReport {
    pub model: DrudeLorentzModel,
    /// `sqrt(sum (ln eps_model - ln eps_sample)^2)`
    pub residual_norm: f64,
    /// one-sigma relative uncertainty per line: `[plasma, transverse, damping]`
    pub relative_uncertainty: Vec<[f64; 3]>,
    pub iterations: usize,
}

/// Least-squares Drude-Lorentz fit to `(xi, eps(i xi))` samples in log space.
///
/// Starting values come from the steepest drops of `ln eps` against
/// `ln xi`; see [`fit_drude_lorentz_from`] to supply them explicitly.
pub fn fit_drude_lorentz(samples: &[(f64, f64)], n_lines: usize) -> Result<FitReport> {
    check_samples(samples, n_lines)?;
    let initial = initial_guess(samples, n_lines);
    fit_drude_lorentz_from(samples, &initial)
}

fn check_samples(samples: &[(f64, f64)], n_lines: usize) -> Result<()> {
    if n_lines == 0 {
        return Err(Error::Config("a fit needs at least one line".into()));
    }
    if samples.len() < 3 * n_lines {
        return Err(Error::Config(format!(
            "{} samples cannot determine {} parameters",
            samples.len(),
            3 * n_lines
        )));
    }
    for &(xi, eps) in samples {
        if !(xi >= 0.0) {
            return Err(Error::domain("sample frequency", xi));
        }
        if !(eps > 0.0) {
            return Err(Error::domain("sample permittivity", eps));
        }
    }
    Ok(())
}

fn initial_guess(samples: &[(f64, f64)], n_lines: usize) -> DrudeLorentzModel {
    let mut pts: Vec<(f64, f64)> = samples.iter().copied().filter(|p| p.0 > 0.0).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    // steepness between neighbours, located at the geometric midpoint
    let mut slopes: Vec<(f64, f64)> = pts
        .windows(2)
        .map(|w| {
            let s = -(w[1].1.ln() - w[0].1.ln()) / (w[1].0.ln() - w[0].0.ln());
            ((w[0].0 * w[1].0).sqrt(), s)
        })
        .collect();
    let mut peaks: Vec<(f64, f64)> = Vec::new();
    for i in 0..slopes.len() {
        let left = if i > 0 {
            slopes[i - 1].1
        } else {
            f64::NEG_INFINITY
        };
        let right = slopes.get(i + 1).map_or(f64::NEG_INFINITY, |s| s.1);
        if slopes[i].1 >= left && slopes[i].1 >= right {
            peaks.push(slopes[i]);
        }
    }
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
    peaks.truncate(n_lines);
    // fall back to evenly spread positions if the data has too few features
    if peaks.len() < n_lines {
        slopes.sort_by(|a, b| a.0.total_cmp(&b.0));
        let lo = pts[0].0.ln();
        let hi = pts[pts.len() - 1].0.ln();
        peaks = (0..n_lines)
            .map(|i| {
                (
                    ((i as f64 + 0.5) / n_lines as f64 * (hi - lo) + lo).exp(),
                    0.0,
                )
            })
            .collect();
    }
    let mut centres: Vec<f64> = peaks.iter().map(|p| p.0).collect();
    centres.sort_by(f64::total_cmp);

    let eps_at = |xi: f64| -> f64 {
        // nearest sample in log frequency
        pts.iter()
            .min_by(|a, b| {
                (a.0.ln() - xi.ln())
                    .abs()
                    .total_cmp(&(b.0.ln() - xi.ln()).abs())
            })
            .map(|p| p.1)
            .unwrap_or(1.0)
    };
    let mut resonances = Vec::with_capacity(n_lines);
    for (i, &wt) in centres.iter().enumerate() {
        let below = if i == 0 {
            pts[0].1
        } else {
            eps_at((centres[i - 1] * wt).sqrt())
        };
        let above = if i + 1 < centres.len() {
            eps_at((centres[i + 1] * wt).sqrt())
        } else {
            1.0
        };
        let height = (below - above).max(1e-3);
        resonances.push(Resonance {
            plasma: wt * height.sqrt(),
            transverse: wt,
            damping: 0.3 * wt,
        });
    }
    DrudeLorentzModel { resonances }
}

fn to_params(model: &DrudeLorentzModel) -> DVector<f64> {
    DVector::from_iterator(
        3 * model.resonances.len(),
        model
            .resonances
            .iter()
            .flat_map(|r| [r.plasma.ln(), r.transverse.ln(), r.damping.ln()]),
    )
}

fn from_params(p: &DVector<f64>) -> DrudeLorentzModel {
    DrudeLorentzModel {
        resonances: p
            .as_slice()
            .chunks(3)
            .map(|c| Resonance {
                plasma: c[0].exp(),
                transverse: c[1].exp(),
                damping: c[2].exp(),
            })
            .collect(),
    }
}

fn residuals_and_jacobian(
    p: &DVector<f64>,
    samples: &[(f64, f64)],
) -> (DVector<f64>, DMatrix<f64>) {
    let model = from_params(p);
    let n = samples.len();
    let mut r = DVector::zeros(n);
    let mut jac = DMatrix::zeros(n, p.len());
    for (row, &(xi, eps)) in samples.iter().enumerate() {
        let e = model.eps_imag(xi);
        r[row] = e.ln() - eps.ln();
        for (i, res) in model.resonances.iter().enumerate() {
            let wp2 = res.plasma * res.plasma;
            let wt2 = res.transverse * res.transverse;
            let d = wt2 + res.damping * xi + xi * xi;
            jac[(row, 3 * i)] = 2.0 * wp2 / d / e;
            jac[(row, 3 * i + 1)] = -wp2 * 2.0 * wt2 / (d * d) / e;
            jac[(row, 3 * i + 2)] = -wp2 * res.damping * xi / (d * d) / e;
        }
    }
    (r, jac)
}

/// Levenberg-Marquardt from an explicit starting model.
pub fn fit_drude_lorentz_from(
    samples: &[(f64, f64)],
    initial: &DrudeLorentzModel,
) -> Result<FitReport> {
    let n_lines = initial.resonances.len();
    check_samples(samples, n_lines)?;
    if initial
        .resonances
        .iter()
        .any(|r| !(r.transverse > 0.0 && r.plasma > 0.0 && r.damping > 0.0))
    {
        return Err(Error::Config(
            "fit starting model needs strictly positive parameters".into(),
        ));
    }
    let mut p = to_params(initial);
    let (mut r, mut jac) = residuals_and_jacobian(&p, samples);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * &r;
        if grad.amax() < 1e-30 || cost < 1e-30 {
            converged = true;
            break;
        }
        let mut accepted = false;
        for _ in 0..40 {
            let mut a = jtj.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += lambda * jtj[(i, i)].max(1e-300);
            }
            let Some(step) = a.lu().solve(&(-&grad)) else {
                lambda *= 10.0;
                continue;
            };
            let trial = &p + &step;
            let (tr, tj) = residuals_and_jacobian(&trial, samples);
            let tcost = tr.norm_squared();
            if tcost.is_finite() && tcost < cost {
                let small_step = step.amax() < 1e-13;
                let small_gain = (cost - tcost) <= 1e-14 * cost;
                p = trial;
                r = tr;
                jac = tj;
                cost = tcost;
                lambda = (lambda * 0.3).max(1e-12);
                accepted = true;
                if small_step || small_gain {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            // no downhill direction left at any damping: a stationary point
            converged = true;
        }
        if converged {
            break;
        }
    }

    let model = from_params(&p);
    let residual_norm = cost.sqrt();
    if !converged {
        return Err(Error::FitDidNotConverge {
            best: Box::new(model),
            residual: residual_norm,
            iterations,
        });
    }
    let dof = (samples.len() - p.len()).max(1) as f64;
    let s2 = cost / dof;
    let jtj = jac.transpose() * &jac;
    let cov = jtj
        .try_inverse()
        .unwrap_or_else(|| DMatrix::from_element(p.len(), p.len(), f64::NAN));
    let relative_uncertainty = (0..n_lines)
        .map(|i| {
            let u = |k: usize| (s2 * cov[(3 * i + k, 3 * i + k)]).abs().sqrt();
            [u(0), u(1), u(2)]
        })
        .collect();
    Ok(FitReport {
        model,
        residual_norm,
        relative_uncertainty,
        iterations,
    })
}
