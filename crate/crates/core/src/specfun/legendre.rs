use crate::{Error, Result};

/// Associated Legendre functions `P_l^m(cos theta)` for one degree, all
/// orders `0..=l`, Condon-Shortley phase.
///
/// Values are stored normalised by `sqrt((l-m)!/(l+m)!)`, which keeps them
/// bounded by 1 for any degree. [`LegendreRow::value`] and friends undo the
/// normalisation on request.
#[derive(Clone, Debug)]
pub struct LegendreRow {
    pub l: usize,
    pub theta: f64,
    /// normalised `P_l^m`
    pub values: Vec<f64>,
    /// normalised `d P_l^m / d theta`
    pub dtheta: Vec<f64>,
    /// normalised `m P_l^m / sin(theta)`, finite at the poles
    pub m_over_sin: Vec<f64>,
}

impl LegendreRow {
    /// `sqrt((l+m)!/(l-m)!)`, the factor removed by the normalisation.
    pub fn norm_factor(&self, m: usize) -> f64 {
        let l = self.l;
        ((l - m + 1)..=(l + m))
            .map(|k| (k as f64).ln())
            .sum::<f64>()
            .mul_add(0.5, 0.0)
            .exp()
    }

    pub fn value(&self, m: usize) -> f64 {
        self.values[m] * self.norm_factor(m)
    }

    pub fn derivative(&self, m: usize) -> f64 {
        self.dtheta[m] * self.norm_factor(m)
    }

    /// `m P_l^m(cos theta) / sin(theta)`
    pub fn m_over_sin_value(&self, m: usize) -> f64 {
        self.m_over_sin[m] * self.norm_factor(m)
    }
}

/// Normalised `P_k^m`, `k = l-1` and `k = l`, for fixed `m`, by the standard
/// three-term recurrence in degree started from the sectoral value.
fn column(m: usize, l: usize, cos_t: f64, sectoral: f64) -> (f64, f64) {
    if m > l {
        return (0.0, 0.0);
    }
    let mut prev = 0.0;
    let mut cur = sectoral;
    for k in (m + 1)..=l {
        let kf = k as f64;
        let mf = m as f64;
        let next = if k == m + 1 {
            (2.0 * mf + 1.0).sqrt() * cos_t * cur
        } else {
            ((2.0 * kf - 1.0) * cos_t * cur - ((kf - 1.0 + mf) * (kf - 1.0 - mf)).sqrt() * prev)
                / ((kf + mf) * (kf - mf)).sqrt()
        };
        prev = cur;
        cur = next;
    }
    // prev is degree l-1 only if at least one step was taken
    let below = if l > m { prev } else { 0.0 };
    (below, cur)
}

pub fn assoc_legendre_row(l: usize, theta: f64) -> Result<LegendreRow> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::domain("polar angle theta", theta));
    }
    let (sin_t, cos_t) = theta.sin_cos();
    let sin_t = sin_t.max(0.0);

    // sectoral values P_m^m for m = 0..=l+1
    let mut sectoral = Vec::with_capacity(l + 2);
    sectoral.push(1.0);
    for m in 1..=(l + 1) {
        let mf = m as f64;
        let prev: f64 = sectoral[m - 1];
        sectoral.push(-((2.0 * mf - 1.0) / (2.0 * mf)).sqrt() * sin_t * prev);
    }

    let mut values = vec![0.0; l + 2];
    let mut lower = vec![0.0; l + 2];
    for m in 0..=(l + 1) {
        let (below, at) = column(m, l, cos_t, sectoral[m]);
        values[m] = at;
        if l >= 1 && m < l {
            lower[m] = below;
        }
    }

    let lf = l as f64;
    let mut dtheta = vec![0.0; l + 1];
    let mut m_over_sin = vec![0.0; l + 1];
    for m in 0..=l {
        let mf = m as f64;
        dtheta[m] = if m == 0 {
            (lf * (lf + 1.0)).sqrt() * values.get(1).copied().unwrap_or(0.0)
        } else {
            0.5 * (((lf + mf + 1.0) * (lf - mf)).sqrt() * values[m + 1]
                - ((lf + mf) * (lf - mf + 1.0)).sqrt() * values[m - 1])
        };
        if m >= 1 && l >= 1 {
            let up = if m < l - 1 { lower[m + 1] } else { 0.0 };
            let down = lower[m - 1];
            m_over_sin[m] = -0.5
                * (((lf - mf) * (lf - mf - 1.0)).max(0.0).sqrt() * up
                    + ((lf + mf) * (lf + mf - 1.0)).sqrt() * down);
        }
    }
    values.truncate(l + 1);
    Ok(LegendreRow {
        l,
        theta,
        values,
        dtheta,
        m_over_sin,
    })
}
