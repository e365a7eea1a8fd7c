use std::path::Path;

use super::Flagged;
use crate::{Error, Result};

/// Real-frequency optical constants `n + i k` at angular frequency `omega`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpticalRow {
    pub omega: f64,
    pub n: f64,
    pub k: f64,
}

impl OpticalRow {
    /// `Im eps = 2 n k`
    pub fn eps_imag_part(&self) -> f64 {
        2.0 * self.n * self.k
    }
}

/// Tabulated optical data, strictly increasing in frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct OpticalDataTable {
    rows: Vec<OpticalRow>,
}

/// Coverage below which a KK result is flagged.
const MIN_DECADES: f64 = 4.0;

impl OpticalDataTable {
    pub fn new(rows: Vec<OpticalRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Config("optical data table is empty".into()));
        }
        for r in &rows {
            if !(r.omega > 0.0) {
                return Err(Error::domain("table frequency", r.omega));
            }
            if !(r.n >= 0.0) {
                return Err(Error::domain("refractive index n", r.n));
            }
            if !(r.k >= 0.0) {
                return Err(Error::domain("extinction coefficient k", r.k));
            }
        }
        if rows.windows(2).any(|w| w[1].omega <= w[0].omega) {
            return Err(Error::Config(
                "optical data table must be strictly increasing in frequency".into(),
            ));
        }
        Ok(OpticalDataTable { rows })
    }

    pub fn rows(&self) -> &[OpticalRow] {
        &self.rows
    }

    pub fn decades(&self) -> f64 {
        let first = self.rows[0].omega;
        let last = self.rows[self.rows.len() - 1].omega;
        (last / first).log10()
    }

    /// Parses whitespace- or comma-separated `omega n k` lines; `#` starts a
    /// comment.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut rows = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            let bad = |msg: String| Error::Parse {
                path: origin.to_path_buf(),
                line: idx + 1,
                msg,
            };
            if fields.len() != 3 {
                return Err(bad(format!("expected 3 columns, found {}", fields.len())));
            }
            let mut vals = [0.0; 3];
            for (v, f) in vals.iter_mut().zip(&fields) {
                *v = f.parse::<f64>().map_err(|e| bad(format!("`{f}`: {e}")))?;
            }
            rows.push(OpticalRow {
                omega: vals[0],
                n: vals[1],
                k: vals[2],
            });
        }
        OpticalDataTable::new(rows)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# omega[rad/s] n k\n");
        for r in &self.rows {
            s.push_str(&format!("{:.10e} {:.10e} {:.10e}\n", r.omega, r.n, r.k));
        }
        s
    }
}

/// `int_a^inf dw / (w^2 (w^2 + xi^2))`, the integral against a `w^-3` tail.
fn tail_integral(a: f64, xi: f64) -> f64 {
    let u = xi / a;
    if u < 1e-2 {
        // 1/(3a^3) (1 - 3u^2/5 + 3u^4/7 - ...)
        let u2 = u * u;
        (1.0 / (3.0 * a * a * a))
            * (1.0 - 3.0 * u2 / 5.0 + 3.0 * u2 * u2 / 7.0 - u2 * u2 * u2 / 3.0)
    } else {
        (1.0 / (xi * xi)) * (1.0 / a - u.atan() / xi)
    }
}

/// `eps(i xi) = 1 + (2/pi) int_0^inf w Im eps(w) / (w^2 + xi^2) dw`.
///
/// Trapezoid rule on the table grid, a linear ramp from `Im eps(0) = 0` to
/// the first row, and an analytic `Im eps ~ w^-3` tail beyond the last row.
pub fn kramers_kronig_imag_axis(table: &OpticalDataTable, xi: f64) -> Result<Flagged<f64>> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::domain("imaginary frequency xi", xi));
    }
    let integrand = |r: &OpticalRow| r.omega * r.eps_imag_part() / (r.omega * r.omega + xi * xi);
    let rows = table.rows();
    let mut acc = 0.5 * rows[0].omega * integrand(&rows[0]);
    for w in rows.windows(2) {
        acc += 0.5 * (w[1].omega - w[0].omega) * (integrand(&w[0]) + integrand(&w[1]));
    }
    let last = rows[rows.len() - 1];
    let a = last.omega;
    acc += last.eps_imag_part() * a.powi(3) * tail_integral(a, xi);

    let mut out = Flagged::clean(1.0 + 2.0 / std::f64::consts::PI * acc);
    if table.decades() < MIN_DECADES {
        out.warnings.push(format!(
            "optical table spans only {:.2} decades in frequency (< {MIN_DECADES})",
            table.decades()
        ));
    }
    Ok(out)
}
