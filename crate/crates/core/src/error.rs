use std::path::PathBuf;

use crate::materials::DrudeLorentzModel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{what} out of domain: {value:e}")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("quadrature did not converge (estimated relative error {rel_err:e}, partial value {partial:e})")]
    Quadrature { partial: f64, rel_err: f64 },

    #[error(
        "Drude-Lorentz fit did not converge after {iterations} iterations (residual {residual:e})"
    )]
    FitDidNotConverge {
        best: Box<DrudeLorentzModel>,
        residual: f64,
        iterations: usize,
    },

    #[error("classical turning point: kinetic energy {energy:e} J does not exceed potential {potential:e} J")]
    TurningPoint { energy: f64, potential: f64 },

    #[error("no solution inside bracket [{lo:e}, {hi:e}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }
}
