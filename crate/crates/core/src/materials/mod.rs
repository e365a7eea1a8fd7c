//! Material and atomic response on the imaginary frequency axis.

mod atom;
mod drude;
mod fit;
mod layered;
mod table;

pub use atom::{polarizability, PolarizabilityModel, Transition};
pub use drude::{permittivity, DrudeLorentzModel, Resonance};
pub use fit::{fit_drude_lorentz, fit_drude_lorentz_from, FitReport};
pub use layered::effective_c3_layered;
pub use table::{kramers_kronig_imag_axis, OpticalDataTable, OpticalRow};

/// A value together with non-fatal diagnostics raised while computing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Flagged<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

impl<T> Flagged<T> {
    pub fn clean(value: T) -> Self {
        Flagged {
            value,
            warnings: Vec::new(),
        }
    }
}
