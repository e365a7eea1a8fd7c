//! Silica permittivity and indium polarizability on the imaginary axis, and
//! a round trip from tabulated n, k through Kramers-Kronig to a fitted model.

use poisson_cp::materials::{
    fit_drude_lorentz, kramers_kronig_imag_axis, DrudeLorentzModel, OpticalDataTable, OpticalRow,
    PolarizabilityModel,
};

fn main() -> poisson_cp::Result<()> {
    let silica = DrudeLorentzModel::silica();
    let indium = PolarizabilityModel::indium();
    println!(
        "{:>10} {:>10} {:>14}",
        "xi (rad/s)", "eps(i xi)", "alpha (SI)"
    );
    for k in 0..9 {
        let xi = 10f64.powf(12.0 + 0.75 * k as f64);
        println!(
            "{xi:>10.2e} {:>10.4} {:>14.4e}",
            silica.eps_imag(xi),
            indium.alpha(xi)
        );
    }

    // synthetic measurement: n + ik of the model on the real axis
    let rows = (0..4000)
        .map(|i| {
            let w = 1e11 * 1e9f64.powf(i as f64 / 3999.0);
            let nk = silica.eps_real(w).sqrt();
            OpticalRow {
                omega: w,
                n: nk.re,
                k: nk.im.max(0.0),
            }
        })
        .collect();
    let table = OpticalDataTable::new(rows)?;
    let samples = (0..40)
        .map(|k| {
            let xi = 10f64.powf(12.5 + 5.0 * k as f64 / 39.0);
            Ok((xi, kramers_kronig_imag_axis(&table, xi)?.value))
        })
        .collect::<poisson_cp::Result<Vec<_>>>()?;
    let fit = fit_drude_lorentz(&samples, 2)?;
    println!(
        "fit residual {:.2e} after {} iterations",
        fit.residual_norm, fit.iterations
    );
    for (line, u) in fit.model.resonances.iter().zip(&fit.relative_uncertainty) {
        println!(
            "  plasma {:.4e}  transverse {:.4e}  damping {:.3e}  (rel. sigma {:.1e})",
            line.plasma, line.transverse, line.damping, u[0]
        );
    }
    Ok(())
}
