//! Eikonal phase around the sphere: power law, closed form and numeric
//! quadrature, with the annulus and capture radii they imply.

use poisson_cp::constants::ATOMIC_MASS_UNIT;
use poisson_cp::eikonal::{
    annulus_radii, c52, capture_impact_parameter, eikonal_phase_analytic, eikonal_phase_numeric,
    phase_power_law, Beam, PHI_INNER, PHI_OUTER,
};

fn main() -> poisson_cp::Result<()> {
    let beam = Beam::new(114.8 * ATOMIC_MASS_UNIT, 521.0)?;
    let c3 = 9.77e-50;
    for radius in [50e-9, 100e-9, 200e-9] {
        let k = c52(radius, c3, &beam)?;
        let (ri, ro) = annulus_radii(k, radius, PHI_INNER, PHI_OUTER)?;
        let a_min = capture_impact_parameter(radius, c3, &beam)?;
        println!(
            "R = {:.0} nm: C52 = {k:.4e}, annulus ({:.2}, {:.2}) nm, a_min = {:.3} nm",
            radius * 1e9,
            ri * 1e9,
            ro * 1e9,
            a_min * 1e9
        );
    }
    let radius = 50e-9;
    let k = c52(radius, c3, &beam)?;
    let half_space = |x: f64, rho: f64| {
        let z = x.hypot(rho) - radius;
        -c3 / z.powi(3)
    };
    println!(
        "{:>8} {:>12} {:>12} {:>12}",
        "a (nm)", "power law", "closed", "numeric"
    );
    for a in [0.5e-9, 1e-9, 3e-9, 10e-9, 30e-9] {
        println!(
            "{:>8.1} {:>12.5} {:>12.5} {:>12.5}",
            a * 1e9,
            phase_power_law(a, k),
            eikonal_phase_analytic(a, radius, c3, &beam),
            eikonal_phase_numeric(&half_space, a, radius, &beam)?
        );
    }
    Ok(())
}
