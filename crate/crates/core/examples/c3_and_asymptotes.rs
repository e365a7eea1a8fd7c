//! Half-space C3, the small-sphere limits and the effective C3 of a coated
//! substrate.

use poisson_cp::cp_potential::{asymptotic_potentials, c3_halfspace, SphereSystem};
use poisson_cp::materials::{effective_c3_layered, DrudeLorentzModel, PolarizabilityModel};

fn main() -> poisson_cp::Result<()> {
    let silica = DrudeLorentzModel::silica();
    let indium = PolarizabilityModel::indium();
    println!("C3 = {:.4e} J m^3", c3_halfspace(&silica, &indium)?);

    let sys = SphereSystem::new(50e-9, silica.clone(), indium.clone(), 10)?;
    println!(
        "{:>10} {:>12} {:>12} {:>12}",
        "r (m)", "U_S", "U_SNR", "U_SR"
    );
    for r in [60e-9, 200e-9, 1e-6, 1e-5, 1e-4] {
        let a = asymptotic_potentials(r, &sys)?;
        println!(
            "{r:>10.1e} {:>12.4e} {:>12.4e} {:>12.4e}",
            a.small_sphere, a.small_sphere_nonretarded, a.small_sphere_retarded
        );
    }

    let film = silica.scaled_strength(1.8);
    for d in [0.0, 1e-9, 5e-9, 50e-9] {
        let c3 = effective_c3_layered(&film, &silica, &indium, d, 2e-9)?;
        println!("film {d:.0e} m thick, z = 2 nm: C3_eff = {c3:.4e}");
    }
    Ok(())
}
