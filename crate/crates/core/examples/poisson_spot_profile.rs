//! Radial Poisson-spot profile with and without the CP phase, before and
//! after blurring by the source.

use poisson_cp::constants::ATOMIC_MASS_UNIT;
use poisson_cp::eikonal::{default_grazing_grid, Beam, PhaseProfile};
use poisson_cp::fresnel::{convolve_source, radial_profile, Scene};

fn main() -> poisson_cp::Result<()> {
    let beam = Beam::from_wavelength(114.8 * ATOMIC_MASS_UNIT, 6.67e-12)?;
    let radius = 50e-9;
    let phase = PhaseProfile::analytic(radius, 9.77e-50, &beam, &default_grazing_grid(radius))?;
    let scene = Scene::new(radius, 0.6, 0.1e-3, beam)?
        .with_resolution(1999, 41)?
        .with_phase(phase)?;
    let cp = radial_profile(&scene)?;
    let plain = radial_profile(&scene.clone().without_phase())?;
    let cp_blur = convolve_source(&cp, &scene)?;
    let plain_blur = convolve_source(&plain, &scene)?;
    println!(
        "{:>8} {:>9} {:>9} {:>9} {:>9}",
        "rho (nm)", "cp", "no cp", "cp*src", "none*src"
    );
    for k in 0..cp.samples.len() {
        println!(
            "{:>8.2} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            cp.samples[k].0 * 1e9,
            cp.samples[k].1,
            plain.samples[k].1,
            cp_blur.samples[k].1,
            plain_blur.samples[k].1
        );
    }
    for (name, p) in [("cp", &cp_blur), ("no cp", &plain_blur)] {
        let m: Vec<String> = p
            .side_maxima()
            .iter()
            .map(|m| format!("{:.2}", m.0 * 1e9))
            .collect();
        println!("{name}: side maxima at [{}] nm", m.join(", "));
    }
    Ok(())
}
