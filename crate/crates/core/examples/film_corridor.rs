//! Uncertainty corridor from scaling C3: the phase annulus for several
//! factors and the spot they produce.

use poisson_cp::constants::ATOMIC_MASS_UNIT;
use poisson_cp::eikonal::{default_grazing_grid, Beam, PhaseProfile};
use poisson_cp::fresnel::{relative_intensity, Scene};

fn main() -> poisson_cp::Result<()> {
    let beam = Beam::from_wavelength(114.8 * ATOMIC_MASS_UNIT, 6.67e-12)?;
    let radius = 50e-9;
    let base = PhaseProfile::analytic(radius, 9.77e-50, &beam, &default_grazing_grid(radius))?;
    let scene = Scene::new(radius, 0.6, 0.1e-3, beam)?.with_resolution(1999, 2)?;
    println!("no CP: I(0) = {:.4}", relative_intensity(0.0, &scene)?);
    for factor in [0.0, 0.8, 1.0, 1.8] {
        let phase = base.scaled(factor)?;
        let (ri, ro) = (phase.r_inner, phase.r_outer);
        let s = scene.clone().with_phase(phase)?;
        println!(
            "C3 x {factor}: annulus ({:.2}, {:.2}) nm, I(0) = {:.4}, I(5 nm) = {:.4}",
            ri * 1e9,
            ro * 1e9,
            relative_intensity(0.0, &s)?,
            relative_intensity(5e-9, &s)?
        );
    }
    Ok(())
}
