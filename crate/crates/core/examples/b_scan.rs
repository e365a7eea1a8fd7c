//! On-axis intensity against detector distance for the point source.

use poisson_cp::constants::ATOMIC_MASS_UNIT;
use poisson_cp::eikonal::{default_grazing_grid, Beam, PhaseProfile};
use poisson_cp::fresnel::{b_scan, Scene};

fn main() -> poisson_cp::Result<()> {
    let beam = Beam::from_wavelength(114.8 * ATOMIC_MASS_UNIT, 6.67e-12)?;
    let radius = 100e-9;
    let phase = PhaseProfile::analytic(radius, 9.77e-50, &beam, &default_grazing_grid(radius))?;
    let scene = Scene::new(radius, 0.6, 0.1e-3, beam)?
        .with_resolution(1999, 2)?
        .with_phase(phase)?;
    let b_values: Vec<f64> = (0..6).map(|k| 0.05e-3 + 0.2e-3 * k as f64).collect();
    println!("{:>7} {:>9} {:>9}", "b (mm)", "cp", "no cp");
    for e in b_scan(&scene, &b_values)? {
        let cp = e.with_cp.map_or(f64::NAN, |p| p.on_axis());
        println!(
            "{:>7.2} {cp:>9.4} {:>9.4}",
            e.b * 1e3,
            e.without_cp.on_axis()
        );
    }
    Ok(())
}
