//! Square detector image built from a radial profile, written as a 16-bit
//! graymap with its text sidecar.

use poisson_cp::constants::ATOMIC_MASS_UNIT;
use poisson_cp::eikonal::{default_grazing_grid, Beam, PhaseProfile};
use poisson_cp::fresnel::{assemble_image, radial_profile, Scene};

fn main() -> poisson_cp::Result<()> {
    let beam = Beam::from_wavelength(114.8 * ATOMIC_MASS_UNIT, 6.67e-12)?;
    let radius = 50e-9;
    let phase = PhaseProfile::analytic(radius, 9.77e-50, &beam, &default_grazing_grid(radius))?;
    let scene = Scene::new(radius, 0.6, 0.1e-3, beam)?
        .with_resolution(1999, 31)?
        .with_phase(phase)?;
    let profile = radial_profile(&scene)?;
    let image = assemble_image(&profile, 64);
    let dir = std::env::temp_dir().join("poisson-cp-image");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("spot.pgm");
    image.write_pgm(&path)?;
    std::fs::write(dir.join("spot.txt"), image.sidecar(&profile))?;
    println!(
        "{} x {} image, pitch {:.3} nm, written to {}",
        image.n,
        image.n,
        image.pitch * 1e9,
        path.display()
    );
    let mid = image.n / 2;
    let row: Vec<String> = (0..image.n)
        .step_by(4)
        .map(|c| format!("{:.2}", image.get(mid, c)))
        .collect();
    println!("centre row: {}", row.join(" "));
    Ok(())
}
