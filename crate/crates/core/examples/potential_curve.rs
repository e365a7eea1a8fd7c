//! Full Casimir-Polder potential around a 50 nm sphere, stitched to the
//! half-space form close to the surface.

use poisson_cp::cp_potential::{stitched_potential, SphereSystem};
use poisson_cp::materials::{DrudeLorentzModel, PolarizabilityModel};

fn main() -> poisson_cp::Result<()> {
    let sys = SphereSystem::new(
        50e-9,
        DrudeLorentzModel::silica(),
        PolarizabilityModel::indium(),
        400,
    )?;
    let grid: Vec<f64> = (0..24)
        .map(|k| sys.radius + 0.3e-9 * 10f64.powf(3.5 * k as f64 / 23.0))
        .collect();
    let curve = stitched_potential(&sys, &grid)?;
    println!(
        "stitched {:.3} nm above the surface, mismatch {:.4}",
        (curve.r_stitch - sys.radius) * 1e9,
        curve.joint_mismatch
    );
    print!("{}", curve.to_text());
    Ok(())
}
