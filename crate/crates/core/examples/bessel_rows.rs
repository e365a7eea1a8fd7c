//! Scaled modified spherical Bessel functions at large order and their
//! Wronskian check, plus one row of associated Legendre functions.

use std::f64::consts::LOG10_2;

use poisson_cp::specfun::{assoc_legendre_row, modified_sph_bessel};

fn main() -> poisson_cp::Result<()> {
    // values beyond the f64 range stay representable as scaled numbers
    for x in [1e-3, 1.0, 50.0, 2000.0] {
        let row = modified_sph_bessel(800, x)?;
        println!("x = {x:e}");
        for l in [0, 10, 100, 800] {
            println!(
                "  l = {l:>3}  log10 i_l = {:>9.2}  log10 |k_l| = {:>9.2}  x W - 1 = {:.1e}",
                row.first(l).log2_abs() * LOG10_2,
                row.third(l).log2_abs() * LOG10_2,
                row.wronskian(l) * x - 1.0
            );
        }
    }
    let p = assoc_legendre_row(6, 0.4)?;
    let m: Vec<String> = (0..=6).map(|m| format!("{:.4e}", p.value(m))).collect();
    println!("P_6^m(cos 0.4) = [{}]", m.join(", "));
    Ok(())
}
