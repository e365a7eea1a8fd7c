use poisson_cp::cli::{beam_from_temperature, boltzmann_excited_fraction};
use poisson_cp::constants::ATOMIC_MASS_UNIT;
use poisson_cp::eikonal::{
    annulus_radii, c52, capture_impact_parameter, Beam, PHI_INNER, PHI_OUTER,
};
use poisson_cp::fresnel::{fresnel_zone_width, Scene};
use poisson_cp::materials::PolarizabilityModel;

const C3: f64 = 9.77e-50;

fn indium_beam() -> Beam {
    Beam::new(114.8 * ATOMIC_MASS_UNIT, 521.0).unwrap()
}

#[test]
fn phase_constants() {
    let beam = indium_beam();
    for (r, want) in [
        (50e-9, 6.622e-22),
        (100e-9, 9.365e-22),
        (200e-9, 13.244e-22),
    ] {
        let k = c52(r, C3, &beam).unwrap();
        assert!((k / want - 1.0).abs() < 0.01, "R={r:e}: {k:e}");
    }
}

#[test]
fn annulus_edges() {
    let beam = indium_beam();
    for (r, ri, ro) in [
        (50e-9, 51.2e-9, 83.8e-9),
        (100e-9, 101.4e-9, 138.9e-9),
        (200e-9, 201.6e-9, 244.7e-9),
    ] {
        let k = c52(r, C3, &beam).unwrap();
        let (i, o) = annulus_radii(k, r, PHI_INNER, PHI_OUTER).unwrap();
        assert!(
            (i - ri).abs() < 0.2e-9 && (o - ro).abs() < 0.2e-9,
            "R={r:e}: {i:e} {o:e}"
        );
    }
}

#[test]
fn capture_radii() {
    let beam = indium_beam();
    for (r, want) in [(50e-9, 1.0e-9), (100e-9, 1.2e-9), (200e-9, 1.4e-9)] {
        let a = capture_impact_parameter(r, C3, &beam).unwrap();
        assert!((a - want).abs() < 0.1e-9, "R={r:e}: {a:e}");
    }
}

#[test]
fn zone_widths_near_one_nanometre() {
    let beam = Beam::from_wavelength(114.8 * ATOMIC_MASS_UNIT, 6.67e-12).unwrap();
    for (r, b) in [(50e-9, 0.015e-3), (100e-9, 0.03e-3), (200e-9, 0.06e-3)] {
        let s = Scene::new(r, 0.6, b, beam).unwrap();
        let w = fresnel_zone_width(&s);
        assert!((w / 1e-9 - 1.0).abs() < 0.1, "R={r:e}: {w:e}");
    }
}

#[test]
fn oven_beam_numbers() {
    let b = beam_from_temperature(1473.15, 114.8 * ATOMIC_MASS_UNIT).unwrap();
    assert!((b.speed / 521.0 - 1.0).abs() < 0.01);
    assert!((b.wavelength / 6.67e-12 - 1.0).abs() < 0.01);
    let f = boltzmann_excited_fraction(&PolarizabilityModel::indium(), 1473.15);
    assert!(f > 2.5e-11 && f < 1e-10, "{f:e}");
}
