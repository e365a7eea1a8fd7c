use super::SphereSystem;
use crate::constants::SPEED_OF_LIGHT;
use crate::specfun::{modified_sph_bessel, Scaled, ScaledBesselRow};
use crate::{Error, Result};

/// Bessel data of the sphere boundary at one imaginary frequency: rows at
/// `x1 = xi R / c` (outside) and `x2 = x1 sqrt(eps)` (inside).
pub(crate) struct SphereModes {
    pub eps: f64,
    outer: ScaledBesselRow,
    inner: ScaledBesselRow,
}

/// One multipole's contribution to the coincident Green's-tensor trace at
/// `kr = i x`, already reduced to real numbers.
///
/// The l-th term of the trace is
/// `(2l+1) [te + l(l+1) tm_radial + tm_tangential]`; all three are positive
/// for a dielectric sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeFactors {
    pub l: usize,
    /// `r_TE h_l^2`
    pub te: f64,
    /// `r_TM h_l^2 / (kr)^2`
    pub tm_radial: f64,
    /// `r_TM [kr h_l]'^2 / (kr)^2`
    pub tm_tangential: f64,
}

impl ModeFactors {
    pub fn trace_term(&self) -> f64 {
        let l = self.l as f64;
        (2.0 * l + 1.0) * (self.te + l * (l + 1.0) * self.tm_radial + self.tm_tangential)
    }
}

impl SphereModes {
    pub fn new(l_max: usize, xi: f64, sys: &SphereSystem) -> Result<Self> {
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(Error::domain("imaginary frequency xi", xi));
        }
        let eps = sys.sphere.eps_imag(xi);
        let x1 = xi * sys.radius / SPEED_OF_LIGHT;
        let x2 = x1 * eps.sqrt();
        let outer = modified_sph_bessel(l_max, x1)?;
        let inner = if x2 == x1 {
            outer.clone()
        } else {
            modified_sph_bessel(l_max, x2)?
        };
        Ok(SphereModes { eps, outer, inner })
    }

    /// `i_l(x1) / k_l(x1)` (positive) together with the two coefficient
    /// fractions `(L2 - L1)/(L2 - M1)` and `(eps L1 - L2)/(eps M1 - L2)`.
    fn parts(&self, l: usize) -> (Scaled, f64, f64) {
        let l1 = self.outer.first_log_ratio(l);
        let m1 = self.outer.third_log_ratio(l);
        let l2 = self.inner.first_log_ratio(l);
        let ratio = self.outer.first(l) / self.outer.third(l);
        let te = (l2 - l1) / (l2 - m1);
        let tm = (self.eps * l1 - l2) / (self.eps * m1 - l2);
        (Scaled::from_parts(-ratio.mantissa, ratio.exponent), te, tm)
    }

    pub fn reflection(&self, l: usize) -> (f64, f64) {
        let (ratio, te, tm) = self.parts(l);
        let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
        let r = ratio.value();
        (sign * r * te, sign * r * tm)
    }

    pub fn factors(&self, l: usize, at: &ScaledBesselRow) -> ModeFactors {
        let (ratio, te, tm) = self.parts(l);
        let h = at.third(l);
        let base = (ratio * h * h).value();
        let x = at.x;
        let m = at.third_log_ratio(l);
        let tm_base = -base * tm / (x * x);
        ModeFactors {
            l,
            te: base * te,
            tm_radial: tm_base,
            tm_tangential: tm_base * m * m,
        }
    }
}

/// Mie reflection coefficients `(r_TE, r_TM)` of order `l` at imaginary
/// frequency `xi`. Real on the imaginary axis; both vanish for `eps = 1`.
pub fn mie_coefficients(l: usize, xi: f64, sys: &SphereSystem) -> Result<(f64, f64)> {
    if l == 0 {
        return Err(Error::Config("Mie coefficients start at l = 1".into()));
    }
    Ok(SphereModes::new(l, xi, sys)?.reflection(l))
}

/// Per-order trace factors for `l = 1..=l_max` at centre distance `r`.
pub fn mode_factors(l_max: usize, r: f64, xi: f64, sys: &SphereSystem) -> Result<Vec<ModeFactors>> {
    sys.check_outside(r)?;
    let modes = SphereModes::new(l_max, xi, sys)?;
    let at = modified_sph_bessel(l_max, xi * r / SPEED_OF_LIGHT)?;
    Ok((1..=l_max).map(|l| modes.factors(l, &at)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{DrudeLorentzModel, PolarizabilityModel};
    use num_complex::Complex64;

    fn system(radius: f64, sphere: DrudeLorentzModel) -> SphereSystem {
        SphereSystem::new(radius, sphere, PolarizabilityModel::indium(), 50).unwrap()
    }

    /// `j_l(z)` and `h_l(z)` for `l = 0..=n` by upward recurrence from the
    /// elementary closed forms; adequate at moderate order and argument.
    fn complex_rows(n: usize, z: Complex64) -> (Vec<Complex64>, Vec<Complex64>) {
        let i = Complex64::i();
        let mut j = vec![z.sin() / z, z.sin() / (z * z) - z.cos() / z];
        let mut h = vec![-i * (i * z).exp() / z, -(z + i) * (i * z).exp() / (z * z)];
        for l in 1..n {
            let c = (2 * l + 1) as f64 / z;
            j.push(c * j[l] - j[l - 1]);
            h.push(c * h[l] - h[l - 1]);
        }
        (j, h)
    }

    fn naive(l: usize, x1: f64, eps: f64) -> (Complex64, Complex64) {
        let z1 = Complex64::new(0.0, x1);
        let z2 = z1 * eps.sqrt();
        let (j1, h1) = complex_rows(l + 1, z1);
        let (j2, _) = complex_rows(l + 1, z2);
        let lf = l as f64;
        let dj1 = z1 * j1[l - 1] - lf * j1[l];
        let dh1 = z1 * h1[l - 1] - lf * h1[l];
        let dj2 = z2 * j2[l - 1] - lf * j2[l];
        let te = -(j1[l] * dj2 - dj1 * j2[l]) / (h1[l] * dj2 - dh1 * j2[l]);
        let tm = -(eps * j2[l] * dj1 - j1[l] * dj2) / (eps * dh1 * j2[l] - h1[l] * dj2);
        (te, tm)
    }

    #[test]
    fn matches_direct_complex_evaluation() {
        let sys = system(500e-9, DrudeLorentzModel::silica());
        let xi = 1e15;
        let eps = sys.sphere.eps_imag(xi);
        let x1 = xi * sys.radius / SPEED_OF_LIGHT;
        for l in 1..=5 {
            let (te, tm) = mie_coefficients(l, xi, &sys).unwrap();
            let (cte, ctm) = naive(l, x1, eps);
            assert!(cte.im.abs() < 1e-12 * cte.norm() && ctm.im.abs() < 1e-12 * ctm.norm());
            assert!(
                ((te - cte.re) / cte.re).abs() < 1e-8,
                "l={l}: {te} vs {cte}"
            );
            assert!(
                ((tm - ctm.re) / ctm.re).abs() < 1e-8,
                "l={l}: {tm} vs {ctm}"
            );
        }
    }

    #[test]
    fn vacuum_sphere_reflects_nothing() {
        let sys = system(100e-9, DrudeLorentzModel::vacuum());
        for l in [1, 3, 20] {
            for xi in [1e12, 1e15, 1e18] {
                assert_eq!(mie_coefficients(l, xi, &sys).unwrap(), (0.0, 0.0));
            }
        }
    }

    #[test]
    fn small_sphere_dipole_limit() {
        let sys = system(1e-9, DrudeLorentzModel::silica());
        // static permittivity: xi far below every resonance
        let xi = 1e9;
        let eps = sys.sphere.eps_imag(xi);
        let x1 = xi * sys.radius / SPEED_OF_LIGHT;
        let (_, tm) = mie_coefficients(1, xi, &sys).unwrap();
        let lead = 2.0 / 3.0 * x1.powi(3) * (eps - 1.0) / (eps + 2.0);
        assert!(((tm - lead) / lead).abs() < 1e-6);
    }

    #[test]
    fn factors_positive_and_zero_order_rejected() {
        let sys = system(200e-9, DrudeLorentzModel::silica());
        for f in mode_factors(40, 210e-9, 3e15, &sys).unwrap() {
            assert!(f.te > 0.0 && f.tm_radial > 0.0 && f.tm_tangential > 0.0);
        }
        assert!(mie_coefficients(0, 1e15, &sys).is_err());
        assert!(mode_factors(5, 100e-9, 1e15, &sys).is_err());
    }
}
