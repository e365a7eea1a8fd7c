use super::Scaled;
use crate::{Error, Result};

/// Largest order a row may be requested for.
pub const MAX_ORDER: usize = 10_000;

/// Spherical Bessel and Hankel functions of the first kind at `z = i x`,
/// orders `0..=l_max`, in real scaled form.
///
/// With `F_l = i^{-l} j_l(ix)` and `H_l = i^l h_l^{(1)}(ix)`:
///
/// * `F_l(x) = sqrt(pi/2x) I_{l+1/2}(x) > 0` (modified spherical Bessel `i_l`),
/// * `H_l(x) = -(2/pi) k_l(x) < 0`, so `H_0 = -e^{-x}/x`,
/// * `F'_l = i^{-l} [z j_l(z)]'` and `H'_l = i^l [z h_l(z)]'`, derivatives
///   taken with respect to `z`.
///
/// Order `l` of each kind stores the function and its Riccati derivative
/// against one shared exponent, e.g. `F_l = first_kind[l] * 2^first_exp[l]`.
/// The Riccati Wronskian reads `F_l H'_l - F'_l H_l = 1/x`.
#[derive(Clone, Debug)]
pub struct ScaledBesselRow {
    pub x: f64,
    pub l_max: usize,
    pub first_kind: Vec<f64>,
    pub ric_first: Vec<f64>,
    pub first_exp: Vec<i64>,
    pub third_kind: Vec<f64>,
    pub ric_third: Vec<f64>,
    pub third_exp: Vec<i64>,
}

impl ScaledBesselRow {
    pub fn first(&self, l: usize) -> Scaled {
        Scaled::from_parts(self.first_kind[l], self.first_exp[l])
    }

    pub fn first_ric(&self, l: usize) -> Scaled {
        Scaled::from_parts(self.ric_first[l], self.first_exp[l])
    }

    pub fn third(&self, l: usize) -> Scaled {
        Scaled::from_parts(self.third_kind[l], self.third_exp[l])
    }

    pub fn third_ric(&self, l: usize) -> Scaled {
        Scaled::from_parts(self.ric_third[l], self.third_exp[l])
    }

    /// `[x F_l]' / F_l`-style log-derivative of the first kind, `F'_l / F_l`.
    pub fn first_log_ratio(&self, l: usize) -> f64 {
        self.ric_first[l] / self.first_kind[l]
    }

    /// `H'_l / H_l`, always negative.
    pub fn third_log_ratio(&self, l: usize) -> f64 {
        self.ric_third[l] / self.third_kind[l]
    }

    /// `F_l H'_l - F'_l H_l`, which should equal `1/x`.
    pub fn wronskian(&self, l: usize) -> f64 {
        let scale = Scaled::from_parts(1.0, self.first_exp[l] + self.third_exp[l]);
        let m = self.first_kind[l] * self.ric_third[l] - self.ric_first[l] * self.third_kind[l];
        scale.scale(m).value()
    }
}

/// Evaluates the scaled row of modified spherical Bessel functions.
///
/// The first kind runs Miller's downward recurrence on the ratios
/// `F_l / F_{l-1}`, started `ceil(10 + x)` orders above `l_max` and normalised
/// at `l = 0` by `sinh(x)/x`. The third kind is the dominant solution upward
/// and is recurred in that direction from its closed forms at `l = 0, 1`.
pub fn modified_sph_bessel(l_max: usize, x: f64) -> Result<ScaledBesselRow> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("Bessel argument x", x));
    }
    if l_max > MAX_ORDER {
        return Err(Error::Config(format!(
            "Bessel order cap {l_max} exceeds hard limit {MAX_ORDER}"
        )));
    }
    let n = l_max + 1;
    let mut row = ScaledBesselRow {
        x,
        l_max,
        first_kind: vec![0.0; n],
        ric_first: vec![0.0; n],
        first_exp: vec![0; n],
        third_kind: vec![0.0; n],
        ric_third: vec![0.0; n],
        third_exp: vec![0; n],
    };

    // ratios rho_l = F_l / F_{l-1}, l = 1..=l_max
    let start = l_max + (10.0 + x).ceil() as usize;
    let mut rho = vec![0.0; n];
    let mut next = 0.0;
    for l in (1..=start).rev() {
        let r = 1.0 / ((2 * l + 1) as f64 / x + next);
        if l <= l_max {
            rho[l] = r;
        }
        next = r;
    }

    // l = 0: sinh(x)/x and cosh(x)
    let (f0, df0) = if x < 1.0 {
        (
            Scaled::new(if x < 1e-4 {
                1.0 + x * x / 6.0
            } else {
                x.sinh() / x
            }),
            Scaled::new(x.cosh()),
        )
    } else {
        let ex = Scaled::exp(x);
        let decay = (-2.0 * x).exp();
        (
            ex.scale(-(-2.0 * x).exp_m1() / (2.0 * x)),
            ex.scale(0.5 * (1.0 + decay)),
        )
    };
    let shared = f0.exponent;
    row.first_kind[0] = f0.mantissa;
    row.first_exp[0] = shared;
    row.ric_first[0] = Scaled::from_parts(df0.mantissa, df0.exponent - shared).value();

    let mut current = f0;
    // `l` enters the arithmetic as well as the indexing
    #[allow(clippy::needless_range_loop)]
    for l in 1..=l_max {
        current = current.scale(rho[l]);
        row.first_kind[l] = current.mantissa;
        row.first_exp[l] = current.exponent;
        // [x i_l]' = x i_{l-1} - l i_l
        row.ric_first[l] = current.mantissa * (x / rho[l] - l as f64);
    }

    // third kind: k_l with k_0 = e^{-x}/x, ratios q_l = k_l / k_{l-1}
    let k0 = Scaled::exp(-x).scale(1.0 / x);
    row.third_kind[0] = -k0.mantissa;
    row.third_exp[0] = k0.exponent;
    // [x k_0]' = -e^{-x}
    row.ric_third[0] = k0.mantissa * x;
    let mut current = k0;
    let mut q = 0.0;
    for l in 1..=l_max {
        q = if l == 1 {
            1.0 + 1.0 / x
        } else {
            1.0 / q + (2 * l - 1) as f64 / x
        };
        current = current.scale(q);
        row.third_kind[l] = -current.mantissa;
        row.third_exp[l] = current.exponent;
        // [x k_l]' = -x k_{l-1} - l k_l, and H' = -[x k]'
        row.ric_third[l] = current.mantissa * (x / q + l as f64);
    }
    Ok(row)
}
