use std::ops::{Div, Mul};

/// A real number stored as `mantissa * 2^exponent`.
///
/// Normalised values keep `0.5 <= |mantissa| < 1`; zero has exponent 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub exponent: i64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        mantissa: 0.0,
        exponent: 0,
    };

    pub fn new(value: f64) -> Self {
        Self::from_parts(value, 0)
    }

    pub fn from_parts(mantissa: f64, exponent: i64) -> Self {
        if mantissa == 0.0 || !mantissa.is_finite() {
            return Scaled {
                mantissa,
                exponent: if mantissa == 0.0 { 0 } else { exponent },
            };
        }
        let (m, e) = frexp(mantissa);
        Scaled {
            mantissa: m,
            exponent: exponent + e as i64,
        }
    }

    /// `e^x` without overflow.
    pub fn exp(x: f64) -> Self {
        let t = x / std::f64::consts::LN_2;
        let n = t.floor();
        let frac = (x - n * std::f64::consts::LN_2).exp();
        Self::from_parts(frac, n as i64)
    }

    /// Unscaled value; saturates to 0 or ±inf outside the f64 range.
    pub fn value(self) -> f64 {
        if self.exponent > i32::MAX as i64 {
            return self.mantissa * f64::INFINITY;
        }
        if self.exponent < i32::MIN as i64 {
            return self.mantissa * 0.0;
        }
        ldexp(self.mantissa, self.exponent as i32)
    }

    /// Base-2 logarithm of the magnitude.
    pub fn log2_abs(self) -> f64 {
        self.mantissa.abs().log2() + self.exponent as f64
    }

    pub fn signum(self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    pub fn scale(self, factor: f64) -> Self {
        Self::from_parts(self.mantissa * factor, self.exponent)
    }

    pub fn powi(self, n: i32) -> Self {
        let mut acc = Scaled::new(1.0);
        for _ in 0..n.unsigned_abs() {
            acc = acc * self;
        }
        if n < 0 {
            Scaled::new(1.0) / acc
        } else {
            acc
        }
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        Scaled::from_parts(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, rhs: Scaled) -> Scaled {
        Scaled::from_parts(self.mantissa / rhs.mantissa, self.exponent - rhs.exponent)
    }
}

/// Splits a finite non-zero `x` into `m * 2^e` with `0.5 <= |m| < 1`.
fn frexp(x: f64) -> (f64, i32) {
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    if raw_exp == 0 {
        // subnormal
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let e = raw_exp - 1022;
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1022u64 << 52));
    (m, e)
}

/// `x * 2^e`, applied in chunks so intermediate powers never overflow.
pub fn ldexp(mut x: f64, mut e: i32) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e)
}
