#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use poisson_cp::fresnel::Scene;

/// Composite Simpson rule, `n` even.
pub fn simpson_c(a: f64, b: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Relative intensity behind the sphere by direct 2-D quadrature in polar
/// coordinates about the sphere centre: the free plane wave minus the
/// opaque disk, plus `e^{i phi} - 1` over the CP annulus.
pub fn brute_force_intensity(rho_p: f64, scene: &Scene, n_r: usize, n_ang: usize) -> f64 {
    let lambda = scene.beam.wavelength;
    let kappa = PI / lambda * (1.0 / scene.g + 1.0 / scene.b);
    let c = rho_p * scene.g / (scene.g + scene.b);
    let angles: Vec<f64> = (0..n_ang)
        .map(|j| (2.0 * PI * j as f64 / n_ang as f64).cos())
        .collect();
    let ring = |r: f64| -> Complex64 {
        let s: Complex64 = angles
            .iter()
            .map(|&cos| Complex64::from_polar(1.0, kappa * (r * r + c * c - 2.0 * r * c * cos)))
            .sum();
        s * (2.0 * PI / n_ang as f64) * r
    };
    let (r_in, r_out) = match &scene.phase {
        Some(p) => (p.r_inner, p.r_outer),
        None => (scene.radius, scene.radius),
    };
    let mut d = -simpson_c(0.0, r_in, n_r, ring);
    if let Some(p) = &scene.phase {
        d += simpson_c(r_in, r_out, n_r, |r| {
            let phi = p.phase_at(r - scene.radius);
            ring(r) * (Complex64::from_polar(1.0, phi) - 1.0)
        });
    }
    let free = Complex64::new(0.0, PI / kappa);
    (free + d).norm_sqr() / free.norm_sqr()
}

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use poisson_cp::cp_potential::ModeFactors;
use poisson_cp::specfun::assoc_legendre_row;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `i_l(x)` for integer `x` from its power series
/// `x^l sum_k (x^2/2)^k / (k! (2l+2k+1)!!)`, summed in exact rationals
/// until the terms drop below `1e-30` of the sum.
pub fn first_kind_series(l: usize, x: i64) -> f64 {
    let x2 = rat(x * x) / rat(2);
    let mut dfact = BigRational::one();
    for j in 1..=l {
        dfact *= rat(2 * j as i64 + 1);
    }
    let mut term = rat(x).pow(l as i32) / dfact;
    let mut sum = BigRational::zero();
    let tiny = BigRational::new(BigInt::one(), BigInt::from(10).pow(30));
    for k in 0.. {
        sum += &term;
        let next = &term * &x2 / (rat(k as i64 + 1) * rat(2 * (l + k) as i64 + 3));
        if k > 5 && next < &sum * &tiny {
            break;
        }
        term = next;
    }
    sum.to_f64().unwrap()
}

/// `-(2/pi) k_l(x) = -(e^{-x}/x) sum_k (l+k)! / (k! (l-k)! (2x)^k)`, the sum
/// done in exact rationals.
pub fn third_kind_closed(l: usize, x: f64) -> f64 {
    let xr = BigRational::from_float(x).unwrap();
    let mut sum = BigRational::zero();
    for k in 0..=l {
        let mut c = BigRational::one();
        for j in (l - k + 1)..=(l + k) {
            c *= rat(j as i64);
        }
        for j in 1..=k {
            c /= rat(j as i64);
        }
        sum += c / (rat(2) * &xr).pow(k as i32);
    }
    -(-x).exp() / x * sum.to_f64().unwrap()
}

/// Coefficients of `P_l(t)` by Rodrigues' formula, lowest power first.
fn legendre_poly(l: usize) -> Vec<BigRational> {
    // (t^2 - 1)^l
    let mut c = vec![BigRational::zero(); 2 * l + 1];
    for k in 0..=l {
        let mut binom = BigRational::one();
        for j in 0..k {
            binom = binom * rat((l - j) as i64) / rat(j as i64 + 1);
        }
        let sign = if (l - k).is_multiple_of(2) { 1 } else { -1 };
        c[2 * k] = binom * rat(sign);
    }
    for _ in 0..l {
        c = derivative(&c);
    }
    let mut norm = rat(1);
    for j in 1..=l {
        norm *= rat(2 * j as i64);
    }
    c.into_iter().map(|v| v / &norm).collect()
}

fn derivative(c: &[BigRational]) -> Vec<BigRational> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, v)| v * rat(k as i64))
        .collect()
}

/// `P_l^m(cos theta)` with the Condon-Shortley phase.
pub fn legendre_exact(l: usize, m: usize, theta: f64) -> f64 {
    let mut c = legendre_poly(l);
    for _ in 0..m {
        c = derivative(&c);
    }
    let t = theta.cos();
    let poly = c
        .iter()
        .rev()
        .fold(0.0, |acc, v| acc * t + v.to_f64().unwrap());
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * theta.sin().powi(m as i32) * poly
}

/// Per-degree trace contribution written as the explicit sum over `m` of
/// products of associated Legendre functions at polar angle `theta`.
pub fn m_sum_term(f: &ModeFactors, theta: f64) -> f64 {
    let l = f.l;
    let lf = l as f64;
    let row = assoc_legendre_row(l, theta).unwrap();
    let mut acc = 0.0;
    for m in 0..=l {
        let weight = if m == 0 { 1.0 } else { 2.0 };
        // values are normalised by sqrt((l-m)!/(l+m)!), so squares carry it
        let p2 = row.values[m] * row.values[m];
        let tang = row.m_over_sin[m].powi(2) + row.dtheta[m].powi(2);
        acc += weight
            * (f.te * tang + f.tm_radial * (lf * (lf + 1.0)).powi(2) * p2 + f.tm_tangential * tang);
    }
    (2.0 * lf + 1.0) / (lf * (lf + 1.0)) * acc
}
