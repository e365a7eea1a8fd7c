//! Gauss-Legendre quadrature on `[0, inf)` through the map
//! `xi = scale * t / (1 - t)`.
//!
//! The base rule has 60 nodes and is doubled until two successive estimates
//! agree to the requested relative tolerance. Node sets are built once per
//! level and shared.

use std::sync::OnceLock;

use crate::{Error, Result};

pub const BASE_NODES: usize = 60;
/// Number of doublings allowed beyond the base rule (60 * 2^6 = 3840 nodes).
pub const MAX_DOUBLINGS: usize = 6;
pub const DEFAULT_REL_TOL: f64 = 1e-4;

static LEVELS: [OnceLock<GaussLegendre>; MAX_DOUBLINGS + 1] =
    [const { OnceLock::new() }; MAX_DOUBLINGS + 1];

/// Nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from the Tricomi initial guesses.
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_and_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// `n = BASE_NODES * 2^level`, cached.
    pub fn level(level: usize) -> &'static GaussLegendre {
        LEVELS[level].get_or_init(|| GaussLegendre::new(BASE_NODES << level))
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + half * t))
            .sum::<f64>()
            * half
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Mapped rule at a given refinement level.
pub fn semi_infinite_at_level(
    level: usize,
    scale: f64,
    f: &(impl Fn(f64) -> Result<f64> + ?Sized),
) -> Result<f64> {
    let rule = GaussLegendre::level(level);
    let mut acc = 0.0;
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        let t = 0.5 * (s + 1.0);
        let one_minus = 1.0 - t;
        let xi = scale * t / one_minus;
        let jac = scale / (one_minus * one_minus);
        acc += 0.5 * w * jac * f(xi)?;
    }
    Ok(acc)
}

/// `int_0^inf f(xi) d xi`, doubling the rule until the relative change drops
/// below `rel_tol`.
pub fn semi_infinite(
    scale: f64,
    rel_tol: f64,
    f: &(impl Fn(f64) -> Result<f64> + ?Sized),
) -> Result<f64> {
    let mut prev = semi_infinite_at_level(0, scale, f)?;
    let mut rel_err = f64::INFINITY;
    for level in 1..=MAX_DOUBLINGS {
        let cur = semi_infinite_at_level(level, scale, f)?;
        rel_err = if cur == 0.0 {
            (cur - prev).abs()
        } else {
            ((cur - prev) / cur).abs()
        };
        if rel_err < rel_tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature {
        partial: prev,
        rel_err,
    })
}

/// Parallel form of [`semi_infinite_at_level`]. Nodes are evaluated on the
/// rayon pool but summed in ascending order, so results are bit-identical
/// to a serial run.
pub fn semi_infinite_at_level_par(
    level: usize,
    scale: f64,
    f: &(impl Fn(f64) -> Result<f64> + Sync + ?Sized),
) -> Result<f64> {
    use rayon::prelude::*;
    let rule = GaussLegendre::level(level);
    let terms: Vec<f64> = rule
        .nodes
        .par_iter()
        .zip(rule.weights.par_iter())
        .map(|(&s, &w)| {
            let t = 0.5 * (s + 1.0);
            let one_minus = 1.0 - t;
            let xi = scale * t / one_minus;
            let jac = scale / (one_minus * one_minus);
            Ok(0.5 * w * jac * f(xi)?)
        })
        .collect::<Result<_>>()?;
    Ok(terms.iter().sum())
}

/// Parallel form of [`semi_infinite`].
pub fn semi_infinite_par(
    scale: f64,
    rel_tol: f64,
    f: &(impl Fn(f64) -> Result<f64> + Sync + ?Sized),
) -> Result<f64> {
    let mut prev = semi_infinite_at_level_par(0, scale, f)?;
    let mut rel_err = f64::INFINITY;
    for level in 1..=MAX_DOUBLINGS {
        let cur = semi_infinite_at_level_par(level, scale, f)?;
        rel_err = if cur == 0.0 {
            (cur - prev).abs()
        } else {
            ((cur - prev) / cur).abs()
        };
        if rel_err < rel_tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature {
        partial: prev,
        rel_err,
    })
}
