//! Spectral radius and Perron vector of nonnegative weakly irreducible tensors.
//!
//! The iteration runs on `B + I` rather than `B`: the shift keeps every
//! coordinate strictly positive after one step, so the normalized power map
//! converges even when `B` is not primitive (e.g. bipartite graphs).

use crate::error::{Error, Result};
use crate::tensor::GenTensor;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerronOptions {
    /// Stop once `upper − lower ≤ tol · max(1, upper)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PerronOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerronResult {
    pub rho: f64,
    /// Positive Perron vector with `vector[0] = 1`.
    pub vector: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// Collatz–Wielandt bounds `min_i / max_i (B x^{m-1})_i / x_i^{m-1}` for `x > 0`.
pub fn cw_bounds(b: &GenTensor, x: &[f64]) -> Result<(f64, f64)> {
    if x.iter().any(|&v| v.is_nan() || v <= 0.0) {
        return Err(Error::Argument(
            "Collatz-Wielandt bounds need a positive vector".into(),
        ));
    }
    let bx = b.contract(x)?;
    Ok(ratio_bounds(&bx, x, b.order() - 1))
}

fn ratio_bounds(bx: &[f64], x: &[f64], p: usize) -> (f64, f64) {
    bx.iter()
        .zip(x)
        .map(|(&y, &xi)| y / xi.powi(p as i32))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r), hi.max(r))
        })
}

/// Shifted power iteration from the all-ones vector.
pub fn spectral_radius(b: &GenTensor, opts: &PerronOptions) -> Result<PerronResult> {
    if let Some(orbit) = b.first_negative() {
        return Err(Error::NotNonnegative {
            orbit: orbit.iter().map(|i| i + 1).collect(),
        });
    }
    if !b.weakly_irreducible() {
        return Err(Error::NotWeaklyIrreducible);
    }
    let p = b.order() - 1;
    let exponent = 1.0 / p as f64;
    let mut x: Vec<f64> = vec![1.0; b.dim()];
    let (mut lower, mut upper) = (f64::NAN, f64::NAN);

    for iter in 1..=opts.max_iter {
        // (B + I) x^{m-1}
        let mut y = b.contract(&x)?;
        for (yi, &xi) in y.iter_mut().zip(&x) {
            *yi += xi.powi(p as i32);
        }
        (lower, upper) = ratio_bounds(&y, &x, p);
        if upper - lower <= opts.tol * upper.max(1.0) {
            let rho = 0.5 * (lower + upper) - 1.0;
            let first = x[0];
            let vector: Vec<f64> = x.iter().map(|v| v / first).collect();
            let residual = b.residual_real(rho, &vector)?;
            return Ok(PerronResult {
                rho,
                vector,
                lower: lower - 1.0,
                upper: upper - 1.0,
                iterations: iter,
                residual,
            });
        }
        let max = y.iter().copied().fold(0.0, f64::max);
        for (xi, &yi) in x.iter_mut().zip(&y) {
            *xi = (yi / max).powf(exponent);
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        lower: lower - 1.0,
        upper: upper - 1.0,
    })
}
