//! Brute-force cross-checks for small instances.
//!
//! Neither scan touches the Smith normal form: `phase_scan` tests every
//! candidate phase pattern against the eigen-equation, and `kernel_scan` tests
//! every vector of `Z_m^n` against the congruences directly.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::eigenvariety::ExponentVector;
use crate::error::{Error, Result};
use crate::smith::IntMatrix;
use crate::tensor::GenTensor;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    PhaseScan,
    KernelScan,
}

impl fmt::Display for OracleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleMethod::PhaseScan => "phase_scan",
            OracleMethod::KernelScan => "kernel_scan",
        })
    }
}

/// Outcome of comparing a brute-force scan with the algebraic route.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub instance: String,
    pub method: OracleMethod,
    pub candidates: u64,
    pub found_count: u64,
    pub expected_count: u64,
    /// Vectors in exactly one of the two sets.
    pub mismatches: Vec<Vec<u64>>,
    pub elapsed: Duration,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.found_count == self.expected_count && self.mismatches.is_empty()
    }
}

/// Raw result of a scan: candidates tried and those accepted, in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    pub method: OracleMethod,
    pub candidates: u64,
    pub accepted: Vec<Vec<u64>>,
    pub elapsed: Duration,
}

impl Scan {
    /// Compares with the expected set (e.g. from the kernel route).
    pub fn compare<I, V>(&self, instance: impl Into<String>, expected: I) -> OracleReport
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[u64]>,
    {
        let found: BTreeSet<&[u64]> = self.accepted.iter().map(Vec::as_slice).collect();
        let expected: Vec<V> = expected.into_iter().collect();
        let expected_set: BTreeSet<&[u64]> = expected.iter().map(AsRef::as_ref).collect();
        let mismatches = found
            .symmetric_difference(&expected_set)
            .map(|v| v.to_vec())
            .collect();
        OracleReport {
            instance: instance.into(),
            method: self.method,
            candidates: self.candidates,
            found_count: self.accepted.len() as u64,
            expected_count: expected_set.len() as u64,
            mismatches,
            elapsed: self.elapsed,
        }
    }

    /// Compares only the count, for when no expected set is materialized.
    pub fn compare_count(&self, instance: impl Into<String>, expected: u64) -> OracleReport {
        OracleReport {
            instance: instance.into(),
            method: self.method,
            candidates: self.candidates,
            found_count: self.accepted.len() as u64,
            expected_count: expected,
            mismatches: Vec::new(),
            elapsed: self.elapsed,
        }
    }
}

fn candidate_count(m: u64, free: usize, budget: u64) -> Result<u64> {
    let required = num_traits::pow(BigUint::from(m), free);
    match required.to_u64() {
        Some(c) if c <= budget => Ok(c),
        _ => Err(Error::BudgetExceeded {
            required: required.to_string(),
            budget,
        }),
    }
}

/// Digits of `index` in base `m`, most significant first, into `out`.
fn decode(mut index: u64, m: u64, out: &mut [u64]) {
    for slot in out.iter_mut().rev() {
        *slot = index % m;
        index /= m;
    }
}

/// Tests every `φ ∈ Z_m^n` with `φ[0] = 0` for `residual(t, λ, ω^φ·v_p) ≤ tol`.
pub fn phase_scan(
    t: &GenTensor,
    perron: &[f64],
    lambda: f64,
    tol: f64,
    budget: u64,
) -> Result<Scan> {
    let start = Instant::now();
    let n = t.dim();
    if perron.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: perron.len(),
        });
    }
    if !t.weakly_irreducible() {
        return Err(Error::NotWeaklyIrreducible);
    }
    let m = t.order() as u64;
    let candidates = candidate_count(m, n - 1, budget)?;
    // direct trig tables, independent of the eigenvariety helpers
    let roots: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / m as f64))
        .collect();
    let lambda = Complex64::from(lambda);

    let accepted: Vec<Vec<u64>> = (0..candidates)
        .into_par_iter()
        .filter_map(|idx| {
            let mut phi = vec![0u64; n];
            decode(idx, m, &mut phi[1..]);
            let y: Vec<Complex64> = phi
                .iter()
                .zip(perron)
                .map(|(&k, &v)| roots[k as usize] * v)
                .collect();
            match t.residual(lambda, &y) {
                Ok(r) if r <= tol => Some(phi),
                _ => None,
            }
        })
        .collect();

    Ok(Scan {
        method: OracleMethod::PhaseScan,
        candidates,
        accepted,
        elapsed: start.elapsed(),
    })
}

/// Enumerates `x ∈ Z_m^n` (with `x[0] = 0` when `fix_first_zero`) and keeps
/// those with `B x ≡ 0 (mod m)`.
pub fn kernel_scan(b: &IntMatrix, m: u64, fix_first_zero: bool, budget: u64) -> Result<Scan> {
    let start = Instant::now();
    if m < 2 {
        return Err(Error::Argument(format!(
            "modulus must be at least 2, got {m}"
        )));
    }
    let n = b.ncols();
    let fixed = usize::from(fix_first_zero && n > 0);
    let candidates = candidate_count(m, n - fixed, budget)?;
    let big_m = num_bigint::BigInt::from(m);
    let rows: Vec<Vec<u64>> = (0..b.nrows())
        .map(|i| {
            b.row(i)
                .iter()
                .map(|v| {
                    let r = v % &big_m;
                    let r = if r < num_bigint::BigInt::zero() {
                        r + &big_m
                    } else {
                        r
                    };
                    r.to_u64().expect("residue fits")
                })
                .collect()
        })
        .collect();

    let accepted: Vec<Vec<u64>> = (0..candidates)
        .into_par_iter()
        .filter_map(|idx| {
            let mut x = vec![0u64; n];
            decode(idx, m, &mut x[fixed..]);
            let ok = rows.iter().all(|row| {
                row.iter().zip(&x).fold(0u128, |acc, (&a, &xi)| {
                    (acc + a as u128 * xi as u128) % m as u128
                }) == 0
            });
            ok.then_some(x)
        })
        .collect();

    Ok(Scan {
        method: OracleMethod::KernelScan,
        candidates,
        accepted,
        elapsed: start.elapsed(),
    })
}

/// Convenience: exponent sets as plain vectors, for [`Scan::compare`].
pub fn exponent_rows(exps: &[ExponentVector]) -> Vec<&[u64]> {
    exps.iter().map(ExponentVector::as_slice).collect()
}
