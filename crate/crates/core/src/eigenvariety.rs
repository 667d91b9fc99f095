//! Eigenvectors of the least H-eigenvalue of combinatorial symmetric Z-tensors
//! (and of the spectral radius of nonnegative ones), enumerated exactly.
//!
//! Every such eigenvector has the form `y_j = ω^{φ_j} · v_p[j]` with
//! `ω = exp(2πi/m)`, `v_p` the Perron vector, and `φ` in the kernel of the
//! incidence matrix over `Z_m` normalized to `φ_1 = 0`. Results carry the
//! exponent vectors `φ`; complex vectors are materialized on demand.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::{classify, Hypergraph};
use crate::perron::{spectral_radius, PerronOptions};
use crate::smith::{kernel_mod, snf_mod, SmithForm};
use crate::tensor::{structured_tensor, GenTensor, TensorKind};

/// Largest kernel we are willing to enumerate by default.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

/// `φ ∈ Z_m^n` with `φ[0] = 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(Vec<u64>);

impl ExponentVector {
    /// Normalizes arbitrary residues: reduces mod `m` and subtracts the first entry.
    pub fn normalized(mut phi: Vec<u64>, m: u64) -> Self {
        let first = phi.first().copied().unwrap_or(0) % m;
        for x in &mut phi {
            *x = (*x % m + m - first) % m;
        }
        Self(phi)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Self, m: u64) -> Self {
        Self::normalized(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(), m)
    }

    pub fn neg(&self, m: u64) -> Self {
        Self::normalized(self.0.iter().map(|&a| (m - a % m) % m).collect(), m)
    }

    pub fn scale(&self, k: u64, m: u64) -> Self {
        Self::normalized(self.0.iter().map(|&a| (a * (k % m)) % m).collect(), m)
    }

    /// Additive order in `Z_m^n`.
    pub fn order(&self, m: u64) -> u64 {
        (1..=m)
            .find(|&k| self.scale(k, m).0.iter().all(|&x| x == 0))
            .unwrap_or(m)
    }

    /// `y_j = ω^{φ_j} · v_p[j]`.
    pub fn realize(&self, perron: &[f64], m: u64) -> Vec<Complex64> {
        self.0
            .iter()
            .zip(perron)
            .map(|(&k, &v)| root_of_unity(k, m) * v)
            .collect()
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `exp(2πi k/m)`, with exact values at the quarter turns.
pub fn root_of_unity(k: u64, m: u64) -> Complex64 {
    let k = k % m;
    if (4 * k).is_multiple_of(m) {
        return match 4 * k / m {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Residual acceptance threshold for every emitted eigenvector.
    pub tol: f64,
    pub perron: PerronOptions,
    pub budget: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            perron: PerronOptions::default(),
            budget: DEFAULT_ENUMERATION_BUDGET,
        }
    }
}

/// The projective eigenvariety at one eigenvalue, as exponent vectors over a
/// positive base vector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvarietyResult {
    pub lambda: f64,
    pub perron: Vec<f64>,
    pub modulus: u64,
    /// Sorted lexicographically.
    pub exponents: Vec<ExponentVector>,
    pub snf: SmithForm,
}

impl EigenvarietyResult {
    /// Number of eigenvectors.
    pub fn count(&self) -> usize {
        self.exponents.len()
    }

    pub fn vectors(&self) -> impl Iterator<Item = Vec<Complex64>> + '_ {
        self.exponents
            .iter()
            .map(|phi| phi.realize(&self.perron, self.modulus))
    }
}

fn incidence_snf(t: &GenTensor) -> Result<SmithForm> {
    snf_mod(&t.incidence(true).matrix(), t.order() as u64)
}

/// `m^{n−1−r} · ∏ d_i` from the incidence matrix alone.
pub fn stabilizing_index(t: &GenTensor) -> Result<BigUint> {
    if !t.weakly_irreducible() {
        return Err(Error::NotWeaklyIrreducible);
    }
    let snf = incidence_snf(t)?;
    Ok(snf
        .pinned_kernel_size()
        .expect("rank is at most n-1 for weakly irreducible tensors"))
}

/// `PS_0`: kernel of the incidence matrix over `Z_m` with first coordinate 0.
pub fn ps0(t: &GenTensor) -> Result<Vec<ExponentVector>> {
    ps0_with_budget(t, DEFAULT_ENUMERATION_BUDGET)
}

pub fn ps0_with_budget(t: &GenTensor, budget: u64) -> Result<Vec<ExponentVector>> {
    if !t.weakly_irreducible() {
        return Err(Error::NotWeaklyIrreducible);
    }
    let m = t.order() as u64;
    let kernel = kernel_mod(&t.incidence(true).matrix(), m)?;
    let within = kernel.total_count.to_u64().filter(|&c| c <= budget);
    if within.is_none() {
        return Err(Error::BudgetExceeded {
            required: kernel.total_count.to_string(),
            budget,
        });
    }
    let set: BTreeSet<ExponentVector> = kernel
        .iter()
        .filter(|x| x[0] == 0)
        .map(ExponentVector)
        .collect();
    Ok(set.into_iter().collect())
}

fn check_residuals(
    t: &GenTensor,
    lambda: f64,
    perron: &[f64],
    exponents: &[ExponentVector],
    tol: f64,
) -> Result<()> {
    let m = t.order() as u64;
    let lambda = Complex64::from(lambda);
    let failure = exponents
        .par_iter()
        .map(|phi| {
            let r = t.residual(lambda, &phi.realize(perron, m))?;
            Ok((phi, r))
        })
        .find_first(|res: &Result<(&ExponentVector, f64)>| match res {
            Ok((_, r)) => r.is_nan() || *r > tol,
            Err(_) => true,
        });
    match failure {
        None => Ok(()),
        Some(Err(e)) => Err(e),
        Some(Ok((phi, residual))) => Err(Error::ResidualViolation {
            exponents: phi.0.clone(),
            residual,
            tol,
        }),
    }
}

/// Eigenvectors of the least H-eigenvalue `λ_min = s − ρ(B)` of a weakly
/// irreducible Z-tensor `A = sI − B`.
pub fn least_eigenvariety(t: &GenTensor, opts: &EigenOptions) -> Result<EigenvarietyResult> {
    let split = t.z_split()?;
    if !t.weakly_irreducible() {
        return Err(Error::NotWeaklyIrreducible);
    }
    let perron = spectral_radius(&split.nonneg, &opts.perron)?;
    let lambda = split.shift - perron.rho;
    finish(t, lambda, perron.vector, opts)
}

/// Eigenvectors of `ρ(B)` for a nonnegative weakly irreducible tensor.
pub fn rho_eigenvariety(b: &GenTensor, opts: &EigenOptions) -> Result<EigenvarietyResult> {
    let perron = spectral_radius(b, &opts.perron)?;
    finish(b, perron.rho, perron.vector, opts)
}

fn finish(
    t: &GenTensor,
    lambda: f64,
    perron: Vec<f64>,
    opts: &EigenOptions,
) -> Result<EigenvarietyResult> {
    let exponents = ps0_with_budget(t, opts.budget)?;
    check_residuals(t, lambda, &perron, &exponents, opts.tol)?;
    Ok(EigenvarietyResult {
        lambda,
        perron,
        modulus: t.order() as u64,
        exponents,
        snf: incidence_snf(t)?,
    })
}

/// Eigenvectors of the signless Laplacian at 0, or `None` when 0 is not an
/// eigenvalue (odd `m`, or not odd-colorable).
///
/// With an odd coloring `f` and `D = diag(ω^{f})`, `Q = D^{−(m−1)} L D`, so the
/// zero-eigenvectors of `Q` are `D^{−1} y` for `y` in the zero-variety of `L`.
pub fn zero_variety_signless(
    h: &Hypergraph,
    opts: &EigenOptions,
) -> Result<Option<EigenvarietyResult>> {
    let report = classify(h);
    if !report.connected {
        return Err(Error::Disconnected);
    }
    let Some(f) = report.witness_coloring else {
        return Ok(None);
    };
    let m = h.m() as u64;
    let laplacian = least_eigenvariety(&structured_tensor(h, TensorKind::Laplacian), opts)?;
    let mut exponents: Vec<ExponentVector> = laplacian
        .exponents
        .iter()
        .map(|phi| {
            ExponentVector::normalized(
                phi.0
                    .iter()
                    .zip(&f)
                    .map(|(&p, &fv)| p + m - fv % m)
                    .collect(),
                m,
            )
        })
        .collect();
    exponents.sort();
    let q = structured_tensor(h, TensorKind::Signless);
    check_residuals(&q, 0.0, &laplacian.perron, &exponents, opts.tol)?;
    Ok(Some(EigenvarietyResult {
        lambda: 0.0,
        perron: laplacian.perron,
        modulus: m,
        exponents,
        snf: laplacian.snf,
    }))
}

/// `y1 ∘ y2 = D_{y1} D_{y2} v_p` with `D_y = diag(y_j / |y_j|)`.
pub fn quasi_hadamard(
    y1: &[Complex64],
    y2: &[Complex64],
    perron: &[f64],
    tol: f64,
) -> Result<Vec<Complex64>> {
    let n = perron.len();
    for y in [y1, y2] {
        if y.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: y.len(),
            });
        }
        let off = y
            .iter()
            .zip(perron)
            .any(|(yj, &v)| (yj.norm() - v).abs() > tol * v.max(1.0));
        if off {
            return Err(Error::Argument("|y| must equal the Perron vector".into()));
        }
        if n > 0 && (y[0] - Complex64::from(perron[0])).norm() > tol * perron[0].max(1.0) {
            return Err(Error::Argument(
                "first coordinate must be normalized".into(),
            ));
        }
    }
    Ok(y1
        .iter()
        .zip(y2)
        .zip(perron)
        .map(|((a, b), &v)| (a / a.norm()) * (b / b.norm()) * v)
        .collect())
}

/// Diagonal matrix of unit-modulus entries with `d_1 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeMatrix {
    diag: Vec<Complex64>,
}

impl GaugeMatrix {
    pub fn new(diag: Vec<Complex64>, tol: f64) -> Result<Self> {
        if diag.iter().any(|d| (d.norm() - 1.0).abs() > tol) {
            return Err(Error::Argument("gauge entries must have modulus 1".into()));
        }
        if diag
            .first()
            .is_some_and(|d| (d - Complex64::from(1.0)).norm() > tol)
        {
            return Err(Error::Argument("gauge matrix must have d_1 = 1".into()));
        }
        Ok(Self { diag })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            diag: vec![Complex64::from(1.0); n],
        }
    }

    /// `diag(ω^{φ_j})`.
    pub fn from_exponents(phi: &ExponentVector, m: u64) -> Self {
        Self {
            diag: phi.0.iter().map(|&k| root_of_unity(k, m)).collect(),
        }
    }

    pub fn diag(&self) -> &[Complex64] {
        &self.diag
    }
}

/// Whether `A = D^{−(m−1)} A D`, i.e. `d_i^{−(m−1)} ∏_{j∈e∖i} d_j = 1` for
/// every nonzero entry `e` and every choice of first index `i ∈ e`.
pub fn gauge_member(d: &GaugeMatrix, t: &GenTensor, tol: f64) -> bool {
    if d.diag.len() != t.dim() {
        return false;
    }
    let p = t.order() as i32 - 1;
    let one = Complex64::from(1.0);
    // diagonal entries are fixed by any unit-modulus D
    t.orbits().all(|(e, _)| {
        let full: Complex64 = e.iter().map(|&j| d.diag[j]).product();
        let mut firsts: Vec<usize> = e.to_vec();
        firsts.dedup();
        firsts.iter().all(|&i| {
            let di = d.diag[i];
            let factor = full / di * di.powi(-p);
            (factor - one).norm() <= tol
        })
    })
}
