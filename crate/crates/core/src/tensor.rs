//! Symmetric tensors stored as a diagonal plus one value per index orbit.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::perron::{spectral_radius, PerronOptions};
use crate::smith::IntMatrix;

/// Field types the contraction works over (`f64` and `Complex64`).
pub trait Scalar:
    Copy + Zero + One + Add<Output = Self> + Mul<Output = Self> + AddAssign + From<f64>
{
}

impl<T> Scalar for T where
    T: Copy + Zero + One + Add<Output = Self> + Mul<Output = Self> + AddAssign + From<f64>
{
}

/// Order-`m`, dimension-`n` symmetric tensor.
///
/// Off-diagonal entries are keyed by their nondecreasing index tuple; the
/// value applies to every permutation of that tuple. Zero values are never
/// stored.
#[derive(Debug, Clone, PartialEq)]
pub struct GenTensor {
    order: usize,
    dim: usize,
    diag: Vec<f64>,
    orbits: BTreeMap<Vec<usize>, f64>,
}

impl GenTensor {
    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::Argument(format!(
                "tensor order must be at least 2, got {order}"
            )));
        }
        if dim == 0 {
            return Err(Error::Argument("tensor dimension must be positive".into()));
        }
        Ok(Self {
            order,
            dim,
            diag: vec![0.0; dim],
            orbits: BTreeMap::new(),
        })
    }

    /// The identity tensor `I`.
    pub fn identity(order: usize, dim: usize) -> Result<Self> {
        let mut t = Self::zeros(order, dim)?;
        t.diag.fill(1.0);
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn orbits(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.orbits.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn num_orbits(&self) -> usize {
        self.orbits.len()
    }

    pub fn set_diag(&mut self, i: usize, value: f64) -> Result<()> {
        if i >= self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: i + 1,
            });
        }
        self.diag[i] = value;
        Ok(())
    }

    /// Sets the value of the orbit containing `index` (any permutation).
    /// Setting zero removes the orbit.
    pub fn set_orbit(&mut self, index: &[usize], value: f64) -> Result<()> {
        let key = self.orbit_key(index)?;
        if value == 0.0 {
            self.orbits.remove(&key);
        } else {
            self.orbits.insert(key, value);
        }
        Ok(())
    }

    pub fn orbit_value(&self, index: &[usize]) -> Option<f64> {
        let key = self.orbit_key(index).ok()?;
        self.orbits.get(&key).copied()
    }

    fn orbit_key(&self, index: &[usize]) -> Result<Vec<usize>> {
        if index.len() != self.order {
            return Err(Error::DimensionMismatch {
                expected: self.order,
                got: index.len(),
            });
        }
        if let Some(&i) = index.iter().find(|&&i| i >= self.dim) {
            return Err(Error::Argument(format!(
                "index {} out of range 1..={}",
                i + 1,
                self.dim
            )));
        }
        let mut key = index.to_vec();
        key.sort_unstable();
        if key[0] == key[self.order - 1] {
            return Err(Error::Argument(
                "constant index tuple belongs on the diagonal".into(),
            ));
        }
        Ok(key)
    }

    fn check_shape(&self, other: &GenTensor) -> Result<()> {
        if self.order != other.order {
            return Err(Error::DimensionMismatch {
                expected: self.order,
                got: other.order,
            });
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    /// `a·self + b·other`, entrywise.
    pub fn combine(&self, a: f64, other: &GenTensor, b: f64) -> Result<GenTensor> {
        self.check_shape(other)?;
        let mut out = GenTensor::zeros(self.order, self.dim)?;
        for i in 0..self.dim {
            out.diag[i] = a * self.diag[i] + b * other.diag[i];
        }
        let mut orbits: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for (k, &v) in &self.orbits {
            *orbits.entry(k.clone()).or_default() += a * v;
        }
        for (k, &v) in &other.orbits {
            *orbits.entry(k.clone()).or_default() += b * v;
        }
        orbits.retain(|_, v| *v != 0.0);
        out.orbits = orbits;
        Ok(out)
    }

    /// `s·I − self`.
    pub fn shifted_negation(&self, s: f64) -> GenTensor {
        GenTensor {
            order: self.order,
            dim: self.dim,
            diag: self.diag.iter().map(|&d| s - d).collect(),
            orbits: self.orbits.iter().map(|(k, &v)| (k.clone(), -v)).collect(),
        }
    }

    /// Adds a diagonal tensor.
    pub fn add_diagonal(&self, d: &[f64]) -> Result<GenTensor> {
        if d.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: d.len(),
            });
        }
        let mut out = self.clone();
        for (x, &y) in out.diag.iter_mut().zip(d) {
            *x += y;
        }
        Ok(out)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.first_negative().is_none()
    }

    pub(crate) fn first_negative(&self) -> Option<Vec<usize>> {
        if let Some(i) = self.diag.iter().position(|&d| d < 0.0) {
            return Some(vec![i; self.order]);
        }
        self.orbits
            .iter()
            .find(|(_, &v)| v < 0.0)
            .map(|(k, _)| k.clone())
    }

    /// `A x^{m-1}`.
    ///
    /// An orbit `e` with value `a` adds `a · C(e∖i) · ∏_{j∈e∖i} x_j` to
    /// coordinate `i` for each distinct `i ∈ e`, where `C(e∖i)` is the number
    /// of distinct orderings of `e` with one `i` removed.
    pub fn contract<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let m = self.order;
        let mut out: Vec<T> = self
            .diag
            .iter()
            .zip(x)
            .map(|(&d, &xi)| {
                if d == 0.0 {
                    T::zero()
                } else {
                    T::from(d) * power(xi, m - 1)
                }
            })
            .collect();
        let mut counts: Vec<(usize, usize)> = Vec::with_capacity(m);
        for (e, &a) in &self.orbits {
            run_lengths(e, &mut counts);
            for k in 0..counts.len() {
                let (i, _) = counts[k];
                counts[k].1 -= 1;
                let coeff = multinomial(m - 1, counts.iter().map(|&(_, c)| c));
                let mut prod = T::from(a * coeff);
                for &(j, c) in &counts {
                    for _ in 0..c {
                        prod = prod * x[j];
                    }
                }
                counts[k].1 += 1;
                out[i] += prod;
            }
        }
        Ok(out)
    }

    /// Scale-invariant eigen-residual
    /// `max_i |(A x^{m-1})_i − λ x_i^{m-1}| / max_i |x_i|^{m-1}`.
    pub fn residual(&self, lambda: Complex64, x: &[Complex64]) -> Result<f64> {
        let ax = self.contract(x)?;
        let scale = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(Error::ZeroVector);
        }
        let p = self.order - 1;
        let num = ax
            .iter()
            .zip(x)
            .map(|(&a, &xi)| (a - lambda * power(xi, p)).norm())
            .fold(0.0, f64::max);
        Ok(num / scale.powi(p as i32))
    }

    pub fn residual_real(&self, lambda: f64, x: &[f64]) -> Result<f64> {
        let z: Vec<Complex64> = x.iter().map(|&v| Complex64::from(v)).collect();
        self.residual(Complex64::from(lambda), &z)
    }

    /// Strong connectivity of the digraph linking each first index to the
    /// other indices of the same nonzero entry. For symmetric storage the
    /// digraph is symmetric, so a traversal suffices.
    pub fn weakly_irreducible(&self) -> bool {
        let mut adj = vec![Vec::new(); self.dim];
        for e in self.orbits.keys() {
            let mut distinct = e.clone();
            distinct.dedup();
            for &i in &distinct {
                adj[i].extend(distinct.iter().copied().filter(|&j| j != i));
            }
        }
        let mut seen = vec![false; self.dim];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut reached = 1;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if !std::mem::replace(&mut seen[j], true) {
                    reached += 1;
                    queue.push_back(j);
                }
            }
        }
        reached == self.dim
    }

    /// Writes a Z-tensor as `s·I − B` with `B ≥ 0`.
    ///
    /// `s` is the largest diagonal entry, or 1 when no diagonal entry is positive.
    pub fn z_split(&self) -> Result<ZSplit> {
        if let Some((e, &v)) = self.orbits.iter().find(|(_, &v)| v > 0.0) {
            return Err(Error::NotZ {
                orbit: e.iter().map(|i| i + 1).collect(),
                value: v,
            });
        }
        let max_diag = self.diag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let shift = if max_diag > 0.0 { max_diag } else { 1.0 };
        Ok(ZSplit {
            shift,
            nonneg: self.shifted_negation(shift),
        })
    }

    /// Z/M-tensor classification of `self`.
    pub fn m_classify(&self, perron: &PerronOptions) -> Result<MClass> {
        let split = match self.z_split() {
            Ok(split) => split,
            Err(Error::NotZ { orbit, value }) => return Ok(MClass::NotZ { orbit, value }),
            Err(e) => return Err(e),
        };
        let rho = spectral_radius(&split.nonneg, perron)?.rho;
        let cert = MCertificate {
            shift: split.shift,
            rho,
        };
        let gap = split.shift - rho;
        Ok(if gap.abs() <= CLASS_TOL * split.shift.max(1.0) {
            MClass::SingularM(cert)
        } else if gap > 0.0 {
            MClass::NonsingularM(cert)
        } else {
            MClass::ZNotM(cert)
        })
    }

    /// Incidence matrix over the nonzero sorted index tuples `E(A)`.
    ///
    /// Diagonal tuples contribute rows `m·e_i`, which vanish mod `m`; with
    /// `drop_zero_rows` such rows are omitted.
    pub fn incidence(&self, drop_zero_rows: bool) -> IncidenceMatrix {
        let m = self.order;
        let mut rows: Vec<(Vec<usize>, Vec<i64>)> = Vec::new();
        if !drop_zero_rows {
            for (i, &d) in self.diag.iter().enumerate() {
                if d != 0.0 {
                    let mut b = vec![0; self.dim];
                    b[i] = m as i64;
                    rows.push((vec![i; m], b));
                }
            }
        }
        for e in self.orbits.keys() {
            let mut b = vec![0; self.dim];
            for &j in e {
                b[j] += 1;
            }
            rows.push((e.clone(), b));
        }
        rows.sort();
        IncidenceMatrix {
            modulus: m as u64,
            dim: self.dim,
            rows,
            dropped_zero_rows: drop_zero_rows,
        }
    }
}

/// Relative gap below which `s` and `ρ(B)` are treated as equal.
pub const CLASS_TOL: f64 = 1e-8;

/// `x^p` by repeated multiplication.
fn power<T: Scalar>(x: T, p: usize) -> T {
    let mut acc = T::one();
    for _ in 0..p {
        acc = acc * x;
    }
    acc
}

/// (index, multiplicity) pairs of a sorted tuple.
fn run_lengths(e: &[usize], out: &mut Vec<(usize, usize)>) {
    out.clear();
    for &i in e {
        match out.last_mut() {
            Some((j, c)) if *j == i => *c += 1,
            _ => out.push((i, 1)),
        }
    }
}

/// `total! / ∏ c!` computed exactly, then converted.
fn multinomial(total: usize, counts: impl Iterator<Item = usize>) -> f64 {
    // product of binomials keeps intermediates small
    let mut acc: u128 = 1;
    let mut placed = 0u128;
    for c in counts {
        for k in 1..=c as u128 {
            placed += 1;
            acc = acc * placed / k;
        }
    }
    debug_assert_eq!(placed, total as u128);
    acc as f64
}

/// The structured tensors of a uniform hypergraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TensorKind {
    Adjacency,
    Laplacian,
    Signless,
}

impl TensorKind {
    pub fn name(self) -> &'static str {
        match self {
            TensorKind::Adjacency => "adjacency",
            TensorKind::Laplacian => "laplacian",
            TensorKind::Signless => "signless",
        }
    }
}

impl fmt::Display for TensorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TensorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjacency" | "A" => Ok(TensorKind::Adjacency),
            "laplacian" | "L" => Ok(TensorKind::Laplacian),
            "signless" | "Q" => Ok(TensorKind::Signless),
            other => Err(Error::Argument(format!("unknown tensor kind {other:?}"))),
        }
    }
}

/// Adjacency, Laplacian or signless Laplacian tensor of `h`.
///
/// Each edge becomes an orbit with value `±1/(m−1)!`; the Laplacians carry
/// the degrees on the diagonal.
pub fn structured_tensor(h: &Hypergraph, kind: TensorKind) -> GenTensor {
    let m = h.m();
    let unit = 1.0 / (1..m).map(|k| k as f64).product::<f64>();
    let (value, diag) = match kind {
        TensorKind::Adjacency => (unit, false),
        TensorKind::Laplacian => (-unit, true),
        TensorKind::Signless => (unit, true),
    };
    let mut t = GenTensor::zeros(m, h.n()).expect("hypergraph has m >= 2 and n >= 1");
    if diag {
        for (d, &deg) in t.diag.iter_mut().zip(h.degrees()) {
            *d = deg as f64;
        }
    }
    for e in h.edges() {
        t.orbits.insert(e.clone(), value);
    }
    t
}

/// `A = s·I − B` with `B ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZSplit {
    pub shift: f64,
    pub nonneg: GenTensor,
}

impl ZSplit {
    /// Rebuilds `s·I − B`.
    pub fn reconstruct(&self) -> GenTensor {
        self.nonneg.shifted_negation(self.shift)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCertificate {
    pub shift: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MClass {
    /// Orbit is 1-indexed.
    NotZ {
        orbit: Vec<usize>,
        value: f64,
    },
    ZNotM(MCertificate),
    SingularM(MCertificate),
    NonsingularM(MCertificate),
}

impl MClass {
    pub fn name(&self) -> &'static str {
        match self {
            MClass::NotZ { .. } => "not-z",
            MClass::ZNotM(_) => "z-not-m",
            MClass::SingularM(_) => "singular-m",
            MClass::NonsingularM(_) => "nonsingular-m",
        }
    }

    pub fn certificate(&self) -> Option<MCertificate> {
        match self {
            MClass::NotZ { .. } => None,
            MClass::ZNotM(c) | MClass::SingularM(c) | MClass::NonsingularM(c) => Some(*c),
        }
    }
}

/// Rows `b_e` of the incidence matrix, labelled by their index tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub modulus: u64,
    pub dim: usize,
    pub rows: Vec<(Vec<usize>, Vec<i64>)>,
    pub dropped_zero_rows: bool,
}

impl IncidenceMatrix {
    pub fn matrix(&self) -> IntMatrix {
        let rows: Vec<&[i64]> = self.rows.iter().map(|(_, b)| b.as_slice()).collect();
        IntMatrix::from_rows(self.dim, &rows).expect("rows have length dim")
    }
}
