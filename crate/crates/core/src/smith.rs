//! Smith normal form over the integers and its reduction over `Z_m`.
//!
//! All elimination is done with arbitrary-precision integers. The form over
//! `Z_m` is read off the integer invariant factors as `d_i = gcd(s_i, m)`:
//! `s_i` and `gcd(s_i, m)` differ by a unit of `Z_m`, so the reduced diagonal
//! is equivalent to the integer one over the ring.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            data: vec![BigInt::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `ncols` is explicit so that empty matrices keep their width.
    pub fn from_rows<R: AsRef<[i64]>>(ncols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    got: row.len(),
                });
            }
            data.extend(row.iter().map(|&v| BigInt::from(v)));
        }
        Ok(Self {
            nrows: rows.len(),
            ncols,
            data,
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: other.nrows,
            });
        }
        let mut out = IntMatrix::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.ncols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self · x`, reduced into `[0, m)`.
    pub fn mul_vec_mod(&self, x: &[u64], m: u64) -> Result<Vec<u64>> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: x.len(),
            });
        }
        let modulus = BigInt::from(m);
        Ok((0..self.nrows)
            .map(|i| {
                let acc: BigInt = self
                    .row(i)
                    .iter()
                    .zip(x)
                    .filter(|(_, &xj)| xj != 0)
                    .map(|(a, &xj)| a * BigInt::from(xj))
                    .sum();
                reduce(&acc, &modulus)
            })
            .collect())
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.nrows != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.nrows,
                got: self.ncols,
            });
        }
        let n = self.nrows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.nrows {
            self.data.swap(i * self.ncols + a, i * self.ncols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.ncols {
            let v = self.get(src, j) * k;
            if !v.is_zero() {
                self.data[dst * self.ncols + j] += v;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.nrows {
            let v = self.get(i, src) * k;
            if !v.is_zero() {
                self.data[i * self.ncols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.ncols {
            let v = -self.get(r, j);
            self.set(r, j, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.nrows, self.ncols)?;
        for i in 0..self.nrows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

fn reduce(x: &BigInt, m: &BigInt) -> u64 {
    x.mod_floor(m).to_u64().expect("residue fits in u64")
}

/// Unimodular transforms with `p · B · q = diag(s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transforms {
    pub p: IntMatrix,
    pub q: IntMatrix,
}

/// Integer Smith normal form: `s_1 | s_2 | … | s_rank`, all positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSmith {
    pub nrows: usize,
    pub ncols: usize,
    pub factors: Vec<BigUint>,
    pub transforms: Option<Transforms>,
}

impl IntegerSmith {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// The `nrows × ncols` diagonal matrix carrying the invariant factors.
    pub fn diagonal(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.nrows, self.ncols);
        for (i, s) in self.factors.iter().enumerate() {
            d.set(i, i, BigInt::from(s.clone()));
        }
        d
    }
}

/// Computes the integer Smith normal form of `b`.
///
/// Pivots are the smallest nonzero absolute value of the active block (ties:
/// lowest row, then lowest column). Rows and columns are cleared by Euclidean
/// division; a divisibility violation in the remaining block is repaired by
/// adding the offending row onto the pivot row.
pub fn integer_snf(b: &IntMatrix, want_transforms: bool) -> IntegerSmith {
    let (k, n) = (b.nrows, b.ncols);
    let mut a = b.clone();
    let mut p = want_transforms.then(|| IntMatrix::identity(k));
    let mut q = want_transforms.then(|| IntMatrix::identity(n));

    let mut t = 0;
    while t < k.min(n) {
        let Some((pi, pj)) = min_nonzero(&a, t) else {
            break;
        };
        swap_rows(&mut a, p.as_mut(), t, pi);
        swap_cols(&mut a, q.as_mut(), t, pj);

        loop {
            if let Some(i) = clear_column(&mut a, p.as_mut(), t) {
                swap_rows(&mut a, p.as_mut(), t, i);
                continue;
            }
            if let Some(j) = clear_row(&mut a, q.as_mut(), t) {
                swap_cols(&mut a, q.as_mut(), t, j);
                continue;
            }
            let pivot = a.get(t, t).clone();
            let offender =
                (t + 1..k).find(|&i| (t + 1..n).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => add_row(&mut a, p.as_mut(), t, i, &BigInt::one()),
                None => break,
            }
        }

        if a.get(t, t).is_negative() {
            a.negate_row(t);
            if let Some(p) = p.as_mut() {
                p.negate_row(t);
            }
        }
        t += 1;
    }

    let factors = (0..t)
        .map(|i| a.get(i, i).to_biguint().expect("pivots are positive"))
        .collect();
    IntegerSmith {
        nrows: k,
        ncols: n,
        factors,
        transforms: p.zip(q).map(|(p, q)| Transforms { p, q }),
    }
}

fn min_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.nrows {
        for j in t..a.ncols {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let abs = v.abs();
            if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                best = Some((i, j, abs));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Reduces entries below the pivot; returns the row holding the smallest
/// nonzero remainder, if any remain.
fn clear_column(a: &mut IntMatrix, mut p: Option<&mut IntMatrix>, t: usize) -> Option<usize> {
    let pivot = a.get(t, t).clone();
    let mut best: Option<(usize, BigInt)> = None;
    for i in t + 1..a.nrows {
        if a.get(i, t).is_zero() {
            continue;
        }
        let quot = -(a.get(i, t) / &pivot);
        if !quot.is_zero() {
            add_row(a, p.as_deref_mut(), i, t, &quot);
        }
        let rem = a.get(i, t).abs();
        if !rem.is_zero() && best.as_ref().is_none_or(|(_, b)| rem < *b) {
            best = Some((i, rem));
        }
    }
    best.map(|(i, _)| i)
}

fn clear_row(a: &mut IntMatrix, mut q: Option<&mut IntMatrix>, t: usize) -> Option<usize> {
    let pivot = a.get(t, t).clone();
    let mut best: Option<(usize, BigInt)> = None;
    for j in t + 1..a.ncols {
        if a.get(t, j).is_zero() {
            continue;
        }
        let quot = -(a.get(t, j) / &pivot);
        if !quot.is_zero() {
            a.add_col_multiple(j, t, &quot);
            if let Some(q) = q.as_deref_mut() {
                q.add_col_multiple(j, t, &quot);
            }
        }
        let rem = a.get(t, j).abs();
        if !rem.is_zero() && best.as_ref().is_none_or(|(_, b)| rem < *b) {
            best = Some((j, rem));
        }
    }
    best.map(|(j, _)| j)
}

fn add_row(a: &mut IntMatrix, p: Option<&mut IntMatrix>, dst: usize, src: usize, k: &BigInt) {
    a.add_row_multiple(dst, src, k);
    if let Some(p) = p {
        p.add_row_multiple(dst, src, k);
    }
}

fn swap_rows(a: &mut IntMatrix, p: Option<&mut IntMatrix>, i: usize, j: usize) {
    a.swap_rows(i, j);
    if let Some(p) = p {
        p.swap_rows(i, j);
    }
}

fn swap_cols(a: &mut IntMatrix, q: Option<&mut IntMatrix>, i: usize, j: usize) {
    a.swap_cols(i, j);
    if let Some(q) = q {
        q.swap_cols(i, j);
    }
}

/// Smith normal form over `Z_m`, together with the integer form it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub integer: IntegerSmith,
    pub modulus: u64,
    /// `d_1 | … | d_r`, each in `[1, m-1]` and dividing `m`.
    pub mod_factors: Vec<u64>,
    /// Integer factors whose gcd with `m` is `m` (zero over `Z_m`).
    pub dropped: Vec<BigUint>,
}

impl SmithForm {
    pub fn rank_mod(&self) -> usize {
        self.mod_factors.len()
    }

    pub fn integer_factors(&self) -> &[BigUint] {
        &self.integer.factors
    }

    /// `m^(n-1-r) · ∏ d_i`, the size of the kernel with the first coordinate pinned.
    ///
    /// Returns `None` when `r > n - 1`, which cannot happen for the incidence
    /// matrix of a weakly irreducible tensor.
    pub fn pinned_kernel_size(&self) -> Option<BigUint> {
        let n = self.integer.ncols;
        let free = n.checked_sub(1)?.checked_sub(self.rank_mod())?;
        let mut count = num_traits::pow(BigUint::from(self.modulus), free);
        for &d in &self.mod_factors {
            count *= d;
        }
        Some(count)
    }
}

fn gcd_mod(s: &BigUint, m: u64) -> u64 {
    let r = (s % m).to_u64().expect("residue fits in u64");
    r.gcd(&m)
}

/// Reduces an integer Smith form over `Z_m`.
pub fn reduce_mod(integer: IntegerSmith, m: u64) -> Result<SmithForm> {
    if m < 2 {
        return Err(Error::Argument(format!(
            "modulus must be at least 2, got {m}"
        )));
    }
    let mut mod_factors = Vec::new();
    let mut dropped = Vec::new();
    for s in &integer.factors {
        let d = gcd_mod(s, m);
        if d < m {
            mod_factors.push(d);
        } else {
            dropped.push(s.clone());
        }
    }
    Ok(SmithForm {
        integer,
        modulus: m,
        mod_factors,
        dropped,
    })
}

/// Smith normal form of `b` over `Z_m`.
pub fn snf_mod(b: &IntMatrix, m: u64) -> Result<SmithForm> {
    reduce_mod(integer_snf(b, false), m)
}

/// The solution set of `B x ≡ 0 (mod m)` as a direct sum of cyclic pieces.
///
/// Every kernel element is `Σ c_j g_j (mod m)` for exactly one choice of
/// coordinates `0 ≤ c_j < o_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelDescription {
    pub modulus: u64,
    pub dim: usize,
    pub generators: Vec<Vec<u64>>,
    pub orders: Vec<u64>,
    pub total_count: BigUint,
}

impl KernelDescription {
    /// Element with the given coordinates (each `c_j < o_j`).
    pub fn element(&self, coords: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        let mut x = vec![0u64; self.dim];
        for (g, &c) in self.generators.iter().zip(coords) {
            if c == 0 {
                continue;
            }
            for (xi, &gi) in x.iter_mut().zip(g) {
                *xi = ((*xi as u128 + c as u128 * gi as u128) % m as u128) as u64;
            }
        }
        x
    }

    /// Enumerates all `total_count` elements in coordinate order.
    pub fn iter(&self) -> KernelIter<'_> {
        KernelIter {
            kernel: self,
            coords: vec![0; self.orders.len()],
            done: false,
        }
    }
}

pub struct KernelIter<'a> {
    kernel: &'a KernelDescription,
    coords: Vec<u64>,
    done: bool,
}

impl Iterator for KernelIter<'_> {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.kernel.element(&self.coords);
        // mixed-radix increment
        self.done = true;
        for (c, &o) in self.coords.iter_mut().zip(&self.kernel.orders) {
            *c += 1;
            if *c < o {
                self.done = false;
                break;
            }
            *c = 0;
        }
        Some(out)
    }
}

fn snf_with_transforms(b: &IntMatrix) -> (IntegerSmith, Transforms) {
    let mut snf = integer_snf(b, true);
    let t = snf.transforms.take().expect("transforms requested");
    (snf, t)
}

fn column_mod(q: &IntMatrix, j: usize, scale: u64, m: u64) -> Vec<u64> {
    let modulus = BigInt::from(m);
    let scale = BigInt::from(scale);
    (0..q.nrows())
        .map(|i| reduce(&(q.get(i, j) * &scale), &modulus))
        .collect()
}

/// Kernel of `B` over `Z_m`.
pub fn kernel_mod(b: &IntMatrix, m: u64) -> Result<KernelDescription> {
    if m < 2 {
        return Err(Error::Argument(format!(
            "modulus must be at least 2, got {m}"
        )));
    }
    let (snf, tr) = snf_with_transforms(b);
    Ok(kernel_from(&snf, &tr.q, m))
}

fn kernel_from(snf: &IntegerSmith, q: &IntMatrix, m: u64) -> KernelDescription {
    let n = snf.ncols;
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    for (i, s) in snf.factors.iter().enumerate() {
        let d = gcd_mod(s, m);
        if d > 1 {
            generators.push(column_mod(q, i, m / d, m));
            orders.push(d);
        }
    }
    for j in snf.rank()..n {
        generators.push(column_mod(q, j, 1, m));
        orders.push(m);
    }
    let total_count = orders.iter().fold(BigUint::one(), |acc, &o| acc * o);
    KernelDescription {
        modulus: m,
        dim: n,
        generators,
        orders,
        total_count,
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.mod_floor(&(m as i128)) as u64)
}

/// Solves `B x ≡ rhs (mod m)`.
///
/// Returns one particular solution and the kernel, or `None` when the system
/// is inconsistent.
pub fn solve_mod(
    b: &IntMatrix,
    rhs: &[i64],
    m: u64,
) -> Result<Option<(Vec<u64>, KernelDescription)>> {
    if m < 2 {
        return Err(Error::Argument(format!(
            "modulus must be at least 2, got {m}"
        )));
    }
    if rhs.len() != b.nrows() {
        return Err(Error::DimensionMismatch {
            expected: b.nrows(),
            got: rhs.len(),
        });
    }
    let (snf, tr) = snf_with_transforms(b);
    let modulus = BigInt::from(m);

    // P·rhs, reduced mod m
    let c: Vec<u64> = (0..tr.p.nrows())
        .map(|i| {
            let acc: BigInt =
                tr.p.row(i)
                    .iter()
                    .zip(rhs)
                    .map(|(a, &r)| a * BigInt::from(r))
                    .sum();
            reduce(&acc, &modulus)
        })
        .collect();

    let mut z = vec![0u64; b.ncols()];
    for (i, s) in snf.factors.iter().enumerate() {
        let sm = (s % m).to_u64().expect("residue fits in u64");
        let g = sm.gcd(&m);
        if !c[i].is_multiple_of(g) {
            return Ok(None);
        }
        let mg = m / g;
        let inv = mod_inverse(sm / g, mg).expect("s/g is a unit mod m/g");
        z[i] = ((c[i] / g) as u128 * inv as u128 % mg as u128) as u64;
    }
    if c[snf.rank()..].iter().any(|&ci| ci != 0) {
        return Ok(None);
    }

    let x = tr.q.mul_vec_mod(&z, m)?;
    Ok(Some((x, kernel_from(&snf, &tr.q, m))))
}

/// True for ±1.
pub fn is_unit(x: &BigInt) -> bool {
    x.sign() != Sign::NoSign && x.abs().is_one()
}
