//! Exact linear algebra over a prime field `F_p`.
//!
//! Everything homological in this crate is reduced, one bidegree at a time, to
//! the routines here: row reduction, kernels, membership in a span and solving
//! linear systems. Entries are always kept as canonical representatives in
//! `[0, p)`.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// The prime field `F_p`, `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u32,
}

impl TryFrom<u64> for PrimeField {
    type Error = LinAlgError;
    fn try_from(p: u64) -> Result<Self, Self::Error> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p as u64
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub const DEFAULT_CHARACTERISTIC: u64 = 101;

    pub fn new(p: u64) -> Result<Self, LinAlgError> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(LinAlgError::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    pub fn from_i64(self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    /// Representative in `(-p/2, p/2]`, used when printing coefficients.
    pub fn to_signed(self, a: u32) -> i64 {
        if a as u64 * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    /// `v -= c * row`, entrywise.
    #[inline]
    pub fn axpy_neg(self, v: &mut [u32], c: u32, row: &[u32]) {
        if c == 0 {
            return;
        }
        let p = self.p as u64;
        let nc = (p - c as u64) % p;
        for (a, &b) in v.iter_mut().zip(row) {
            if b != 0 {
                *a = ((*a as u64 + nc * b as u64) % p) as u32;
            }
        }
    }

    /// `v += c * row`, entrywise.
    #[inline]
    pub fn axpy(self, v: &mut [u32], c: u32, row: &[u32]) {
        self.axpy_neg(v, self.neg(c), row)
    }

    pub fn scale(self, v: &mut [u32], c: u32) {
        for a in v.iter_mut() {
            *a = self.mul(*a, c);
        }
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// Dense row-major matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod `p`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self, LinAlgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinAlgError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = field.from_i64(x);
            }
        }
        Ok(m)
    }

    /// Builds a matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            debug_assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        debug_assert!(x < self.field.modulus());
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let p = self.field.modulus() as u64;
        Ok((0..self.rows)
            .map(|i| {
                let acc = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
                acc as u32
            })
            .collect())
    }

    pub fn mul(&self, other: &FMatrix) -> Result<FMatrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let f = self.field;
        let mut out = FMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a != 0 {
                    let (lo, hi) = (i * out.cols, (i + 1) * out.cols);
                    f.axpy(&mut out.data[lo..hi], a, other.row(k));
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Reduced row echelon form by Gauss-Jordan elimination, pivoting on the
    /// first nonzero entry of each column (deterministic).
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            let cols = m.cols;
            f.scale(&mut m.data[r * cols..(r + 1) * cols], inv);
            let pivot_row = m.row(r).to_vec();
            for i in 0..m.rows {
                if i != r {
                    let factor = m.get(i, c);
                    f.axpy_neg(&mut m.data[i * cols..(i + 1) * cols], factor, &pivot_row);
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        Rref {
            rank: pivot_cols.len(),
            reduced: m,
            pivot_cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right kernel, returned as the columns of a `cols × (cols - rank)` matrix.
    /// One basis vector per free column, with a 1 in that column.
    pub fn kernel_basis(&self) -> FMatrix {
        let f = self.field;
        let rr = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &rr.pivot_cols {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut k = FMatrix::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, 1);
            for (r, &pc) in rr.pivot_cols.iter().enumerate() {
                k.set(pc, j, f.neg(rr.reduced.get(r, fc)));
            }
        }
        k
    }

    /// Solves `self · x = b`; `Ok(None)` when the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>, LinAlgError> {
        if b.len() != self.rows {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let f = self.field;
        let mut aug = FMatrix::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            aug.data[i * (self.cols + 1)..i * (self.cols + 1) + self.cols]
                .copy_from_slice(self.row(i));
            aug.data[i * (self.cols + 1) + self.cols] = b[i] % f.modulus();
        }
        let rr = aug.rref();
        if rr.pivot_cols.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in rr.pivot_cols.iter().enumerate() {
            x[c] = rr.reduced.get(r, self.cols);
        }
        Ok(Some(x))
    }
}

/// Output of [`FMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub reduced: FMatrix,
    pub pivot_cols: Vec<usize>,
}

/// An incrementally built subspace of `F_p^n` kept in echelon form.
///
/// Every stored row is monic at its pivot and zero before it; reducing a
/// vector against the rows in ascending pivot order clears all pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: PrimeField,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(field: PrimeField, ambient: usize) -> Self {
        Echelon {
            field,
            ambient,
            rows: Vec::new(),
            pivot_row: vec![None; ambient],
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Reduces `v` in place; afterwards `v` is zero at every pivot column.
    pub fn reduce(&self, v: &mut [u32]) {
        debug_assert_eq!(v.len(), self.ambient);
        for c in 0..self.ambient {
            if v[c] != 0 {
                if let Some(r) = self.pivot_row[c] {
                    let coeff = v[c];
                    self.field.axpy_neg(&mut v[c..], coeff, &self.rows[r][c..]);
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Inserts `v`; returns `false` when it already lies in the span.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        if self.is_full() {
            return false;
        }
        self.reduce(&mut v);
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(v[c]);
        self.field.scale(&mut v[c..], inv);
        self.pivot_row[c] = Some(self.rows.len());
        self.rows.push(v);
        true
    }

    /// Pivot columns in ascending order.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ambient).filter(|&c| self.pivot_row[c].is_some()).collect()
    }

    /// Fully reduced basis: row `i` has pivot `pivots()[i]` and is zero at every other pivot.
    pub fn reduced_basis(&self) -> Vec<Vec<u32>> {
        let pivots = self.pivots();
        let mut out: Vec<Vec<u32>> = Vec::with_capacity(pivots.len());
        for &c in pivots.iter().rev() {
            let mut row = self.rows[self.pivot_row[c].unwrap()].clone();
            for done in &out {
                let pc = done.iter().position(|&x| x != 0).unwrap();
                let coeff = row[pc];
                self.field.axpy_neg(&mut row, coeff, done);
            }
            out.push(row);
        }
        out.reverse();
        out
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Coordinates of `v` with respect to [`Self::reduced_basis`], if `v` lies in the span.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        let basis = self.reduced_basis();
        let pivots = self.pivots();
        let coords: Vec<u32> = pivots.iter().map(|&c| v[c]).collect();
        let mut w = v.to_vec();
        for (row, &a) in basis.iter().zip(&coords) {
            self.field.axpy_neg(&mut w, a, row);
        }
        w.iter().all(|&x| x == 0).then_some(coords)
    }
}

/// Kernel and image of the linear map sending the `i`-th source basis vector to `images[i]`.
///
/// Returns the kernel as coordinate vectors in the source (length `images.len()`) and the
/// image as an [`Echelon`] in the target.
pub fn kernel_and_image(
    field: PrimeField,
    images: &[Vec<u32>],
    target_dim: usize,
) -> (Vec<Vec<u32>>, Echelon) {
    let n = images.len();
    let mut image = Echelon::new(field, target_dim);
    // combo[r] expresses image row r in terms of the source basis
    let mut combos: Vec<Vec<u32>> = Vec::new();
    let mut kernel = Vec::new();
    for (j, img) in images.iter().enumerate() {
        debug_assert_eq!(img.len(), target_dim);
        let mut v = img.clone();
        let mut combo = vec![0u32; n];
        combo[j] = 1;
        for c in 0..target_dim {
            if v[c] != 0 {
                if let Some(r) = image.pivot_row[c] {
                    let coeff = v[c];
                    field.axpy_neg(&mut v[c..], coeff, &image.rows[r][c..]);
                    field.axpy_neg(&mut combo, coeff, &combos[r]);
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => kernel.push(combo),
            Some(c) => {
                let inv = field.inv(v[c]);
                field.scale(&mut v[c..], inv);
                field.scale(&mut combo, inv);
                image.pivot_row[c] = Some(image.rows.len());
                image.rows.push(v);
                combos.push(combo);
            }
        }
    }
    (kernel, image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f101() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn rejects_composites_and_large() {
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(91).is_err());
        assert!(PrimeField::new(1 << 31).is_err());
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(2147483647).is_ok());
    }

    #[test]
    fn rref_examples() {
        let f = f101();
        let empty = FMatrix::zeros(f, 0, 0);
        assert_eq!(empty.rref().rank, 0);

        let id = FMatrix::identity(f, 3);
        let rr = id.rref();
        assert_eq!(rr.rank, 3);
        assert_eq!(rr.pivot_cols, vec![0, 1, 2]);

        let m = FMatrix::from_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        let rr = m.rref();
        assert_eq!(rr.rank, 1);
        assert_eq!(rr.reduced.row(0), &[1, 2]);
        assert_eq!(rr.reduced.row(1), &[0, 0]);
    }

    #[test]
    fn kernel_examples() {
        let f = f101();
        assert_eq!(FMatrix::identity(f, 4).kernel_basis().cols(), 0);
        let z = FMatrix::zeros(f, 2, 3);
        let k = z.kernel_basis();
        assert_eq!(k.cols(), 3);
        assert_eq!(k.rank(), 3);

        let f5 = PrimeField::new(5).unwrap();
        let m = FMatrix::from_rows(f5, &[vec![1, 1]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![4, 1]);
        // enumerate F_5^2: the kernel has exactly 5 elements
        let count = (0..5u32)
            .flat_map(|a| (0..5u32).map(move |b| (a, b)))
            .filter(|&(a, b)| (a + b) % 5 == 0)
            .count();
        assert_eq!(count, 5);
    }

    #[test]
    fn solve_examples() {
        let f = f101();
        let id = FMatrix::identity(f, 3);
        assert_eq!(id.solve(&[4, 5, 6]).unwrap(), Some(vec![4, 5, 6]));
        let z = FMatrix::from_rows(f, &[vec![0]]).unwrap();
        assert_eq!(z.solve(&[1]).unwrap(), None);
        let f5 = PrimeField::new(5).unwrap();
        let two = FMatrix::from_rows(f5, &[vec![2]]).unwrap();
        assert_eq!(two.solve(&[1]).unwrap(), Some(vec![3]));
        assert!(matches!(
            two.solve(&[1, 2]),
            Err(LinAlgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn echelon_reduced_basis_and_coordinates() {
        let f = f101();
        let mut e = Echelon::new(f, 3);
        assert!(e.insert(vec![0, 1, 1]));
        assert!(e.insert(vec![1, 1, 0]));
        assert!(!e.insert(vec![1, 2, 1]));
        assert_eq!(e.pivots(), vec![0, 1]);
        let rb = e.reduced_basis();
        assert_eq!(rb[0], vec![1, 0, 100]);
        assert_eq!(rb[1], vec![0, 1, 1]);
        assert_eq!(e.coordinates(&[2, 3, 1]), Some(vec![2, 3]));
        assert_eq!(e.coordinates(&[0, 0, 1]), None);
    }

    fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<u32>)> {
        (0usize..6, 0usize..6).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), proptest::collection::vec(0u32..7, r * c))
        })
    }

    fn build(r: usize, c: usize, data: Vec<u32>) -> FMatrix {
        FMatrix {
            field: PrimeField::new(7).unwrap(),
            rows: r,
            cols: c,
            data,
        }
    }

    proptest! {
        #[test]
        fn rank_nullity((r, c, data) in small_matrix()) {
            let m = build(r, c, data);
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.cols(), c);
            let prod = m.mul(&k).unwrap();
            prop_assert!(prod.is_zero());
        }

        #[test]
        fn rref_idempotent((r, c, data) in small_matrix()) {
            let m = build(r, c, data);
            let once = m.rref().reduced;
            prop_assert_eq!(once.rref().reduced, once);
        }

        #[test]
        fn solve_consistent_rhs((r, c, data) in small_matrix(), seed in proptest::collection::vec(0u32..7, 6)) {
            let m = build(r, c, data);
            let x: Vec<u32> = seed.into_iter().take(c).chain(std::iter::repeat(0)).take(c).collect();
            let b = m.mul_vec(&x).unwrap();
            let sol = m.solve(&b).unwrap().expect("consistent system");
            prop_assert_eq!(m.mul_vec(&sol).unwrap(), b);
        }

        #[test]
        fn kernel_and_image_agree_with_rref((r, c, data) in small_matrix()) {
            let m = build(r, c, data);
            let f = m.field();
            let (ker, img) = kernel_and_image(f, &m.columns(), r);
            prop_assert_eq!(img.rank(), m.rank());
            prop_assert_eq!(ker.len(), c - m.rank());
            for v in &ker {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|&x| x == 0));
            }
        }
    }
}
