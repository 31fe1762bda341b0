//! Exact dense linear algebra over F_p.

mod block;
mod packed;

pub use block::BlockMatrix;
pub use packed::Echelon;

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

/// Dense matrix over F_p, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} over F_{}", self.rows, self.cols, self.field.p())?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FpMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from integer rows, reducing entries mod p.
    pub fn from_rows<R: AsRef<[i64]>>(field: Field, rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            for (j, &x) in r.as_ref().iter().enumerate() {
                m.set(i, j, field.reduce(x));
            }
        }
        m
    }

    pub fn from_columns(field: Field, nrows: usize, columns: &[Vec<u8>]) -> Self {
        let mut m = Self::zeros(field, nrows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), nrows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn from_row_vectors(field: Field, ncols: usize, rows: &[Vec<u8>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), ncols);
            m.data[i * ncols..(i + 1) * ncols].copy_from_slice(r);
        }
        m
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: u8) {
        let k = i * self.cols + j;
        self.data[k] = self.field.add(self.data[k], v);
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u8>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &FpMatrix) -> FpMatrix {
        let f = self.field;
        let p = f.p();
        let mut out = Self::zeros(f, self.rows, other.cols);
        let mut acc = vec![0u32; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(i, k) as u32;
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot += a * b as u32;
                }
                if k % 1024 == 1023 {
                    acc.iter_mut().for_each(|x| *x %= p);
                }
            }
            for (j, &v) in acc.iter().enumerate() {
                out.data[i * other.cols + j] = (v % p) as u8;
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[u8]) -> Vec<u8> {
        assert_eq!(x.len(), self.cols);
        let p = self.field.p() as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = self
                    .row(i)
                    .iter()
                    .zip(x)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (s % p) as u8
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, x: &[u8]) -> Vec<u8> {
        assert_eq!(x.len(), self.rows);
        let p = self.field.p() as u64;
        let mut acc = vec![0u64; self.cols];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (slot, &b) in acc.iter_mut().zip(self.row(i)) {
                *slot += a as u64 * b as u64;
            }
        }
        acc.into_iter().map(|s| (s % p) as u8).collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        FpMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, c: u8) -> FpMatrix {
        let f = self.field;
        FpMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Copies `block` into position (r0, c0).
    pub fn put(&mut self, r0: usize, c0: usize, block: &FpMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> FpMatrix {
        let mut out = Self::zeros(self.field, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    fn row_echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.field, self.cols);
        for i in 0..self.rows {
            e.insert(self.row(i));
        }
        e
    }

    pub fn rank(&self) -> usize {
        if self.rows <= self.cols {
            self.row_echelon().rank()
        } else {
            self.transpose().row_echelon().rank()
        }
    }

    /// Columns spanning the null space, in order of increasing free column.
    pub fn kernel_basis(&self) -> FpMatrix {
        let e = self.row_echelon();
        let (rows, pivots) = e.rref_rows();
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&j| !is_pivot[j]).collect();
        let mut k = Self::zeros(f, self.cols, free.len());
        for (c, &fj) in free.iter().enumerate() {
            k.set(fj, c, 1);
            for (r, &pj) in rows.iter().zip(&pivots) {
                let v = r[fj];
                if v != 0 {
                    k.set(pj, c, f.neg(v));
                }
            }
        }
        k
    }

    /// Some x with self * x = b, or `None` when inconsistent.
    pub fn solve(&self, b: &[u8]) -> Result<Option<Vec<u8>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {} but matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut e = Echelon::tracked(self.field, self.rows, self.cols);
        for j in 0..self.cols {
            e.insert(&self.column(j));
        }
        Ok(e.express(b))
    }

    /// Indices of a maximal independent set of columns, chosen greedily left to right.
    pub fn independent_columns(&self) -> Vec<usize> {
        let mut e = Echelon::new(self.field, self.rows);
        (0..self.cols)
            .filter(|&j| e.insert(&self.column(j)).is_some())
            .collect()
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut e = Echelon::new(self.field, 2 * n);
        let mut aug = vec![0u8; 2 * n];
        for i in 0..n {
            aug[..n].copy_from_slice(self.row(i));
            aug[n..].iter_mut().for_each(|x| *x = 0);
            aug[n + i] = 1;
            e.insert(&aug);
        }
        let (rows, pivots) = e.rref_rows();
        if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut inv = FpMatrix::zeros(self.field, n, n);
        for (r, &p) in rows.iter().zip(&pivots) {
            for j in 0..n {
                inv.set(p, j, r[n + j]);
            }
        }
        Some(inv)
    }

    /// For a matrix of full column rank, some `L` with `L * self = I`.
    pub fn left_inverse(&self) -> Option<FpMatrix> {
        let k = self.cols;
        let completion = quotient_basis(self, self.rows);
        if completion.cols() + k != self.rows {
            return None;
        }
        let inv = self.hstack(&completion).inverse()?;
        let rows: Vec<usize> = (0..k).collect();
        let cols: Vec<usize> = (0..self.rows).collect();
        Some(inv.submatrix(&rows, &cols))
    }

    /// Basis of the column space, as columns.
    pub fn image_basis(&self) -> FpMatrix {
        let cols = self.independent_columns();
        let all: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all, &cols)
    }
}

/// Standard vectors completing the column space of `sub` to F_p^n,
/// chosen in increasing index order.
pub fn quotient_basis(sub: &FpMatrix, ambient_dim: usize) -> FpMatrix {
    assert_eq!(sub.rows(), ambient_dim);
    let f = sub.field();
    let mut e = Echelon::new(f, ambient_dim);
    for j in 0..sub.cols() {
        e.insert(&sub.column(j));
    }
    let mut reps = Vec::new();
    for i in 0..ambient_dim {
        let mut v = vec![0; ambient_dim];
        v[i] = 1;
        if e.insert(&v).is_some() {
            reps.push(v);
        }
    }
    FpMatrix::from_columns(f, ambient_dim, &reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> Field {
        Field::new(2).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(FpMatrix::identity(f2(), 2).rank(), 2);
        assert_eq!(FpMatrix::zeros(f2(), 3, 4).rank(), 0);
        assert_eq!(FpMatrix::from_rows(f2(), &[[1, 1], [1, 1]]).rank(), 1);
        let f3 = Field::new(3).unwrap();
        assert_eq!(FpMatrix::from_rows(f3, &[[1, 1], [1, 1]]).rank(), 1);
        assert_eq!(FpMatrix::from_rows(f3, &[[1, 2], [2, 1]]).rank(), 1);
        assert_eq!(FpMatrix::from_rows(Field::new(5).unwrap(), &[[1, 2], [2, 1]]).rank(), 2);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(FpMatrix::identity(f2(), 3).kernel_basis().cols(), 0);
        assert_eq!(FpMatrix::zeros(f2(), 3, 3).kernel_basis().cols(), 3);
        let k = FpMatrix::from_rows(f2(), &[[1, 1]]).kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![1, 1]);
    }

    #[test]
    fn solve_examples() {
        let id = FpMatrix::identity(f2(), 3);
        assert_eq!(id.solve(&[1, 0, 1]).unwrap(), Some(vec![1, 0, 1]));
        let z = FpMatrix::zeros(f2(), 2, 2);
        assert_eq!(z.solve(&[1, 0]).unwrap(), None);
        let m = FpMatrix::from_rows(f2(), &[[1, 1], [0, 1]]);
        assert_eq!(m.solve(&[0, 1]).unwrap(), Some(vec![1, 1]));
        assert!(m.solve(&[0]).is_err());
    }

    #[test]
    fn inverses() {
        let f3 = Field::new(3).unwrap();
        let m = FpMatrix::from_rows(f3, &[[1, 2, 0], [0, 1, 1], [1, 0, 2]]);
        match m.inverse() {
            Some(inv) => assert_eq!(m.mul(&inv).unwrap(), FpMatrix::identity(f3, 3)),
            None => assert!(m.rank() < 3),
        }
        assert!(FpMatrix::from_rows(f2(), &[[1, 1], [1, 1]]).inverse().is_none());
        let b = FpMatrix::from_rows(f3, &[[1, 0], [2, 1], [0, 2]]);
        let l = b.left_inverse().unwrap();
        assert_eq!(l.mul(&b).unwrap(), FpMatrix::identity(f3, 2));
    }

    #[test]
    fn quotient_examples() {
        let all = FpMatrix::identity(f2(), 2);
        assert_eq!(quotient_basis(&all, 2).cols(), 0);
        assert_eq!(quotient_basis(&FpMatrix::zeros(f2(), 3, 1), 3).cols(), 3);
        let s = FpMatrix::from_rows(f2(), &[[1], [1]]);
        let q = quotient_basis(&s, 2);
        assert_eq!(q.cols(), 1);
        assert_eq!(s.hstack(&q).rank(), 2);
    }

    fn arb_matrix() -> impl Strategy<Value = (u32, Vec<Vec<i64>>)> {
        (prop::sample::select(vec![2u32, 3, 5, 7]), 1usize..9, 1usize..9).prop_flat_map(
            |(p, r, c)| {
                (
                    Just(p),
                    prop::collection::vec(prop::collection::vec(0i64..7, c), r),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn rank_nullity((p, rows) in arb_matrix()) {
            let m = FpMatrix::from_rows(Field::new(p).unwrap(), &rows);
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.cols(), m.cols());
            prop_assert!(m.mul(&k).unwrap().is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn solve_recovers_image((p, rows) in arb_matrix(), seed in 0u64..1000) {
            let f = Field::new(p).unwrap();
            let m = FpMatrix::from_rows(f, &rows);
            let x: Vec<u8> = (0..m.cols()).map(|j| f.reduce((seed as i64 * 31 + j as i64 * 17) % 11)).collect();
            let b = m.mul_vec(&x);
            let y = m.solve(&b).unwrap().expect("consistent");
            prop_assert_eq!(m.mul_vec(&y), b);
        }

        #[test]
        fn rank_transpose_invariant((p, rows) in arb_matrix()) {
            let m = FpMatrix::from_rows(Field::new(p).unwrap(), &rows);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
