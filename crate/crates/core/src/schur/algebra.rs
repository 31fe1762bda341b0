use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use parking_lot::RwLock;

use super::monomial::DividedPowerSpace;
use super::weight::Weight;
use crate::error::{Error, Result};
use crate::field::Field;

/// Sparse algebra element: sorted `(basis index, nonzero coefficient)` pairs.
pub type SparseElem = Vec<(u32, u8)>;

/// The Schur algebra `S(n, d) = Gamma^d(End k^n)` over `F_p`.
///
/// Basis element `xi_m` is indexed by an `n x n` multiplicity matrix `m` with
/// entry sum `d`, flattened row-major (matrix unit `E_ij` is symbol `i*n + j`).
/// `xi_m` maps weight `colsum(m)` to weight `rowsum(m)`.
pub struct SchurAlgebra {
    field: Field,
    n: usize,
    d: usize,
    space: DividedPowerSpace,
    rowsums: Vec<Weight>,
    colsums: Vec<Weight>,
    by_rowsum: HashMap<Weight, Vec<u32>>,
    by_colsum: HashMap<Weight, Vec<u32>>,
    products: RwLock<HashMap<(u32, u32), Arc<SparseElem>>>,
    generators: OnceLock<Vec<u32>>,
}

impl std::fmt::Debug for SchurAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "S({}, {}) over F_{}", self.n, self.d, self.field.p())
    }
}

impl SchurAlgebra {
    pub fn new(field: Field, n: usize, d: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("Schur algebra needs n >= 1".into()));
        }
        if d > u8::MAX as usize {
            return Err(Error::InvalidInput(format!("degree {d} too large")));
        }
        let space = DividedPowerSpace::new(n * n, d);
        let mut rowsums = Vec::with_capacity(space.dim());
        let mut colsums = Vec::with_capacity(space.dim());
        let mut by_rowsum: HashMap<Weight, Vec<u32>> = HashMap::new();
        let mut by_colsum: HashMap<Weight, Vec<u32>> = HashMap::new();
        for (k, m) in space.basis().iter().enumerate() {
            let mult = m.multiplicities();
            let mut r = vec![0u32; n];
            let mut c = vec![0u32; n];
            for i in 0..n {
                for j in 0..n {
                    r[i] += mult[i * n + j] as u32;
                    c[j] += mult[i * n + j] as u32;
                }
            }
            let (r, c) = (Weight(r), Weight(c));
            by_rowsum.entry(r.clone()).or_default().push(k as u32);
            by_colsum.entry(c.clone()).or_default().push(k as u32);
            rowsums.push(r);
            colsums.push(c);
        }
        Ok(SchurAlgebra {
            field,
            n,
            d,
            space,
            rowsums,
            colsums,
            by_rowsum,
            by_colsum,
            products: RwLock::new(HashMap::new()),
            generators: OnceLock::new(),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Multiplicity matrix of basis element `k`, row-major.
    pub fn matrix(&self, k: u32) -> &[u8] {
        self.space.basis()[k as usize].multiplicities()
    }

    pub fn index_of(&self, m: &[u8]) -> Option<u32> {
        self.space.index_of(m).map(|k| k as u32)
    }

    pub fn rowsum(&self, k: u32) -> &Weight {
        &self.rowsums[k as usize]
    }

    pub fn colsum(&self, k: u32) -> &Weight {
        &self.colsums[k as usize]
    }

    /// Basis elements with the given row sum (target weight).
    pub fn with_rowsum(&self, w: &Weight) -> &[u32] {
        self.by_rowsum.get(w).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Basis elements with the given column sum (source weight).
    pub fn with_colsum(&self, w: &Weight) -> &[u32] {
        self.by_colsum.get(w).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Basis elements of `xi_mu S xi_nu`.
    pub fn between(&self, mu: &Weight, nu: &Weight) -> Vec<u32> {
        self.with_rowsum(mu)
            .iter()
            .copied()
            .filter(|&k| &self.colsums[k as usize] == nu)
            .collect()
    }

    /// All weights of `k^n` of total degree `d`, in canonical (lex ascending) order.
    pub fn weights(&self) -> Vec<Weight> {
        let mut w: Vec<Weight> = self.by_rowsum.keys().cloned().collect();
        w.sort();
        w
    }

    /// Index of the weight idempotent `xi_lambda`.
    pub fn idempotent(&self, lambda: &Weight) -> Option<u32> {
        let mut m = vec![0u8; self.n * self.n];
        for i in 0..self.n {
            m[i * self.n + i] = u8::try_from(*lambda.0.get(i)?).ok()?;
        }
        if lambda.len() != self.n || lambda.total() as usize != self.d {
            return None;
        }
        self.index_of(&m)
    }

    pub fn is_diagonal(&self, k: u32) -> bool {
        let m = self.matrix(k);
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || m[i * self.n + j] == 0))
    }

    /// The unit `sum_lambda xi_lambda`.
    pub fn unit(&self) -> SparseElem {
        (0..self.dim() as u32)
            .filter(|&k| self.is_diagonal(k))
            .map(|k| (k, 1))
            .collect()
    }

    /// Index of `xi_{m^T}`.
    pub fn transpose_index(&self, k: u32) -> u32 {
        let m = self.matrix(k);
        let mut t = vec![0u8; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                t[j * self.n + i] = m[i * self.n + j];
            }
        }
        self.index_of(&t).expect("transpose is a basis element")
    }

    /// Algebra generators: weight idempotents together with `xi_m` where the
    /// off-diagonal part of `m` is `a E_{i,i+1}` or `a E_{i+1,i}`.
    pub fn generators(&self) -> &[u32] {
        self.generators.get_or_init(|| {
            let n = self.n;
            (0..self.dim() as u32)
                .filter(|&k| {
                    let m = self.matrix(k);
                    let off: Vec<(usize, usize)> = (0..n)
                        .flat_map(|i| (0..n).map(move |j| (i, j)))
                        .filter(|&(i, j)| i != j && m[i * n + j] > 0)
                        .collect();
                    match off.as_slice() {
                        [] => true,
                        [(i, j)] => i.abs_diff(*j) == 1,
                        _ => false,
                    }
                })
                .collect()
        })
    }

    /// `xi_a xi_b`, memoized.
    pub fn basis_product(&self, a: u32, b: u32) -> Arc<SparseElem> {
        if let Some(v) = self.products.read().get(&(a, b)) {
            return v.clone();
        }
        let v = Arc::new(self.compute_product(a, b));
        self.products.write().entry((a, b)).or_insert(v).clone()
    }

    /// Number of memoized basis products.
    pub fn cached_products(&self) -> usize {
        self.products.read().len()
    }

    pub(crate) fn insert_product(&self, a: u32, b: u32, v: SparseElem) {
        self.products.write().insert((a, b), Arc::new(v));
    }

    fn compute_product(&self, a: u32, b: u32) -> SparseElem {
        if self.colsums[a as usize] != self.rowsums[b as usize] {
            return Vec::new();
        }
        let n = self.n;
        let ma = self.matrix(a);
        let mb = self.matrix(b);
        // per middle index y: tables T[x][z] with row sums A[x][y], column sums B[y][z]
        let slices: Vec<Vec<Vec<u8>>> = (0..n)
            .map(|y| {
                let rows: Vec<u8> = (0..n).map(|x| ma[x * n + y]).collect();
                let cols: Vec<u8> = (0..n).map(|z| mb[y * n + z]).collect();
                contingency_tables(&rows, &cols)
            })
            .collect();
        let mut acc: HashMap<Vec<u8>, u8> = HashMap::new();
        let mut choice = vec![0usize; n];
        loop {
            let mut c = vec![0u8; n * n];
            for (y, &t) in choice.iter().enumerate() {
                for (cell, &v) in slices[y][t].iter().enumerate() {
                    c[cell] += v;
                }
            }
            let mut coeff = 1u8;
            for cell in 0..n * n {
                if c[cell] == 0 {
                    continue;
                }
                let parts = choice.iter().enumerate().map(|(y, &t)| slices[y][t][cell] as u64);
                coeff = self.field.mul(coeff, self.field.multinomial(parts));
                if coeff == 0 {
                    break;
                }
            }
            if coeff != 0 {
                let e = acc.entry(c).or_insert(0);
                *e = self.field.add(*e, coeff);
            }
            // advance mixed-radix counter
            let mut y = 0;
            loop {
                if y == n {
                    let mut out: SparseElem = acc
                        .into_iter()
                        .filter(|&(_, v)| v != 0)
                        .map(|(m, v)| (self.index_of(&m).expect("product basis"), v))
                        .collect();
                    out.sort_unstable();
                    return out;
                }
                choice[y] += 1;
                if choice[y] < slices[y].len() {
                    break;
                }
                choice[y] = 0;
                y += 1;
            }
        }
    }

    /// Product of dense coordinate vectors.
    pub fn multiply(&self, x: &[u8], y: &[u8]) -> Result<Vec<u8>> {
        if x.len() != self.dim() || y.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "expected length {}, got {} and {}",
                self.dim(),
                x.len(),
                y.len()
            )));
        }
        let sx = to_sparse(x);
        let sy = to_sparse(y);
        let out = self.multiply_sparse(&sx, &sy);
        let mut dense = vec![0u8; self.dim()];
        for (k, v) in out {
            dense[k as usize] = v;
        }
        Ok(dense)
    }

    pub fn multiply_sparse(&self, x: &[(u32, u8)], y: &[(u32, u8)]) -> SparseElem {
        let f = self.field;
        let mut acc: HashMap<u32, u8> = HashMap::new();
        for &(a, ca) in x {
            for &(b, cb) in y {
                if self.colsums[a as usize] != self.rowsums[b as usize] {
                    continue;
                }
                let s = f.mul(ca, cb);
                for &(k, v) in self.basis_product(a, b).iter() {
                    let e = acc.entry(k).or_insert(0);
                    *e = f.add(*e, f.mul(s, v));
                }
            }
        }
        let mut out: SparseElem = acc.into_iter().filter(|&(_, v)| v != 0).collect();
        out.sort_unstable();
        out
    }
}

pub fn to_sparse(x: &[u8]) -> SparseElem {
    x.iter()
        .enumerate()
        .filter(|&(_, &v)| v != 0)
        .map(|(k, &v)| (k as u32, v))
        .collect()
}

/// All nonnegative `r.len() x c.len()` integer matrices (row-major) with the
/// given row and column sums.
pub fn contingency_tables(rows: &[u8], cols: &[u8]) -> Vec<Vec<u8>> {
    let total_r: u32 = rows.iter().map(|&x| x as u32).sum();
    let total_c: u32 = cols.iter().map(|&x| x as u32).sum();
    if total_r != total_c {
        return Vec::new();
    }
    let (nr, nc) = (rows.len(), cols.len());
    let mut out = Vec::new();
    let mut table = vec![0u8; nr * nc];
    let mut col_left = cols.to_vec();
    fill(rows, nc, 0, 0, rows.first().copied().unwrap_or(0), &mut col_left, &mut table, &mut out);
    if nr == 0 {
        out.clear();
        out.push(Vec::new());
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn fill(
    rows: &[u8],
    nc: usize,
    r: usize,
    c: usize,
    row_left: u8,
    col_left: &mut [u8],
    table: &mut [u8],
    out: &mut Vec<Vec<u8>>,
) {
    if r == rows.len() {
        if col_left.iter().all(|&x| x == 0) {
            out.push(table.to_vec());
        }
        return;
    }
    if c + 1 == nc {
        // last column takes the remainder of the row
        if row_left > col_left[c] {
            return;
        }
        table[r * nc + c] = row_left;
        col_left[c] -= row_left;
        let next = rows.get(r + 1).copied().unwrap_or(0);
        fill(rows, nc, r + 1, 0, next, col_left, table, out);
        col_left[c] += row_left;
        table[r * nc + c] = 0;
        return;
    }
    for v in 0..=row_left.min(col_left[c]) {
        table[r * nc + c] = v;
        col_left[c] -= v;
        fill(rows, nc, r, c + 1, row_left - v, col_left, table, out);
        col_left[c] += v;
    }
    table[r * nc + c] = 0;
}
