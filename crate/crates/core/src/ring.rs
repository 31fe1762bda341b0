//! Truncated polynomial rings `F_p[t_1..t_k] / (t^e : e not <= m)` and sparse
//! matrices over them.
//!
//! Evaluating a functor on the generic matrix `sum_ij t_ij E_ij` and reading
//! off the coefficient of `t^m` gives the action of `xi_m`. Working modulo
//! every monomial that does not divide `t^m` keeps the arithmetic small.

use std::collections::HashMap;
use std::sync::Arc;

use crate::field::Field;

/// Dense coefficient vector in mixed radix over the monomials dividing `t^m`.
pub type RElem = Vec<u8>;

#[derive(Debug)]
pub struct TruncRing {
    field: Field,
    bounds: Vec<u8>,
    size: usize,
    /// `table[i * size + j]` is the index of the product monomial or `u32::MAX`.
    table: Vec<u32>,
}

impl TruncRing {
    pub fn new(field: Field, bounds: Vec<u8>) -> Arc<Self> {
        let size: usize = bounds.iter().map(|&b| b as usize + 1).product();
        let digits: Vec<Vec<u8>> = (0..size)
            .map(|mut i| {
                bounds
                    .iter()
                    .map(|&b| {
                        let r = (i % (b as usize + 1)) as u8;
                        i /= b as usize + 1;
                        r
                    })
                    .collect()
            })
            .collect();
        let mut strides = Vec::with_capacity(bounds.len());
        let mut s = 1usize;
        for &b in &bounds {
            strides.push(s);
            s *= b as usize + 1;
        }
        let mut table = vec![u32::MAX; size * size];
        for i in 0..size {
            for j in 0..size {
                let mut idx = 0usize;
                let mut ok = true;
                for k in 0..bounds.len() {
                    let e = digits[i][k] + digits[j][k];
                    if e > bounds[k] {
                        ok = false;
                        break;
                    }
                    idx += e as usize * strides[k];
                }
                if ok {
                    table[i * size + j] = idx as u32;
                }
            }
        }
        Arc::new(TruncRing {
            field,
            bounds,
            size,
            table,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> RElem {
        vec![0; self.size]
    }

    pub fn constant(&self, c: u8) -> RElem {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    /// The variable `t_k`.
    pub fn var(&self, k: usize) -> RElem {
        let mut v = self.zero();
        if self.bounds[k] > 0 {
            let stride: usize = self.bounds[..k].iter().map(|&b| b as usize + 1).product();
            v[stride] = 1;
        }
        v
    }

    /// Coefficient of the top monomial `t^m`.
    pub fn top(&self, x: &RElem) -> u8 {
        x[self.size - 1]
    }

    pub fn is_zero(x: &RElem) -> bool {
        x.iter().all(|&c| c == 0)
    }

    pub fn add_assign(&self, x: &mut RElem, y: &RElem) {
        for (a, &b) in x.iter_mut().zip(y) {
            *a = self.field.add(*a, b);
        }
    }

    pub fn mul(&self, x: &RElem, y: &RElem) -> RElem {
        let mut out = self.zero();
        self.mul_add_into(&mut out, x, y);
        out
    }

    /// `out += x * y`.
    pub fn mul_add_into(&self, out: &mut RElem, x: &RElem, y: &RElem) {
        let f = self.field;
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let row = &self.table[i * self.size..(i + 1) * self.size];
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let k = row[j];
                if k != u32::MAX {
                    out[k as usize] = f.add(out[k as usize], f.mul(a, b));
                }
            }
        }
    }

    pub fn scale(&self, x: &RElem, c: u8) -> RElem {
        x.iter().map(|&a| self.field.mul(a, c)).collect()
    }

    pub fn pow(&self, x: &RElem, e: u64) -> RElem {
        let mut acc = self.constant(1);
        for _ in 0..e {
            acc = self.mul(&acc, x);
            if Self::is_zero(&acc) {
                break;
            }
        }
        acc
    }
}

/// Sparse matrix over a [`TruncRing`], row-major with sorted columns.
#[derive(Clone, Debug)]
pub struct PMat {
    pub ring: Arc<TruncRing>,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<(u32, RElem)>>,
}

impl PMat {
    pub fn zeros(ring: Arc<TruncRing>, rows: usize, cols: usize) -> Self {
        PMat {
            ring,
            rows,
            cols,
            entries: vec![Vec::new(); rows],
        }
    }

    pub fn identity(ring: Arc<TruncRing>, n: usize) -> Self {
        let one = ring.constant(1);
        let mut m = PMat::zeros(ring, n, n);
        for i in 0..n {
            m.entries[i].push((i as u32, one.clone()));
        }
        m
    }

    /// Builds from unsorted `(row, col, value)` triples, summing duplicates.
    pub fn from_triples(
        ring: Arc<TruncRing>,
        rows: usize,
        cols: usize,
        triples: impl IntoIterator<Item = (usize, usize, RElem)>,
    ) -> Self {
        let mut acc: Vec<HashMap<u32, RElem>> = vec![HashMap::new(); rows];
        for (r, c, v) in triples {
            match acc[r].get_mut(&(c as u32)) {
                Some(e) => ring.add_assign(e, &v),
                None => {
                    acc[r].insert(c as u32, v);
                }
            }
        }
        let entries = acc
            .into_iter()
            .map(|row| {
                let mut v: Vec<(u32, RElem)> =
                    row.into_iter().filter(|(_, e)| !TruncRing::is_zero(e)).collect();
                v.sort_unstable_by_key(|e| e.0);
                v
            })
            .collect();
        PMat {
            ring,
            rows,
            cols,
            entries,
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&RElem> {
        let row = &self.entries[r];
        row.binary_search_by_key(&(c as u32), |e| e.0)
            .ok()
            .map(|k| &row[k].1)
    }

    pub fn transpose(&self) -> PMat {
        let mut entries: Vec<Vec<(u32, RElem)>> = vec![Vec::new(); self.cols];
        for (r, row) in self.entries.iter().enumerate() {
            for (c, v) in row {
                entries[*c as usize].push((r as u32, v.clone()));
            }
        }
        PMat {
            ring: self.ring.clone(),
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, other: &PMat) -> PMat {
        assert_eq!(self.cols, other.rows);
        let ring = &self.ring;
        let entries = self
            .entries
            .iter()
            .map(|row| {
                let mut acc: HashMap<u32, RElem> = HashMap::new();
                for (k, a) in row {
                    for (c, b) in &other.entries[*k as usize] {
                        let e = acc.entry(*c).or_insert_with(|| ring.zero());
                        ring.mul_add_into(e, a, b);
                    }
                }
                let mut v: Vec<(u32, RElem)> =
                    acc.into_iter().filter(|(_, e)| !TruncRing::is_zero(e)).collect();
                v.sort_unstable_by_key(|e| e.0);
                v
            })
            .collect();
        PMat {
            ring: ring.clone(),
            rows: self.rows,
            cols: other.cols,
            entries,
        }
    }

    /// Kronecker product; row index `i * other.rows + k`.
    pub fn kron(&self, other: &PMat) -> PMat {
        let ring = &self.ring;
        let mut entries = Vec::with_capacity(self.rows * other.rows);
        for row_a in &self.entries {
            for row_b in &other.entries {
                let mut v = Vec::new();
                for (ca, a) in row_a {
                    for (cb, b) in row_b {
                        let e = ring.mul(a, b);
                        if !TruncRing::is_zero(&e) {
                            v.push((ca * other.cols as u32 + cb, e));
                        }
                    }
                }
                entries.push(v);
            }
        }
        PMat {
            ring: ring.clone(),
            rows: self.rows * other.rows,
            cols: self.cols * other.cols,
            entries,
        }
    }

    /// Applies `f` to every stored entry.
    pub fn map_entries(&self, f: impl Fn(&RElem) -> RElem) -> PMat {
        let entries = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(c, v)| (*c, f(v)))
                    .filter(|(_, v)| !TruncRing::is_zero(v))
                    .collect()
            })
            .collect();
        PMat {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Coefficients of the top monomial restricted to the given rows and columns.
    pub fn top_block(&self, rows: &[usize], cols: &[usize]) -> crate::linalg::FpMatrix {
        let field = self.ring.field();
        let mut out = crate::linalg::FpMatrix::zeros(field, rows.len(), cols.len());
        let col_pos: HashMap<u32, usize> =
            cols.iter().enumerate().map(|(k, &c)| (c as u32, k)).collect();
        for (i, &r) in rows.iter().enumerate() {
            for (c, v) in &self.entries[r] {
                if let Some(&j) = col_pos.get(c) {
                    out.set(i, j, self.ring.top(v));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_kills_overflow() {
        let f = Field::new(3).unwrap();
        let r = TruncRing::new(f, vec![2, 1]);
        let x = r.var(0);
        let y = r.var(1);
        let x2y = r.mul(&r.mul(&x, &x), &y);
        assert_eq!(r.top(&x2y), 1);
        assert!(TruncRing::is_zero(&r.mul(&x2y, &x)));
        assert!(TruncRing::is_zero(&r.mul(&y, &y)));
        let s = {
            let mut s = x.clone();
            r.add_assign(&mut s, &y);
            s
        };
        // (x + y)^3 top coefficient is C(3,1) = 3 = 0 mod 3
        assert_eq!(r.top(&r.pow(&s, 3)), 0);
    }

    #[test]
    fn kron_and_mul_are_compatible() {
        let f = Field::new(2).unwrap();
        let r = TruncRing::new(f, vec![1, 1]);
        let a = PMat::from_triples(r.clone(), 2, 2, [(0, 1, r.var(0)), (1, 1, r.constant(1))]);
        let b = PMat::from_triples(r.clone(), 2, 2, [(1, 0, r.var(1)), (0, 0, r.constant(1))]);
        // (A (x) I)(I (x) B) = A (x) B
        let i2 = PMat::identity(r.clone(), 2);
        let lhs = a.kron(&i2).mul(&i2.kron(&b));
        let rhs = a.kron(&b);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(lhs.get(i, j), rhs.get(i, j));
            }
        }
    }
}
