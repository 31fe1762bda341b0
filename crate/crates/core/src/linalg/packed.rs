//! Packed row storage and incremental row echelon forms.
//!
//! Over F_2 rows are packed 64 entries per word and elimination is word-level
//! XOR. Other primes keep one residue per byte.

use crate::field::Field;

pub(crate) trait PackedRow: Clone + Send + Sync {
    fn zeros(len: usize) -> Self;
    fn from_dense(v: &[u8]) -> Self;
    fn write_dense(&self, out: &mut [u8]);
    fn get(&self, i: usize) -> u8;
    fn set(&mut self, i: usize, value: u8);
    fn first_nonzero(&self) -> Option<usize>;
    /// self += c * other
    fn axpy(&mut self, other: &Self, c: u8, field: Field);
    fn scale(&mut self, c: u8, field: Field);
}

#[derive(Clone, Debug)]
pub(crate) struct BitRow(Vec<u64>);

impl PackedRow for BitRow {
    fn zeros(len: usize) -> Self {
        BitRow(vec![0; len.div_ceil(64)])
    }

    fn from_dense(v: &[u8]) -> Self {
        let mut row = Self::zeros(v.len());
        for (i, &x) in v.iter().enumerate() {
            if x & 1 == 1 {
                row.0[i / 64] |= 1 << (i % 64);
            }
        }
        row
    }

    fn write_dense(&self, out: &mut [u8]) {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.get(i);
        }
    }

    #[inline]
    fn get(&self, i: usize) -> u8 {
        ((self.0[i / 64] >> (i % 64)) & 1) as u8
    }

    #[inline]
    fn set(&mut self, i: usize, value: u8) {
        if value & 1 == 1 {
            self.0[i / 64] |= 1 << (i % 64);
        } else {
            self.0[i / 64] &= !(1 << (i % 64));
        }
    }

    fn first_nonzero(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    #[inline]
    fn axpy(&mut self, other: &Self, c: u8, _field: Field) {
        if c & 1 == 1 {
            for (a, b) in self.0.iter_mut().zip(&other.0) {
                *a ^= *b;
            }
        }
    }

    fn scale(&mut self, c: u8, _field: Field) {
        if c & 1 == 0 {
            self.0.iter_mut().for_each(|w| *w = 0);
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct ByteRow(Vec<u8>);

impl PackedRow for ByteRow {
    fn zeros(len: usize) -> Self {
        ByteRow(vec![0; len])
    }

    fn from_dense(v: &[u8]) -> Self {
        ByteRow(v.to_vec())
    }

    fn write_dense(&self, out: &mut [u8]) {
        out.copy_from_slice(&self.0);
    }

    #[inline]
    fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    #[inline]
    fn set(&mut self, i: usize, value: u8) {
        self.0[i] = value;
    }

    fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|&x| x != 0)
    }

    fn axpy(&mut self, other: &Self, c: u8, field: Field) {
        if c == 0 {
            return;
        }
        let p = field.p() as u16;
        let c = c as u16;
        for (a, &b) in self.0.iter_mut().zip(&other.0) {
            if b != 0 {
                *a = ((*a as u16 + c * b as u16) % p) as u8;
            }
        }
    }

    fn scale(&mut self, c: u8, field: Field) {
        for a in self.0.iter_mut() {
            *a = field.mul(*a, c);
        }
    }
}

/// Row echelon form built by inserting rows one at a time.
///
/// Rows are normalized so each pivot entry is 1, and every stored row is zero
/// in the pivot columns of all earlier rows. Reduction therefore needs a single
/// pass in insertion order. When tracking is enabled each stored row carries
/// its expression as a combination of the inserted inputs.
#[derive(Clone, Debug)]
pub(crate) struct EchelonImpl<R: PackedRow> {
    field: Field,
    ncols: usize,
    rows: Vec<R>,
    pivots: Vec<usize>,
    track: Option<Tracking<R>>,
}

#[derive(Clone, Debug)]
struct Tracking<R> {
    capacity: usize,
    inserted: usize,
    combos: Vec<R>,
}

impl<R: PackedRow> EchelonImpl<R> {
    pub fn new(field: Field, ncols: usize, tracking: Option<usize>) -> Self {
        EchelonImpl {
            field,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            track: tracking.map(|capacity| Tracking {
                capacity,
                inserted: 0,
                combos: Vec::new(),
            }),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn reduce_packed(&self, v: &mut R, mut combo: Option<&mut R>) {
        for ((row, &piv), k) in self.rows.iter().zip(&self.pivots).zip(0..) {
            let c = v.get(piv);
            if c != 0 {
                let neg = self.field.neg(c);
                v.axpy(row, neg, self.field);
                if let (Some(combo), Some(track)) = (combo.as_deref_mut(), &self.track) {
                    combo.axpy(&track.combos[k], neg, self.field);
                }
            }
        }
    }

    /// Inserts `v`; returns its pivot column when it was independent.
    pub fn insert(&mut self, v: &[u8]) -> Option<usize> {
        debug_assert_eq!(v.len(), self.ncols);
        let mut row = R::from_dense(v);
        let mut combo = self.track.as_ref().map(|t| {
            assert!(t.inserted < t.capacity, "tracked echelon capacity exceeded");
            let mut c = R::zeros(t.capacity);
            c.set(t.inserted, 1);
            c
        });
        self.reduce_packed(&mut row, combo.as_mut());
        if let Some(t) = self.track.as_mut() {
            t.inserted += 1;
        }
        let piv = row.first_nonzero()?;
        let lead = row.get(piv);
        if lead != 1 {
            let inv = self.field.inv(lead);
            row.scale(inv, self.field);
            if let Some(c) = combo.as_mut() {
                c.scale(inv, self.field);
            }
        }
        self.rows.push(row);
        self.pivots.push(piv);
        if let (Some(t), Some(c)) = (self.track.as_mut(), combo) {
            t.combos.push(c);
        }
        Some(piv)
    }

    /// Residual of `v` after reduction.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let mut row = R::from_dense(v);
        self.reduce_packed(&mut row, None);
        let mut out = vec![0; self.ncols];
        row.write_dense(&mut out);
        out
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        let mut row = R::from_dense(v);
        self.reduce_packed(&mut row, None);
        row.first_nonzero().is_none()
    }

    /// Coordinates of `v` in terms of the inserted inputs, if `v` lies in their span.
    pub fn express(&self, v: &[u8]) -> Option<Vec<u8>> {
        let track = self.track.as_ref().expect("express requires tracking");
        let mut row = R::from_dense(v);
        let mut combo = R::zeros(track.capacity);
        self.reduce_packed(&mut row, Some(&mut combo));
        if row.first_nonzero().is_some() {
            return None;
        }
        // v - sum c_k row_k = 0 and combo accumulated -c_k * combo_k
        let mut out = vec![0; track.capacity];
        combo.write_dense(&mut out);
        for x in out.iter_mut() {
            *x = self.field.neg(*x);
        }
        Some(out)
    }

    /// Fully reduced rows sorted by pivot.
    pub fn rref_rows(&self) -> (Vec<Vec<u8>>, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&k| self.pivots[k]);
        let mut rows: Vec<R> = order.iter().map(|&k| self.rows[k].clone()).collect();
        let pivots: Vec<usize> = order.iter().map(|&k| self.pivots[k]).collect();
        for i in (0..rows.len()).rev() {
            for j in 0..i {
                let c = rows[j].get(pivots[i]);
                if c != 0 {
                    let (head, tail) = rows.split_at_mut(i);
                    head[j].axpy(&tail[0], self.field.neg(c), self.field);
                }
            }
        }
        let dense = rows
            .iter()
            .map(|r| {
                let mut out = vec![0; self.ncols];
                r.write_dense(&mut out);
                out
            })
            .collect();
        (dense, pivots)
    }
}

/// Runtime dispatch between bit-packed (p = 2) and byte-packed storage.
#[derive(Clone, Debug)]
pub struct Echelon(Inner);

#[derive(Clone, Debug)]
enum Inner {
    Bits(EchelonImpl<BitRow>),
    Bytes(EchelonImpl<ByteRow>),
}

macro_rules! dispatch {
    ($self:expr, $e:ident => $body:expr) => {
        match &$self.0 {
            Inner::Bits($e) => $body,
            Inner::Bytes($e) => $body,
        }
    };
}

impl Echelon {
    pub fn new(field: Field, ncols: usize) -> Self {
        Self::build(field, ncols, None)
    }

    /// Echelon form that remembers how each stored row combines the inputs.
    pub fn tracked(field: Field, ncols: usize, capacity: usize) -> Self {
        Self::build(field, ncols, Some(capacity))
    }

    fn build(field: Field, ncols: usize, tracking: Option<usize>) -> Self {
        if field.is_two() {
            Echelon(Inner::Bits(EchelonImpl::new(field, ncols, tracking)))
        } else {
            Echelon(Inner::Bytes(EchelonImpl::new(field, ncols, tracking)))
        }
    }

    pub fn rank(&self) -> usize {
        dispatch!(self, e => e.rank())
    }

    pub fn ncols(&self) -> usize {
        dispatch!(self, e => e.ncols())
    }

    pub fn pivots(&self) -> &[usize] {
        dispatch!(self, e => e.pivots())
    }

    pub fn insert(&mut self, v: &[u8]) -> Option<usize> {
        match &mut self.0 {
            Inner::Bits(e) => e.insert(v),
            Inner::Bytes(e) => e.insert(v),
        }
    }

    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        dispatch!(self, e => e.reduce(v))
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        dispatch!(self, e => e.contains(v))
    }

    pub fn express(&self, v: &[u8]) -> Option<Vec<u8>> {
        dispatch!(self, e => e.express(v))
    }

    pub fn rref_rows(&self) -> (Vec<Vec<u8>>, Vec<usize>) {
        dispatch!(self, e => e.rref_rows())
    }
}
