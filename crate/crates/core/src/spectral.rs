//! Bicomplexes of vector spaces, the spectral sequences of their two
//! filtrations with explicit page differentials, and the hyper-Ext bicomplex
//! `Hom(C_j, J^i)`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::complex::{Complex, VComplex};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::injective::{
    closed_form_to_map, coresolve_complex, hom_block, map_to_closed_form, Cogenerators,
    Coresolution, CoresolveOptions,
};
use crate::linalg::FpMatrix;
use crate::schur::SchurAlgebra;

pub type Bidegree = (i32, i32);

/// Finite family `B^{ij}` with `d_I: (i,j) -> (i+1,j)` and `d_II: (i,j) -> (i,j+1)`.
/// The total differential is `d_I + (-1)^i d_II`.
#[derive(Clone, Debug)]
pub struct Bicomplex {
    field: Field,
    dims: BTreeMap<Bidegree, usize>,
    first: BTreeMap<Bidegree, FpMatrix>,
    second: BTreeMap<Bidegree, FpMatrix>,
}

impl Bicomplex {
    pub fn new(field: Field) -> Self {
        Bicomplex {
            field,
            dims: BTreeMap::new(),
            first: BTreeMap::new(),
            second: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn set_dim(&mut self, at: Bidegree, dim: usize) {
        if dim > 0 {
            self.dims.insert(at, dim);
        } else {
            self.dims.remove(&at);
        }
    }

    pub fn set_first(&mut self, from: Bidegree, m: FpMatrix) {
        assert_eq!((m.rows(), m.cols()), (self.dim((from.0 + 1, from.1)), self.dim(from)));
        if !m.is_zero() {
            self.first.insert(from, m);
        }
    }

    pub fn set_second(&mut self, from: Bidegree, m: FpMatrix) {
        assert_eq!((m.rows(), m.cols()), (self.dim((from.0, from.1 + 1)), self.dim(from)));
        if !m.is_zero() {
            self.second.insert(from, m);
        }
    }

    pub fn dim(&self, at: Bidegree) -> usize {
        self.dims.get(&at).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (Bidegree, usize)> + '_ {
        self.dims.iter().map(|(&k, &v)| (k, v))
    }

    pub fn first(&self, from: Bidegree) -> FpMatrix {
        self.first.get(&from).cloned().unwrap_or_else(|| {
            FpMatrix::zeros(self.field, self.dim((from.0 + 1, from.1)), self.dim(from))
        })
    }

    pub fn second(&self, from: Bidegree) -> FpMatrix {
        self.second.get(&from).cloned().unwrap_or_else(|| {
            FpMatrix::zeros(self.field, self.dim((from.0, from.1 + 1)), self.dim(from))
        })
    }

    /// Both differentials square to zero and commute.
    pub fn check(&self) -> Result<()> {
        for &(i, j) in self.dims.keys() {
            let a = self.first((i + 1, j)).mul_unchecked(&self.first((i, j)));
            let b = self.second((i, j + 1)).mul_unchecked(&self.second((i, j)));
            let c1 = self.second((i + 1, j)).mul_unchecked(&self.first((i, j)));
            let c2 = self.first((i, j + 1)).mul_unchecked(&self.second((i, j)));
            if !a.is_zero() || !b.is_zero() || c1 != c2 {
                return Err(Error::Inconsistent(format!("bicomplex relations fail at ({i}, {j})")));
            }
        }
        Ok(())
    }

    /// The bicomplex with the two directions exchanged.
    pub fn transposed(&self) -> Bicomplex {
        let swap = |m: &BTreeMap<Bidegree, FpMatrix>| m.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect();
        Bicomplex {
            field: self.field,
            dims: self.dims.iter().map(|(&(i, j), &d)| ((j, i), d)).collect(),
            first: swap(&self.second),
            second: swap(&self.first),
        }
    }

    fn total_range(&self) -> Option<(i32, i32)> {
        let ns: BTreeSet<i32> = self.dims.keys().map(|&(i, j)| i + j).collect();
        Some((*ns.first()?, *ns.last()?))
    }

    /// Bidegrees of total degree `n` in ascending `i`, with offsets.
    fn layout(&self, n: i32) -> Vec<(Bidegree, usize, usize)> {
        let mut off = 0;
        self.dims
            .iter()
            .filter(|(&(i, j), _)| i + j == n)
            .map(|(&b, &d)| {
                let o = off;
                off += d;
                (b, o, d)
            })
            .collect()
    }

    fn total_diff(&self, n: i32) -> FpMatrix {
        let src = self.layout(n);
        let tgt = self.layout(n + 1);
        let rows = tgt.last().map_or(0, |&(_, o, d)| o + d);
        let cols = src.last().map_or(0, |&(_, o, d)| o + d);
        let mut m = FpMatrix::zeros(self.field, rows, cols);
        let find = |b: Bidegree| tgt.iter().find(|t| t.0 == b).map(|t| t.1);
        for &((i, j), o, _) in &src {
            if let (Some(r), Some(a)) = (find((i + 1, j)), self.first.get(&(i, j))) {
                m.put(r, o, a);
            }
            if let (Some(r), Some(b)) = (find((i, j + 1)), self.second.get(&(i, j))) {
                let b = if i % 2 == 0 { b.clone() } else { b.scale(self.field.neg(1)) };
                m.put(r, o, &b);
            }
        }
        m
    }

    pub fn total(&self) -> VComplex {
        let Some((a, b)) = self.total_range() else {
            return VComplex::new(self.field, 0, Vec::new(), Vec::new()).unwrap();
        };
        let dims = (a..=b)
            .map(|n| self.layout(n).iter().map(|t| t.2).sum())
            .collect();
        let diffs = (a..b).map(|n| self.total_diff(n)).collect();
        VComplex::new(self.field, a, dims, diffs).expect("total complex")
    }

    /// Homology of the total complex, nonzero degrees only.
    pub fn total_homology(&self) -> BTreeMap<i32, usize> {
        let t = self.total();
        (t.start()..=t.end())
            .map(|n| (n, t.homology_dim(n)))
            .filter(|&(_, h)| h > 0)
            .collect()
    }
}

/// Which index filters the total complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Filtration {
    /// `F^p = sum_{i >= p}`; `d_r: (i,j) -> (i+r, j-r+1)`.
    First,
    /// `F^p = sum_{j >= p}`; `d_r: (i,j) -> (i-r+1, j+r)`.
    Second,
}

impl Filtration {
    fn level(self, b: Bidegree) -> i32 {
        match self {
            Filtration::First => b.0,
            Filtration::Second => b.1,
        }
    }

    fn bidegree(self, p: i32, n: i32) -> Bidegree {
        match self {
            Filtration::First => (p, n - p),
            Filtration::Second => (n - p, p),
        }
    }

    /// Target of `d_r` from `b`.
    pub fn target(self, b: Bidegree, r: usize) -> Bidegree {
        let r = r as i32;
        match self {
            Filtration::First => (b.0 + r, b.1 - r + 1),
            Filtration::Second => (b.0 - r + 1, b.1 + r),
        }
    }
}

/// `Z / D` with a left inverse for reading coordinates.
#[derive(Clone, Debug)]
struct Quotient {
    reps: FpMatrix,
    coords: FpMatrix,
}

impl Quotient {
    fn new(field: Field, ambient: usize, z: &FpMatrix, den: &FpMatrix) -> Self {
        let den = den.image_basis();
        let mut both = den.clone();
        let mut reps_cols = Vec::new();
        for c in 0..z.cols() {
            let v = z.column(c);
            let trial = both.hstack(&FpMatrix::from_columns(field, ambient, std::slice::from_ref(&v)));
            if trial.rank() > both.cols() {
                both = trial;
                reps_cols.push(v);
            }
        }
        let reps = FpMatrix::from_columns(field, ambient, &reps_cols);
        let all = reps.hstack(&den);
        let coords = if all.cols() == 0 {
            FpMatrix::zeros(field, 0, ambient)
        } else {
            let left = all.left_inverse().expect("independent columns");
            let rows: Vec<usize> = (0..reps.cols()).collect();
            let cols: Vec<usize> = (0..ambient).collect();
            left.submatrix(&rows, &cols)
        };
        Quotient { reps, coords }
    }

    fn dim(&self) -> usize {
        self.reps.cols()
    }
}

/// One page: dimensions and the differential matrices `d_r`.
#[derive(Clone, Debug)]
pub struct Page {
    pub r: usize,
    pub entries: BTreeMap<Bidegree, usize>,
    pub differentials: BTreeMap<Bidegree, FpMatrix>,
    quotients: BTreeMap<(i32, i32), Quotient>,
}

impl Page {
    pub fn dim(&self, b: Bidegree) -> usize {
        self.entries.get(&b).copied().unwrap_or(0)
    }

    pub fn is_degenerate(&self) -> bool {
        self.differentials.values().all(|m| m.is_zero())
    }

    pub fn nonzero_differentials(&self) -> Vec<(Bidegree, usize)> {
        self.differentials
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(&b, m)| (b, m.rank()))
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PageReport {
    pub page: usize,
    pub entries: Vec<EntryReport>,
    pub differentials_nonzero: Vec<DifferentialReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub i: i32,
    pub j: i32,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DifferentialReport {
    pub from: [i32; 2],
    pub to: [i32; 2],
    pub rank: usize,
}

/// Pages `E_1, E_2, ...` of a bounded bicomplex, through stabilization.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    pub filtration: Filtration,
    pub pages: Vec<Page>,
    pub infinity: BTreeMap<Bidegree, usize>,
    pub total: BTreeMap<i32, usize>,
    total_complex: VComplex,
    layouts: BTreeMap<i32, Vec<(Bidegree, usize, usize)>>,
}

impl SpectralSequence {
    pub fn new(b: &Bicomplex, filtration: Filtration) -> Self {
        let t = b.total();
        let layouts: BTreeMap<i32, Vec<(Bidegree, usize, usize)>> =
            (t.start()..=t.end()).map(|n| (n, b.layout(n))).collect();
        let levels: BTreeSet<i32> = b.dims.keys().map(|&x| filtration.level(x)).collect();
        let width = match (levels.first(), levels.last()) {
            (Some(a), Some(z)) => (z - a) as usize,
            _ => 0,
        };
        let mut ss = SpectralSequence {
            filtration,
            pages: Vec::new(),
            infinity: BTreeMap::new(),
            total: (t.start()..=t.end())
                .map(|n| (n, t.homology_dim(n)))
                .filter(|&(_, h)| h > 0)
                .collect(),
            total_complex: t,
            layouts,
        };
        // d_r vanishes once r exceeds the width; one more page is E_infinity
        for r in 1..=width + 2 {
            let page = ss.compute_page(r, &levels);
            ss.pages.push(page);
        }
        ss.infinity = ss.compute_infinity(&levels);
        ss
    }

    fn field(&self) -> Field {
        self.total_complex.field()
    }

    fn ambient(&self, n: i32) -> usize {
        self.total_complex.dim(n)
    }

    /// Coordinates of `T^n` with filtration level `< q` (or all levels `>= q` when `above`).
    fn coords(&self, n: i32, q: i32, above: bool) -> Vec<usize> {
        let Some(l) = self.layouts.get(&n) else {
            return Vec::new();
        };
        l.iter()
            .filter(|(b, _, _)| (self.filtration.level(*b) >= q) == above)
            .flat_map(|&(_, o, d)| o..o + d)
            .collect()
    }

    /// `Z_r(p, n) = {x in F^p T^n : d x in F^{p+r}}` as columns in `T^n`.
    fn z(&self, r: i64, p: i32, n: i32) -> FpMatrix {
        let f = self.field();
        let amb = self.ambient(n);
        let fp = self.coords(n, p, true);
        if fp.is_empty() {
            return FpMatrix::zeros(f, amb, 0);
        }
        let embed = |k: &FpMatrix| {
            let mut out = FpMatrix::zeros(f, amb, k.cols());
            for (row, &c) in fp.iter().enumerate() {
                for j in 0..k.cols() {
                    out.set(c, j, k.get(row, j));
                }
            }
            out
        };
        let bound = if r >= i32::MAX as i64 { i32::MAX } else { p.saturating_add(r as i32) };
        let low = self.coords(n + 1, bound, false);
        if low.is_empty() || r < 0 {
            return embed(&FpMatrix::identity(f, fp.len()));
        }
        let d = self.total_complex.diff(n).submatrix(&low, &fp);
        embed(&d.kernel_basis())
    }

    fn quotient(&self, r: usize, p: i32, n: i32) -> Quotient {
        let f = self.field();
        let amb = self.ambient(n);
        let z = self.z(r as i64, p, n);
        let z1 = self.z(r as i64 - 1, p + 1, n);
        let zb = self.z(r as i64 - 1, p - r as i32 + 1, n - 1);
        let bd = if zb.cols() > 0 && amb > 0 {
            self.total_complex.diff(n - 1).mul_unchecked(&zb)
        } else {
            FpMatrix::zeros(f, amb, 0)
        };
        Quotient::new(f, amb, &z, &z1.hstack(&bd))
    }

    fn compute_page(&self, r: usize, levels: &BTreeSet<i32>) -> Page {
        let mut quotients = BTreeMap::new();
        for &n in self.layouts.keys() {
            for &p in levels {
                let q = self.quotient(r, p, n);
                if q.dim() > 0 {
                    quotients.insert((p, n), q);
                }
            }
        }
        let mut entries = BTreeMap::new();
        let mut differentials = BTreeMap::new();
        for (&(p, n), q) in &quotients {
            let b = self.filtration.bidegree(p, n);
            entries.insert(b, q.dim());
            let Some(tq) = quotients.get(&(p + r as i32, n + 1)) else {
                continue;
            };
            let dx = self.total_complex.diff(n).mul_unchecked(&q.reps);
            differentials.insert(b, tq.coords.mul_unchecked(&dx));
        }
        Page {
            r,
            entries,
            differentials,
            quotients,
        }
    }

    fn compute_infinity(&self, levels: &BTreeSet<i32>) -> BTreeMap<Bidegree, usize> {
        let f = self.field();
        let mut out = BTreeMap::new();
        for &n in self.layouts.keys() {
            let amb = self.ambient(n);
            let cyc = self.total_complex.cycles(n);
            let bnd = self.total_complex.boundaries(n);
            let restrict = |m: &FpMatrix, p: i32| -> FpMatrix {
                // elements of span(m) inside F^p
                let low = self.coords(n, p, false);
                if m.cols() == 0 {
                    return FpMatrix::zeros(f, amb, 0);
                }
                if low.is_empty() {
                    return m.clone();
                }
                let cols: Vec<usize> = (0..m.cols()).collect();
                let k = m.submatrix(&low, &cols).kernel_basis();
                m.mul_unchecked(&k)
            };
            for &p in levels {
                let zp = restrict(&cyc, p);
                let den = restrict(&cyc, p + 1).hstack(&restrict(&bnd, p));
                let d = zp.rank() - den.rank();
                if d > 0 {
                    out.insert(self.filtration.bidegree(p, n), d);
                }
            }
        }
        out
    }

    /// Page `E_r` (`r >= 1`); pages past the computed range equal the last one.
    pub fn page(&self, r: usize) -> &Page {
        let k = r.max(1) - 1;
        &self.pages[k.min(self.pages.len() - 1)]
    }

    /// Smallest `r >= 2` from which every differential vanishes.
    pub fn degeneration_page(&self) -> usize {
        let mut r = self.pages.len() + 1;
        while r > 2 && self.page(r - 1).is_degenerate() {
            r -= 1;
        }
        r.max(2)
    }

    pub fn collapses_at_two(&self) -> bool {
        self.pages.iter().skip(1).all(|p| p.is_degenerate())
    }

    pub fn certificate(&self) -> Option<CollapseCertificate> {
        self.collapses_at_two().then_some(CollapseCertificate {
            page: 2,
            verified_through: self.pages.len(),
        })
    }

    pub fn report(&self, r: usize) -> PageReport {
        let page = self.page(r);
        PageReport {
            page: r,
            entries: page
                .entries
                .iter()
                .map(|(&(i, j), &dim)| EntryReport { i, j, dim })
                .collect(),
            differentials_nonzero: page
                .nonzero_differentials()
                .into_iter()
                .map(|(b, rank)| {
                    let t = self.filtration.target(b, r);
                    DifferentialReport {
                        from: [b.0, b.1],
                        to: [t.0, t.1],
                        rank,
                    }
                })
                .collect(),
        }
    }

    /// Checks that each page is the homology of the previous one.
    pub fn check_transitions(&self) -> Result<()> {
        for w in self.pages.windows(2) {
            let (cur, next) = (&w[0], &w[1]);
            let keys: BTreeSet<Bidegree> = cur.entries.keys().chain(next.entries.keys()).copied().collect();
            for b in keys {
                let out_rank = cur.differentials.get(&b).map_or(0, |m| m.rank());
                let src = self.inverse_target(b, cur.r);
                let in_rank = cur.differentials.get(&src).map_or(0, |m| m.rank());
                let expect = cur.dim(b) - out_rank - in_rank;
                if expect != next.dim(b) {
                    return Err(Error::Inconsistent(format!(
                        "E_{} at {:?}: homology {} but next page has {}",
                        cur.r,
                        b,
                        expect,
                        next.dim(b)
                    )));
                }
            }
            for (b, m) in &cur.differentials {
                let t = self.filtration.target(*b, cur.r);
                if let Some(m2) = cur.differentials.get(&t) {
                    if !m2.mul_unchecked(m).is_zero() {
                        return Err(Error::Inconsistent(format!("d_{} squares to nonzero at {b:?}", cur.r)));
                    }
                }
            }
        }
        Ok(())
    }

    fn inverse_target(&self, b: Bidegree, r: usize) -> Bidegree {
        let r = r as i32;
        match self.filtration {
            Filtration::First => (b.0 - r, b.1 + r - 1),
            Filtration::Second => (b.0 + r - 1, b.1 - r),
        }
    }

    /// Convergence: antidiagonal sums of `E_infinity` equal total homology.
    pub fn check_convergence(&self) -> Result<()> {
        let mut sums: BTreeMap<i32, usize> = BTreeMap::new();
        for (&(i, j), &d) in &self.infinity {
            *sums.entry(i + j).or_default() += d;
        }
        if sums != self.total {
            return Err(Error::Inconsistent(format!(
                "E_infinity sums {sums:?} differ from total homology {:?}",
                self.total
            )));
        }
        let last = self.pages.last().map(|p| p.entries.clone()).unwrap_or_default();
        if last != self.infinity {
            return Err(Error::Inconsistent("pages did not stabilize at E_infinity".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseCertificate {
    /// Every differential on pages `>= page` vanishes.
    pub page: usize,
    pub verified_through: usize,
}

/// A filtration-preserving map of bicomplexes, one matrix per bidegree.
#[derive(Clone, Debug)]
pub struct BicomplexMap {
    pub blocks: BTreeMap<Bidegree, FpMatrix>,
}

/// Maps induced on every page by a bicomplex map.
pub fn induced_morphism(
    src: &SpectralSequence,
    tgt: &SpectralSequence,
    phi: &BicomplexMap,
    src_b: &Bicomplex,
    tgt_b: &Bicomplex,
) -> Vec<BTreeMap<Bidegree, FpMatrix>> {
    let f = src.field();
    let total_map = |n: i32| {
        let sl = src_b.layout(n);
        let tl = tgt_b.layout(n);
        let rows = tl.last().map_or(0, |&(_, o, d)| o + d);
        let cols = sl.last().map_or(0, |&(_, o, d)| o + d);
        let mut m = FpMatrix::zeros(f, rows, cols);
        for &(b, o, _) in &sl {
            if let (Some(t), Some(blk)) = (tl.iter().find(|t| t.0 == b), phi.blocks.get(&b)) {
                m.put(t.1, o, blk);
            }
        }
        m
    };
    let maps: BTreeMap<i32, FpMatrix> = src.layouts.keys().map(|&n| (n, total_map(n))).collect();
    let r_max = src.pages.len().max(tgt.pages.len());
    (1..=r_max)
        .map(|r| {
            let (sp, tp) = (src.page(r), tgt.page(r));
            sp.quotients
                .iter()
                .map(|(&(p, n), q)| {
                    let b = src.filtration.bidegree(p, n);
                    let m = match tp.quotients.get(&(p, n)) {
                        Some(tq) => tq.coords.mul_unchecked(&maps[&n].mul_unchecked(&q.reps)),
                        None => FpMatrix::zeros(f, 0, q.dim()),
                    };
                    (b, m)
                })
                .collect()
        })
        .collect()
}

/// Outcome of checking the injectivity lemma numerically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LemmaVerdict {
    /// Hypotheses hold and the source degenerates at page two.
    CollapseConfirmed { verified_through: usize },
    /// A hypothesis fails; the lemma says nothing.
    Inapplicable { reason: String },
    /// Hypotheses hold but the source has a nonzero differential. Never expected.
    Violation { page: usize, at: Bidegree },
}

/// Checks the lemma: a morphism injective at page two into a sequence that
/// degenerates at page two forces the source to degenerate too.
pub fn check_collapse_lemma(
    src: &SpectralSequence,
    tgt: &SpectralSequence,
    morphism: &[BTreeMap<Bidegree, FpMatrix>],
) -> LemmaVerdict {
    let Some(phi2) = morphism.get(1) else {
        return LemmaVerdict::Inapplicable {
            reason: "no page-two morphism".into(),
        };
    };
    let (e2, t2) = (src.page(2), tgt.page(2));
    for (&b, &d) in &e2.entries {
        let m = phi2.get(&b);
        if m.map_or(0, |m| m.rank()) != d {
            return LemmaVerdict::Inapplicable {
                reason: format!("not injective at page two in bidegree {b:?}"),
            };
        }
    }
    for (&b, d2) in &e2.differentials {
        let t = src.filtration.target(b, 2);
        let (Some(pb), Some(pt)) = (phi2.get(&b), phi2.get(&t)) else {
            continue;
        };
        let lhs = pt.mul_unchecked(d2);
        let rhs = match t2.differentials.get(&b) {
            Some(td) => td.mul_unchecked(pb),
            None => FpMatrix::zeros(src.field(), lhs.rows(), lhs.cols()),
        };
        if lhs != rhs {
            return LemmaVerdict::Inapplicable {
                reason: format!("morphism does not commute with d_2 at {b:?}"),
            };
        }
    }
    if !tgt.collapses_at_two() {
        return LemmaVerdict::Inapplicable {
            reason: "target does not degenerate at page two".into(),
        };
    }
    for page in src.pages.iter().skip(1) {
        if let Some((b, _)) = page.nonzero_differentials().first() {
            return LemmaVerdict::Violation { page: page.r, at: *b };
        }
    }
    LemmaVerdict::CollapseConfirmed {
        verified_through: src.pages.len(),
    }
}

/// `B^{ij} = Hom(C^{-j}, J^i)` in closed-form coordinates.
pub fn hyper_ext_bicomplex(c: &Complex, res: &Coresolution) -> Bicomplex {
    let fld = c.algebra().field();
    let inj = &res.injectives;
    let mut b = Bicomplex::new(fld);
    for i in inj.start()..=inj.end() {
        let t = inj.term(i).unwrap();
        for a in c.degrees() {
            b.set_dim((i, -a), t.hom_dim_from(&c.term(a)));
        }
    }
    for i in inj.start()..=inj.end() {
        let t = inj.term(i).unwrap();
        for a in c.degrees() {
            let ca = c.term(a);
            if let (Some(d), Some(t1)) = (inj.diff(i), inj.term(i + 1)) {
                b.set_first((i, -a), hom_block(&ca, t, t1, d, fld));
            }
            // precomposition with d: C^{a-1} -> C^a
            let prev = c.term(a - 1);
            let dc = c.diff(a - 1);
            let mut m = FpMatrix::zeros(fld, t.hom_dim_from(&prev), t.hom_dim_from(&ca));
            let (mut ro, mut co) = (0, 0);
            for mu in t.summands() {
                let blk = dc.block(mu);
                if blk.rows() > 0 && blk.cols() > 0 {
                    m.put(ro, co, &blk.transpose());
                }
                ro += prev.block_dim(mu);
                co += ca.block_dim(mu);
            }
            b.set_second((i, -a), m);
        }
    }
    b
}

/// The hyper-Ext data of `(C, D)`: coresolution, bicomplex and the sequence
/// of the filtration by the `J` index, whose `E_2^{ij}` is `Ext^i(H_j(C), D)`.
pub struct HyperExt {
    pub source: Complex,
    pub resolution: Coresolution,
    pub bicomplex: Bicomplex,
    pub sequence: SpectralSequence,
}

impl HyperExt {
    pub fn new(c: &Complex, d: &Complex, top: i32, opts: CoresolveOptions, cog: &Cogenerators) -> Result<Self> {
        if !Arc::ptr_eq(c.algebra(), d.algebra()) && c.algebra().dim() != d.algebra().dim() {
            return Err(Error::DegreeMismatch("complexes over different algebras".into()));
        }
        let resolution = coresolve_complex(d, top, opts, cog, None)?;
        let bicomplex = hyper_ext_bicomplex(c, &resolution);
        bicomplex.check()?;
        let sequence = SpectralSequence::new(&bicomplex, Filtration::First);
        Ok(HyperExt {
            source: c.clone(),
            resolution,
            bicomplex,
            sequence,
        })
    }

    /// `J`-degrees whose page entries do not see the truncation of `J`.
    pub fn reliable_below(&self) -> i32 {
        if self.resolution.complete {
            i32::MAX
        } else {
            self.resolution.top
        }
    }
}

/// The comparison `E -> E~` from `(C, D)` to `(C^(1), D^(1))`: `J~` coresolves
/// `J^(1)` and a map `phi` goes to `aug o phi^(1)`.
pub struct TwistComparison {
    pub untwisted: HyperExt,
    pub twisted: HyperExt,
    pub map: BicomplexMap,
    pub morphism: Vec<BTreeMap<Bidegree, FpMatrix>>,
}

impl TwistComparison {
    pub fn new(
        c: &Complex,
        d: &Complex,
        outer: &Arc<SchurAlgebra>,
        top: i32,
        opts: CoresolveOptions,
    ) -> Result<Self> {
        let cog = Cogenerators::new(c.algebra());
        let untwisted = HyperExt::new(c, d, top, opts, &cog)?;
        let q = outer.field().p();
        let c1 = c.twisted(outer, 1)?;
        let j1 = untwisted.resolution.injectives.complex().twisted(outer, 1)?;
        let cog1 = Cogenerators::new(outer);
        let resolution = coresolve_complex(&j1, top, opts, &cog1, None)?;
        let bicomplex = hyper_ext_bicomplex(&c1, &resolution);
        bicomplex.check()?;
        let sequence = SpectralSequence::new(&bicomplex, Filtration::First);
        let twisted = HyperExt {
            source: c1.clone(),
            resolution,
            bicomplex,
            sequence,
        };
        let inj = &untwisted.resolution.injectives;
        let tinj = &twisted.resolution.injectives;
        let aug = &twisted.resolution.augmentation;
        let mut blocks = BTreeMap::new();
        for (&(i, j), &dim) in untwisted.bicomplex.dims.iter() {
            let (Some(t), Some(tt)) = (inj.term(i), tinj.term(i)) else {
                continue;
            };
            let (ca, ca1) = (c.term(-j), c1.term(-j));
            let eps = aug.component(i);
            let cols: Vec<Vec<u8>> = (0..dim)
                .map(|k| {
                    let mut e = vec![0u8; dim];
                    e[k] = 1;
                    let phi = closed_form_to_map(&ca, t, &e);
                    let phi1 = phi
                        .twisted(&ca1, &j1.term(i), q)
                        .expect("twisted map shapes");
                    map_to_closed_form(&eps.compose(&phi1), tt)
                })
                .collect();
            let rows = twisted.bicomplex.dim((i, j));
            blocks.insert((i, j), FpMatrix::from_columns(outer.field(), rows, &cols));
        }
        let map = BicomplexMap { blocks };
        let morphism = induced_morphism(
            &untwisted.sequence,
            &twisted.sequence,
            &map,
            &untwisted.bicomplex,
            &twisted.bicomplex,
        );
        Ok(TwistComparison {
            untwisted,
            twisted,
            map,
            morphism,
        })
    }

    /// The map commutes with both bicomplex differentials.
    pub fn check_map(&self) -> Result<()> {
        let (a, b) = (&self.untwisted.bicomplex, &self.twisted.bicomplex);
        let f = a.field();
        let get = |x: Bidegree| self.map.blocks.get(&x).cloned();
        for &x in a.dims.keys() {
            let Some(m) = get(x) else { continue };
            for (next, da, db) in [
                ((x.0 + 1, x.1), a.first(x), b.first(x)),
                ((x.0, x.1 + 1), a.second(x), b.second(x)),
            ] {
                let mn = get(next).unwrap_or_else(|| FpMatrix::zeros(f, b.dim(next), a.dim(next)));
                if mn.mul_unchecked(&da) != db.mul_unchecked(&m) {
                    return Err(Error::Inconsistent(format!("twist comparison not a map at {x:?}")));
                }
            }
        }
        Ok(())
    }

    pub fn verdict(&self) -> LemmaVerdict {
        check_collapse_lemma(&self.untwisted.sequence, &self.twisted.sequence, &self.morphism)
    }
}
