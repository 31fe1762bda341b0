//! Bounded cochain complexes of functor modules and of plain vector spaces.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::FpMatrix;
use crate::module::{homology_module, hom_space, FunctorModule, ModuleMap};
use crate::schur::{SchurAlgebra, Weight};

/// `C^start -> C^{start+1} -> ...`, zero outside the stored range.
#[derive(Clone, Debug)]
pub struct Complex {
    alg: Arc<SchurAlgebra>,
    start: i32,
    terms: Vec<FunctorModule>,
    diffs: Vec<ModuleMap>,
}

impl Complex {
    /// `diffs[k]` maps `terms[k]` to `terms[k + 1]`.
    pub fn new(
        alg: &Arc<SchurAlgebra>,
        start: i32,
        terms: Vec<FunctorModule>,
        diffs: Vec<ModuleMap>,
    ) -> Result<Self> {
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(Error::DimensionMismatch(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for t in &terms {
            if !t.same_algebra(alg) {
                return Err(Error::InvalidInput("terms over different algebras".into()));
            }
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.source().dim() != terms[k].dim() || d.target().dim() != terms[k + 1].dim() {
                return Err(Error::DimensionMismatch(format!("differential {k}")));
            }
        }
        let c = Complex {
            alg: alg.clone(),
            start,
            terms,
            diffs,
        };
        c.check_dd()?;
        Ok(c)
    }

    pub fn zero(alg: &Arc<SchurAlgebra>) -> Self {
        Complex {
            alg: alg.clone(),
            start: 0,
            terms: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// A module concentrated in one degree.
    pub fn single(m: &FunctorModule, degree: i32) -> Self {
        Complex {
            alg: m.algebra().clone(),
            start: degree,
            terms: vec![m.clone()],
            diffs: Vec::new(),
        }
    }

    /// `source -> target` placed in degrees `degree, degree + 1`.
    pub fn from_map(f: &ModuleMap, degree: i32) -> Result<Self> {
        Complex::new(
            f.source().algebra(),
            degree,
            vec![f.source().clone(), f.target().clone()],
            vec![f.clone()],
        )
    }

    pub fn algebra(&self) -> &Arc<SchurAlgebra> {
        &self.alg
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    /// Last stored degree (`start - 1` when empty).
    pub fn end(&self) -> i32 {
        self.start + self.terms.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.start..=self.end()
    }

    pub fn term(&self, i: i32) -> FunctorModule {
        self.stored(i)
            .map(|k| self.terms[k].clone())
            .unwrap_or_else(|| FunctorModule::zero(&self.alg))
    }

    fn stored(&self, i: i32) -> Option<usize> {
        (i >= self.start && i <= self.end()).then(|| (i - self.start) as usize)
    }

    /// `d^i: C^i -> C^{i+1}`.
    pub fn diff(&self, i: i32) -> ModuleMap {
        match self.stored(i) {
            Some(k) if k < self.diffs.len() => self.diffs[k].clone(),
            _ => ModuleMap::zero(&self.term(i), &self.term(i + 1)),
        }
    }

    pub fn check_dd(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            if !self.diffs[k].compose(&self.diffs[k - 1]).is_zero() {
                return Err(Error::Inconsistent(format!(
                    "d o d != 0 at degree {}",
                    self.start + k as i32 - 1
                )));
            }
        }
        Ok(())
    }

    pub fn check_equivariant(&self) -> Result<()> {
        self.diffs.iter().try_for_each(|d| d.check_equivariant(false))
    }

    pub fn homology(&self, i: i32) -> FunctorModule {
        homology_module(&self.diff(i - 1), &self.diff(i))
    }

    pub fn homology_dim_at(&self, i: i32, w: &Weight) -> usize {
        let d = self.term(i).block_dim(w);
        d - self.diff(i).block(w).rank() - self.diff(i - 1).block(w).rank()
    }

    pub fn homology_dim(&self, i: i32) -> usize {
        let d = self.term(i).dim();
        d - self.diff(i).rank() - self.diff(i - 1).rank()
    }

    /// Degrees with nonzero cohomology.
    pub fn homology_dims(&self) -> BTreeMap<i32, usize> {
        self.degrees()
            .map(|i| (i, self.homology_dim(i)))
            .filter(|&(_, h)| h > 0)
            .collect()
    }

    pub fn is_exact(&self) -> bool {
        self.homology_dims().is_empty()
    }

    /// `C[k]^i = C^{i+k}` with differential `(-1)^k d`.
    pub fn shift(&self, k: i32) -> Complex {
        let diffs = if k % 2 == 0 {
            self.diffs.clone()
        } else {
            self.diffs.iter().map(|d| d.neg()).collect()
        };
        Complex {
            alg: self.alg.clone(),
            start: self.start - k,
            terms: self.terms.clone(),
            diffs,
        }
    }

    /// Frobenius twist of every term and differential, over `outer = S(n, d p^r)`.
    pub fn twisted(&self, outer: &Arc<SchurAlgebra>, r: u32) -> Result<Complex> {
        let q = outer.field().p().pow(r);
        let terms = self
            .terms
            .iter()
            .map(|t| t.twisted(outer, r))
            .collect::<Result<Vec<_>>>()?;
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, d)| d.twisted(&terms[k], &terms[k + 1], q))
            .collect::<Result<Vec<_>>>()?;
        Complex::new(outer, self.start, terms, diffs)
    }

    /// Termwise direct sum, with the parts of each term in argument order.
    pub fn direct_sum(&self, other: &Complex) -> Complex {
        let alg = self.alg.clone();
        let a = self.start.min(other.start);
        let b = self.end().max(other.end());
        let parts = |i: i32| vec![self.term(i), other.term(i)];
        let terms: Vec<FunctorModule> = (a..=b)
            .map(|i| FunctorModule::direct_sum(&alg, parts(i)))
            .collect();
        let diffs = (a..b)
            .map(|i| {
                let k = (i - a) as usize;
                let (x, y) = (self.diff(i), other.diff(i));
                ModuleMap::assemble(&terms[k], &parts(i), &terms[k + 1], &parts(i + 1), &[(0, 0, &x), (1, 1, &y)])
            })
            .collect();
        Complex {
            alg,
            start: a,
            terms,
            diffs,
        }
    }

    /// Drops zero terms at both ends.
    pub fn trimmed(&self) -> Complex {
        let nz: Vec<i32> = self.degrees().filter(|&i| !self.term(i).is_zero()).collect();
        let (Some(&a), Some(&b)) = (nz.first(), nz.last()) else {
            return Complex::zero(&self.alg);
        };
        Complex {
            alg: self.alg.clone(),
            start: a,
            terms: (a..=b).map(|i| self.term(i)).collect(),
            diffs: (a..b).map(|i| self.diff(i)).collect(),
        }
    }
}

/// A degree-preserving cochain map.
#[derive(Clone, Debug)]
pub struct CochainMap {
    source: Complex,
    target: Complex,
    maps: BTreeMap<i32, ModuleMap>,
}

impl CochainMap {
    pub fn new(source: &Complex, target: &Complex, maps: BTreeMap<i32, ModuleMap>) -> Result<Self> {
        for (i, f) in &maps {
            if f.source().dim() != source.term(*i).dim() || f.target().dim() != target.term(*i).dim() {
                return Err(Error::DimensionMismatch(format!("component {i}")));
            }
        }
        let m = CochainMap {
            source: source.clone(),
            target: target.clone(),
            maps,
        };
        m.check()?;
        Ok(m)
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn component(&self, i: i32) -> ModuleMap {
        self.maps
            .get(&i)
            .cloned()
            .unwrap_or_else(|| ModuleMap::zero(&self.source.term(i), &self.target.term(i)))
    }

    fn range(&self) -> std::ops::RangeInclusive<i32> {
        let a = self.source.start().min(self.target.start());
        let b = self.source.end().max(self.target.end());
        a..=b
    }

    pub fn check(&self) -> Result<()> {
        for i in self.range() {
            let lhs = self.target.diff(i).compose(&self.component(i));
            let rhs = self.component(i + 1).compose(&self.source.diff(i));
            if !lhs.add(&rhs.neg()).is_zero() {
                return Err(Error::Inconsistent(format!("not a cochain map at degree {i}")));
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.maps.values().all(|m| m.is_zero())
    }

    pub fn is_degreewise_injective(&self) -> bool {
        self.source
            .degrees()
            .all(|i| self.component(i).rank() == self.source.term(i).dim())
    }

    pub fn sub(&self, other: &CochainMap) -> CochainMap {
        let maps = self
            .range()
            .map(|i| (i, self.component(i).add(&other.component(i).neg())))
            .collect();
        CochainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            maps,
        }
    }

    /// `self o other`.
    pub fn compose(&self, other: &CochainMap) -> CochainMap {
        let maps = other
            .source
            .degrees()
            .map(|i| (i, self.component(i).compose(&other.component(i))))
            .collect();
        CochainMap {
            source: other.source.clone(),
            target: self.target.clone(),
            maps,
        }
    }

    /// `Cone(f)^i = C^{i+1} + D^i`, `d(c, x) = (-d c, f c + d x)`.
    pub fn cone(&self) -> Complex {
        let alg = self.source.algebra().clone();
        let a = (self.source.start() - 1).min(self.target.start());
        let b = (self.source.end() - 1).max(self.target.end());
        if a > b {
            return Complex::zero(&alg);
        }
        let parts = |i: i32| vec![self.source.term(i + 1), self.target.term(i)];
        let terms: Vec<FunctorModule> = (a..=b)
            .map(|i| FunctorModule::direct_sum(&alg, parts(i)))
            .collect();
        let diffs = (a..b)
            .map(|i| {
                let k = (i - a) as usize;
                let dc = self.source.diff(i + 1).neg();
                let f = self.component(i + 1);
                let dd = self.target.diff(i);
                ModuleMap::assemble(
                    &terms[k],
                    &parts(i),
                    &terms[k + 1],
                    &parts(i + 1),
                    &[(0, 0, &dc), (1, 0, &f), (1, 1, &dd)],
                )
            })
            .collect();
        Complex {
            alg,
            start: a,
            terms,
            diffs,
        }
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.cone().is_exact()
    }

    /// Solves `f = d h + h d` for an equivariant homotopy `h^i: C^i -> D^{i-1}`.
    pub fn null_homotopy(&self) -> Option<BTreeMap<i32, ModuleMap>> {
        let (c, d) = (&self.source, &self.target);
        let f = c.algebra().field();
        let degrees: Vec<i32> = self.range().collect();
        let mut cols: Vec<(i32, ModuleMap)> = Vec::new();
        for &i in &degrees {
            for h in hom_space(&c.term(i), &d.term(i - 1)) {
                cols.push((i, h));
            }
        }
        let layout = Layout::new(degrees.iter().map(|&i| (c.term(i), d.term(i))).collect());
        let columns: Vec<Vec<u8>> = cols
            .iter()
            .map(|(i, h)| {
                let mut v = vec![0u8; layout.total];
                layout.write(&mut v, (*i - degrees[0]) as usize, &d.diff(i - 1).compose(h));
                if *i > degrees[0] {
                    layout.write(&mut v, (*i - 1 - degrees[0]) as usize, &h.compose(&c.diff(i - 1)));
                }
                v
            })
            .collect();
        let mut rhs = vec![0u8; layout.total];
        for &i in &degrees {
            layout.write(&mut rhs, (i - degrees[0]) as usize, &self.component(i));
        }
        if rhs.iter().all(|&x| x == 0) {
            return Some(BTreeMap::new());
        }
        let a = FpMatrix::from_columns(f, layout.total, &columns);
        let x = a.solve(&rhs).ok()??;
        let mut out: BTreeMap<i32, ModuleMap> = BTreeMap::new();
        for ((i, h), &coef) in cols.iter().zip(&x) {
            if coef != 0 {
                let t = h.scale(coef);
                let e = out.entry(*i).or_insert_with(|| ModuleMap::zero(h.source(), h.target()));
                *e = e.add(&t);
            }
        }
        Some(out)
    }

    pub fn is_null_homotopic(&self) -> bool {
        self.null_homotopy().is_some()
    }
}

/// Coordinates for flattening a list of maps `X_k -> Y_k` into one vector.
struct Layout {
    offsets: Vec<BTreeMap<Weight, usize>>,
    total: usize,
}

impl Layout {
    fn new(pairs: Vec<(FunctorModule, FunctorModule)>) -> Self {
        let mut total = 0;
        let offsets = pairs
            .iter()
            .map(|(x, y)| {
                x.blocks()
                    .filter_map(|(w, sd)| {
                        let td = y.block_dim(&w);
                        (td > 0).then(|| {
                            let o = total;
                            total += td * sd;
                            (w, o)
                        })
                    })
                    .collect()
            })
            .collect();
        Layout { offsets, total }
    }

    fn write(&self, v: &mut [u8], slot: usize, m: &ModuleMap) {
        let f = m.source().field();
        for (w, b) in m.nonzero_blocks() {
            let o = self.offsets[slot][w];
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    let x = &mut v[o + r * b.cols() + c];
                    *x = f.add(*x, b.get(r, c));
                }
            }
        }
    }
}

/// Basis of the degree-zero cochain maps `C -> D`.
pub fn cochain_map_space(c: &Complex, d: &Complex) -> Vec<CochainMap> {
    let f = c.algebra().field();
    let a = c.start().max(d.start());
    let b = c.end().min(d.end());
    if a > b {
        return Vec::new();
    }
    let mut cols: Vec<(i32, ModuleMap)> = Vec::new();
    for i in a..=b {
        for h in hom_space(&c.term(i), &d.term(i)) {
            cols.push((i, h));
        }
    }
    // constraints d f^i = f^{i+1} d as maps C^i -> D^{i+1}, i in a-1..=b
    let layout = Layout::new((a - 1..=b).map(|i| (c.term(i), d.term(i + 1))).collect());
    let columns: Vec<Vec<u8>> = cols
        .iter()
        .map(|(i, h)| {
            let mut v = vec![0u8; layout.total];
            layout.write(&mut v, (*i - a + 1) as usize, &d.diff(*i).compose(h));
            layout.write(&mut v, (*i - a) as usize, &h.compose(&c.diff(*i - 1)).neg());
            v
        })
        .collect();
    if cols.is_empty() {
        return Vec::new();
    }
    let kernel = if layout.total == 0 {
        FpMatrix::identity(f, cols.len())
    } else {
        FpMatrix::from_columns(f, layout.total, &columns).kernel_basis()
    };
    (0..kernel.cols())
        .map(|j| {
            let x = kernel.column(j);
            let mut maps: BTreeMap<i32, ModuleMap> = BTreeMap::new();
            for ((i, h), &coef) in cols.iter().zip(&x) {
                if coef != 0 {
                    let e = maps
                        .entry(*i)
                        .or_insert_with(|| ModuleMap::zero(h.source(), h.target()));
                    *e = e.add(&h.scale(coef));
                }
            }
            CochainMap {
                source: c.clone(),
                target: d.clone(),
                maps,
            }
        })
        .collect()
}

/// A bounded complex of finite-dimensional vector spaces.
#[derive(Clone, Debug)]
pub struct VComplex {
    field: Field,
    start: i32,
    dims: Vec<usize>,
    /// `diffs[k]` is `dims[k + 1] x dims[k]`.
    diffs: Vec<FpMatrix>,
}

impl VComplex {
    pub fn new(field: Field, start: i32, dims: Vec<usize>, diffs: Vec<FpMatrix>) -> Result<Self> {
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(Error::DimensionMismatch("differential count".into()));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.cols() != dims[k] || d.rows() != dims[k + 1] {
                return Err(Error::DimensionMismatch(format!("differential {k}")));
            }
        }
        for k in 1..diffs.len() {
            if !diffs[k].mul_unchecked(&diffs[k - 1]).is_zero() {
                return Err(Error::Inconsistent(format!(
                    "d o d != 0 at degree {}",
                    start + k as i32 - 1
                )));
            }
        }
        Ok(VComplex {
            field,
            start,
            dims,
            diffs,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn end(&self) -> i32 {
        self.start + self.dims.len() as i32 - 1
    }

    pub fn dim(&self, i: i32) -> usize {
        self.slot(i).map_or(0, |k| self.dims[k])
    }

    fn slot(&self, i: i32) -> Option<usize> {
        (i >= self.start && i <= self.end()).then(|| (i - self.start) as usize)
    }

    pub fn diff(&self, i: i32) -> FpMatrix {
        match self.slot(i) {
            Some(k) if k < self.diffs.len() => self.diffs[k].clone(),
            _ => FpMatrix::zeros(self.field, self.dim(i + 1), self.dim(i)),
        }
    }

    fn rank(&self, i: i32) -> usize {
        match self.slot(i) {
            Some(k) if k < self.diffs.len() => self.diffs[k].rank(),
            _ => 0,
        }
    }

    pub fn homology_dim(&self, i: i32) -> usize {
        self.dim(i) - self.rank(i) - self.rank(i - 1)
    }

    /// Cycles `ker d^i` (columns).
    pub fn cycles(&self, i: i32) -> FpMatrix {
        if self.dim(i) == 0 {
            return FpMatrix::zeros(self.field, 0, 0);
        }
        self.diff(i).kernel_basis()
    }

    /// Boundaries `im d^{i-1}` (columns).
    pub fn boundaries(&self, i: i32) -> FpMatrix {
        self.diff(i - 1).image_basis()
    }
}
