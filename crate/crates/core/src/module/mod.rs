//! Strict polynomial functors as weight-graded modules over `S(n, d)`.
//!
//! Coordinates of a module are the concatenation of its weight blocks in
//! ascending weight order. Every basis element `xi_m` of the algebra acts as a
//! single block `M_{colsum m} -> M_{rowsum m}`.

mod hom;
mod map;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;

pub use hom::{find_isomorphism, hom_dim, hom_space};
pub use map::ModuleMap;

use crate::error::{Error, Result};
use crate::expr::{generic_matrix, Expr};
use crate::field::Field;
use crate::linalg::{quotient_basis, Echelon, FpMatrix};
use crate::schur::{SchurAlgebra, Weight};

/// Action supplied by callers for modules without a built-in construction.
pub trait CustomAction: Send + Sync {
    /// Matrix of `xi_k` from the block of `colsum(k)` to the block of `rowsum(k)`.
    fn act(&self, k: u32) -> FpMatrix;
}

struct Projective {
    alg: Arc<SchurAlgebra>,
    lambda: Weight,
}

impl CustomAction for Projective {
    fn act(&self, k: u32) -> FpMatrix {
        let alg = &self.alg;
        let cols = alg.between(alg.colsum(k), &self.lambda);
        let rows = alg.between(alg.rowsum(k), &self.lambda);
        let mut out = FpMatrix::zeros(alg.field(), rows.len(), cols.len());
        for (j, &m) in cols.iter().enumerate() {
            for &(t, c) in alg.basis_product(k, m).iter() {
                let i = rows.binary_search(&t).expect("product stays in the column");
                out.add_at(i, j, c);
            }
        }
        out
    }
}

#[derive(Clone)]
enum Kind {
    Zero,
    Recipe {
        expr: Expr,
        basis: Vec<Vec<usize>>,
    },
    Coregular {
        mu: Weight,
        basis: Vec<Vec<u32>>,
    },
    Dual(FunctorModule),
    Twisted {
        inner: FunctorModule,
        r: u32,
    },
    Sum(Vec<FunctorModule>),
    Subquotient {
        parent: FunctorModule,
        /// Per own block: representatives and a projector onto them.
        reps: Vec<FpMatrix>,
        proj: Vec<FpMatrix>,
    },
    Custom(Arc<dyn CustomAction>),
}

struct ModuleData {
    alg: Arc<SchurAlgebra>,
    label: String,
    weights: Vec<Weight>,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    index: HashMap<Weight, usize>,
    kind: Kind,
    memo: RwLock<HashMap<u32, Arc<FpMatrix>>>,
}

/// A degree-`d` strict polynomial functor realized at `k^n`.
#[derive(Clone)]
pub struct FunctorModule(Arc<ModuleData>);

impl fmt::Debug for FunctorModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [dim {} over {:?}]", self.0.label, self.dim(), self.0.alg)
    }
}

impl FunctorModule {
    fn build(alg: Arc<SchurAlgebra>, label: String, blocks: Vec<(Weight, usize)>, kind: Kind) -> Self {
        let mut weights = Vec::new();
        let mut dims = Vec::new();
        let mut offsets = Vec::new();
        let mut index = HashMap::new();
        let mut acc = 0;
        for (w, d) in blocks {
            if d == 0 {
                continue;
            }
            index.insert(w.clone(), weights.len());
            weights.push(w);
            dims.push(d);
            offsets.push(acc);
            acc += d;
        }
        FunctorModule(Arc::new(ModuleData {
            alg,
            label,
            weights,
            dims,
            offsets,
            index,
            kind,
            memo: RwLock::new(HashMap::new()),
        }))
    }

    pub fn zero(alg: &Arc<SchurAlgebra>) -> Self {
        Self::build(alg.clone(), "0".into(), Vec::new(), Kind::Zero)
    }

    /// Module of a recipe evaluated at `k^n`.
    pub fn from_expr(alg: &Arc<SchurAlgebra>, expr: &Expr, guard: usize) -> Result<Self> {
        let p = alg.field().p();
        let n = alg.n();
        let deg = expr.degree(p);
        if deg != alg.d() as u64 {
            return Err(Error::DegreeMismatch(format!(
                "{expr} has degree {deg}, algebra has degree {}",
                alg.d()
            )));
        }
        expr.check_size(p, n, guard)?;
        let ws = expr.weights(p, n);
        let mut by_weight: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (i, w) in ws.into_iter().enumerate() {
            by_weight.entry(w).or_default().push(i);
        }
        let blocks = by_weight.iter().map(|(w, v)| (w.clone(), v.len())).collect();
        let basis = by_weight.into_values().collect();
        Ok(Self::build(
            alg.clone(),
            expr.to_string(),
            blocks,
            Kind::Recipe {
                expr: expr.clone(),
                basis,
            },
        ))
    }

    pub fn parse(alg: &Arc<SchurAlgebra>, text: &str, guard: usize) -> Result<Self> {
        Self::from_expr(alg, &crate::expr::parse(text)?, guard)
    }

    /// The injective `I_mu = (xi_mu S)^*`, isomorphic to `S^{mu_1} (x) ... (x) S^{mu_n}`.
    pub fn coregular(alg: &Arc<SchurAlgebra>, mu: &Weight) -> Self {
        let mut by_weight: BTreeMap<Weight, Vec<u32>> = BTreeMap::new();
        for &k in alg.with_rowsum(mu) {
            by_weight.entry(alg.colsum(k).clone()).or_default().push(k);
        }
        let blocks = by_weight.iter().map(|(w, v)| (w.clone(), v.len())).collect();
        Self::build(
            alg.clone(),
            format!("I{mu}"),
            blocks,
            Kind::Coregular {
                mu: mu.clone(),
                basis: by_weight.into_values().collect(),
            },
        )
    }

    /// The projective `P_lambda = S xi_lambda`, isomorphic to `G^{lambda_1} (x) ... (x) G^{lambda_n}`.
    /// The block at `w` has basis `between(w, lambda)`.
    pub fn projective(alg: &Arc<SchurAlgebra>, lambda: &Weight) -> Self {
        let blocks = alg
            .weights()
            .into_iter()
            .map(|w| {
                let d = alg.between(&w, lambda).len();
                (w, d)
            })
            .filter(|&(_, d)| d > 0)
            .collect();
        let action = Projective {
            alg: alg.clone(),
            lambda: lambda.clone(),
        };
        Self::build(alg.clone(), format!("P{lambda}"), blocks, Kind::Custom(Arc::new(action)))
    }

    /// Kuhn dual.
    pub fn dual(&self) -> Self {
        let blocks = self.blocks().collect();
        Self::build(
            self.0.alg.clone(),
            format!("dual({})", self.0.label),
            blocks,
            Kind::Dual(self.clone()),
        )
    }

    /// `F^{(r)}` over `outer = S(n, d p^r)`, with the same underlying blocks.
    pub fn twisted(&self, outer: &Arc<SchurAlgebra>, r: u32) -> Result<Self> {
        let q = outer.field().p().pow(r);
        if outer.n() != self.0.alg.n() || outer.d() != self.0.alg.d() * q as usize {
            return Err(Error::DegreeMismatch(format!(
                "cannot twist a module over {:?} into {:?}",
                self.0.alg, outer
            )));
        }
        let blocks = self.blocks().map(|(w, d)| (w.scaled(q), d)).collect();
        Ok(Self::build(
            outer.clone(),
            format!("twist({}, {r})", self.0.label),
            blocks,
            Kind::Twisted {
                inner: self.clone(),
                r,
            },
        ))
    }

    pub fn direct_sum(alg: &Arc<SchurAlgebra>, parts: Vec<FunctorModule>) -> Self {
        let mut dims: BTreeMap<Weight, usize> = BTreeMap::new();
        for part in &parts {
            assert!(part.same_algebra(alg), "summands over different algebras");
            for (w, d) in part.blocks() {
                *dims.entry(w).or_default() += d;
            }
        }
        let label = if parts.is_empty() {
            "0".to_string()
        } else {
            parts.iter().map(|m| m.0.label.clone()).collect::<Vec<_>>().join(" + ")
        };
        Self::build(alg.clone(), label, dims.into_iter().collect(), Kind::Sum(parts))
    }

    /// `X / S` where per weight `sub` spans `S` and `reps` complete it to a
    /// submodule `X` of `parent`. Both are given in parent block coordinates.
    pub fn subquotient(
        parent: &FunctorModule,
        label: String,
        blocks: Vec<(Weight, FpMatrix, FpMatrix)>,
    ) -> Self {
        let mut own = Vec::new();
        let mut reps = Vec::new();
        let mut proj = Vec::new();
        for (w, sub, rep) in blocks {
            if rep.cols() == 0 {
                continue;
            }
            assert!(parent.block_index(&w).is_some(), "weight of parent");
            let both = sub.image_basis().hstack(&rep);
            let left = both
                .left_inverse()
                .expect("representatives independent modulo the subspace");
            let s = both.cols() - rep.cols();
            let rows: Vec<usize> = (s..both.cols()).collect();
            let cols: Vec<usize> = (0..both.rows()).collect();
            proj.push(left.submatrix(&rows, &cols));
            own.push((w, rep.cols()));
            reps.push(rep);
        }
        Self::build(
            parent.0.alg.clone(),
            label,
            own,
            Kind::Subquotient {
                parent: parent.clone(),
                reps,
                proj,
            },
        )
    }

    pub fn custom(
        alg: &Arc<SchurAlgebra>,
        label: String,
        blocks: Vec<(Weight, usize)>,
        action: Arc<dyn CustomAction>,
    ) -> Self {
        Self::build(alg.clone(), label, blocks, Kind::Custom(action))
    }

    pub fn algebra(&self) -> &Arc<SchurAlgebra> {
        &self.0.alg
    }

    pub fn field(&self) -> Field {
        self.0.alg.field()
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    /// The recipe, when the module was built from one.
    pub fn recipe(&self) -> Option<&Expr> {
        match &self.0.kind {
            Kind::Recipe { expr, .. } => Some(expr),
            _ => None,
        }
    }

    /// The weight `mu` when this is a coregular injective `I_mu`.
    pub fn coregular_weight(&self) -> Option<&Weight> {
        match &self.0.kind {
            Kind::Coregular { mu, .. } => Some(mu),
            _ => None,
        }
    }

    pub fn same_algebra(&self, alg: &SchurAlgebra) -> bool {
        let a = &self.0.alg;
        a.field() == alg.field() && a.n() == alg.n() && a.d() == alg.d()
    }

    pub fn dim(&self) -> usize {
        self.0.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.dims.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.0.weights.len()
    }

    /// `(weight, dimension)` in ascending weight order.
    pub fn blocks(&self) -> impl Iterator<Item = (Weight, usize)> + '_ {
        self.0.weights.iter().cloned().zip(self.0.dims.iter().copied())
    }

    pub fn weights(&self) -> &[Weight] {
        &self.0.weights
    }

    pub fn block_index(&self, w: &Weight) -> Option<usize> {
        self.0.index.get(w).copied()
    }

    pub fn block_dim(&self, w: &Weight) -> usize {
        self.block_index(w).map(|i| self.0.dims[i]).unwrap_or(0)
    }

    pub fn block_offset(&self, w: &Weight) -> Option<usize> {
        self.block_index(w).map(|i| self.0.offsets[i])
    }

    /// Weight of every coordinate, in coordinate order.
    pub fn coordinate_weights(&self) -> Vec<Weight> {
        self.blocks()
            .flat_map(|(w, d)| std::iter::repeat_n(w, d))
            .collect()
    }

    /// Action of the basis element `xi_k` as a block map.
    pub fn act(&self, k: u32) -> Arc<FpMatrix> {
        if let Some(m) = self.0.memo.read().get(&k) {
            return m.clone();
        }
        let m = Arc::new(self.compute_act(k));
        debug_assert_eq!(m.rows(), self.block_dim(self.0.alg.rowsum(k)));
        debug_assert_eq!(m.cols(), self.block_dim(self.0.alg.colsum(k)));
        self.0.memo.write().entry(k).or_insert(m).clone()
    }

    /// Action of a sparse combination of basis elements, all mapping `from -> to`.
    pub fn act_elem(&self, elem: &[(u32, u8)], from: &Weight, to: &Weight) -> FpMatrix {
        let f = self.field();
        let mut out = FpMatrix::zeros(f, self.block_dim(to), self.block_dim(from));
        for &(k, c) in elem {
            let alg = &self.0.alg;
            assert!(alg.colsum(k) == from && alg.rowsum(k) == to, "element not homogeneous");
            let a = self.act(k);
            if a.rows() > 0 && a.cols() > 0 {
                out = out.add(&a.scale(c));
            }
        }
        out
    }

    fn zero_act(&self, k: u32) -> FpMatrix {
        let alg = &self.0.alg;
        FpMatrix::zeros(
            self.field(),
            self.block_dim(alg.rowsum(k)),
            self.block_dim(alg.colsum(k)),
        )
    }

    fn compute_act(&self, k: u32) -> FpMatrix {
        let alg = &self.0.alg;
        let (row_w, col_w) = (alg.rowsum(k), alg.colsum(k));
        let (rb, cb) = (self.block_index(row_w), self.block_index(col_w));
        let (Some(rb), Some(cb)) = (rb, cb) else {
            return self.zero_act(k);
        };
        match &self.0.kind {
            Kind::Zero => self.zero_act(k),
            Kind::Recipe { expr, basis } => {
                let t = generic_matrix(self.field(), alg.n(), alg.matrix(k));
                let full = expr.eval(self.field().p(), &t);
                full.top_block(&basis[rb], &basis[cb])
            }
            Kind::Coregular { basis, .. } => {
                let f = self.field();
                let cols: HashMap<u32, usize> =
                    basis[cb].iter().enumerate().map(|(i, &m)| (m, i)).collect();
                let mut out = FpMatrix::zeros(f, basis[rb].len(), basis[cb].len());
                for (i, &b) in basis[rb].iter().enumerate() {
                    for &(m, c) in alg.basis_product(b, k).iter() {
                        if let Some(&j) = cols.get(&m) {
                            out.set(i, j, c);
                        }
                    }
                }
                out
            }
            Kind::Dual(inner) => inner.act(alg.transpose_index(k)).transpose(),
            Kind::Twisted { inner, r } => {
                let q = self.field().p().pow(*r) as u8;
                let m = alg.matrix(k);
                if m.iter().any(|&x| x % q != 0) {
                    return self.zero_act(k);
                }
                let small: Vec<u8> = m.iter().map(|&x| x / q).collect();
                let k2 = inner.0.alg.index_of(&small).expect("untwisted basis element");
                (*inner.act(k2)).clone()
            }
            Kind::Sum(parts) => {
                let mut out = self.zero_act(k);
                let (mut ro, mut co) = (0, 0);
                for part in parts {
                    let a = part.act(k);
                    if a.rows() > 0 && a.cols() > 0 {
                        out.put(ro, co, &a);
                    }
                    ro += a.rows();
                    co += a.cols();
                }
                out
            }
            Kind::Subquotient { parent, reps, proj } => {
                let a = parent.act(k);
                proj[rb].mul_unchecked(&a.mul_unchecked(&reps[cb]))
            }
            Kind::Custom(c) => c.act(k),
        }
    }

    /// Parent module and, per own block, the representative columns in parent coordinates.
    pub fn subquotient_parts(&self) -> Option<(&FunctorModule, Vec<(Weight, &FpMatrix, &FpMatrix)>)> {
        match &self.0.kind {
            Kind::Subquotient {
                parent, reps, proj, ..
            } => Some((
                parent,
                self.0
                    .weights
                    .iter()
                    .cloned()
                    .zip(reps.iter().zip(proj))
                    .map(|(w, (r, p))| (w, r, p))
                    .collect(),
            )),
            _ => None,
        }
    }

    /// The smallest submodule containing `vectors` (global coordinates).
    pub fn submodule_generated(&self, vectors: &[Vec<u8>]) -> FunctorModule {
        let f = self.field();
        let alg = self.0.alg.clone();
        let mut spans: Vec<Echelon> = self.0.dims.iter().map(|&d| Echelon::new(f, d)).collect();
        let mut kept: Vec<Vec<Vec<u8>>> = vec![Vec::new(); self.num_blocks()];
        let mut queue: Vec<(usize, Vec<u8>)> = Vec::new();
        for v in vectors {
            assert_eq!(v.len(), self.dim());
            for b in 0..self.num_blocks() {
                let o = self.0.offsets[b];
                let comp = v[o..o + self.0.dims[b]].to_vec();
                if comp.iter().any(|&x| x != 0) {
                    queue.push((b, comp));
                }
            }
        }
        while let Some((b, v)) = queue.pop() {
            if spans[b].insert(&v).is_none() {
                continue;
            }
            kept[b].push(v.clone());
            let w = &self.0.weights[b];
            for &g in alg.generators() {
                if alg.colsum(g) != w {
                    continue;
                }
                let Some(tb) = self.block_index(alg.rowsum(g)) else {
                    continue;
                };
                let a = self.act(g);
                let image = a.mul_vec(&v);
                if image.iter().any(|&x| x != 0) && !spans[tb].contains(&image) {
                    queue.push((tb, image));
                }
            }
        }
        let blocks = (0..self.num_blocks())
            .map(|b| {
                let d = self.0.dims[b];
                (
                    self.0.weights[b].clone(),
                    FpMatrix::zeros(f, d, 0),
                    FpMatrix::from_columns(f, d, &kept[b]),
                )
            })
            .collect();
        FunctorModule::subquotient(self, format!("<{}>", self.0.label), blocks)
    }

    /// Checks `act(1) = id` and `act(a) act(b) = act(ab)` on the given pairs.
    pub fn check_action(&self, pairs: &[(u32, u32)]) -> Result<()> {
        let alg = &self.0.alg;
        for k in 0..alg.dim() as u32 {
            if alg.is_diagonal(k) {
                let a = self.act(k);
                if a.rows() > 0 && *a != FpMatrix::identity(self.field(), a.rows()) {
                    return Err(Error::Inconsistent(format!(
                        "{}: weight idempotent {} does not act as identity",
                        self.0.label,
                        alg.rowsum(k)
                    )));
                }
            }
        }
        for &(a, b) in pairs {
            if alg.colsum(a) != alg.rowsum(b) {
                continue;
            }
            let lhs = self.act(a).mul_unchecked(&self.act(b));
            let prod = alg.basis_product(a, b);
            let rhs = self.act_elem(&prod, alg.colsum(b), alg.rowsum(a));
            if lhs != rhs {
                return Err(Error::Inconsistent(format!(
                    "{}: action not multiplicative on ({a}, {b})",
                    self.0.label
                )));
            }
        }
        Ok(())
    }

    /// The same recipe realized over another algebra of the same degree.
    pub fn at_level(&self, alg: &Arc<SchurAlgebra>, guard: usize) -> Result<FunctorModule> {
        match self.recipe() {
            Some(e) => FunctorModule::from_expr(alg, e, guard),
            None => Err(Error::Unsupported(format!(
                "{} has no recipe to re-evaluate",
                self.0.label
            ))),
        }
    }
}

/// Dimension and weight multiplicities of `F(k^w)` for a recipe.
pub fn evaluate(expr: &Expr, p: u32, w: usize) -> (usize, BTreeMap<Weight, usize>) {
    let mut out = BTreeMap::new();
    for wt in expr.weights(p, w) {
        *out.entry(wt).or_insert(0) += 1;
    }
    (out.values().sum(), out)
}

/// Symmetrization `S^d -> G^d`, `x^alpha -> alpha! x^[alpha]`.
pub fn symmetrization(alg: &Arc<SchurAlgebra>, guard: usize) -> Result<ModuleMap> {
    let d = alg.d() as u32;
    let s = FunctorModule::from_expr(alg, &Expr::Sym(d), guard)?;
    let g = FunctorModule::from_expr(alg, &Expr::Div(d), guard)?;
    let f = alg.field();
    let blocks: Vec<(Weight, FpMatrix)> = s
        .blocks()
        .map(|(w, _)| {
            let c = w.0.iter().fold(1u8, |acc, &a| {
                (1..=a as i64).fold(acc, |acc, i| f.mul(acc, f.reduce(i)))
            });
            (w, FpMatrix::from_rows(f, &[[c as i64]]))
        })
        .collect();
    Ok(ModuleMap::from_blocks(&s, &g, blocks)?.with_label("alpha"))
}

/// Kernel of a module map as a submodule of its source.
pub fn kernel(f: &ModuleMap) -> FunctorModule {
    let src = f.source();
    let fld = src.field();
    let blocks = src
        .blocks()
        .map(|(w, d)| {
            let k = f.block(&w).kernel_basis();
            (w, FpMatrix::zeros(fld, d, 0), k)
        })
        .collect();
    FunctorModule::subquotient(src, format!("ker({})", f.label()), blocks)
}

/// Image of a module map as a submodule of its target.
pub fn image(f: &ModuleMap) -> FunctorModule {
    let tgt = f.target();
    let fld = tgt.field();
    let blocks = tgt
        .blocks()
        .map(|(w, d)| (w.clone(), FpMatrix::zeros(fld, d, 0), f.block(&w).image_basis()))
        .collect();
    FunctorModule::subquotient(tgt, format!("im({})", f.label()), blocks)
}

/// Cokernel of a module map, with the projection from the target.
pub fn cokernel(f: &ModuleMap) -> (FunctorModule, ModuleMap) {
    let tgt = f.target();
    let blocks: Vec<(Weight, FpMatrix, FpMatrix)> = tgt
        .blocks()
        .map(|(w, d)| {
            let im = f.block(&w).image_basis();
            let reps = quotient_basis(&im, d);
            (w, im, reps)
        })
        .collect();
    let q = FunctorModule::subquotient(tgt, format!("coker({})", f.label()), blocks);
    let proj = ModuleMap::projection(tgt, &q);
    (q, proj)
}

/// `ker(g) / im(f)` for composable maps with `g f = 0`.
pub fn homology_module(f: &ModuleMap, g: &ModuleMap) -> FunctorModule {
    let mid = f.target();
    let fld = mid.field();
    let blocks = mid
        .blocks()
        .map(|(w, d)| {
            let ker = g.block(&w).kernel_basis();
            let im = f.block(&w).image_basis();
            let mut e = Echelon::new(fld, d);
            for j in 0..im.cols() {
                e.insert(&im.column(j));
            }
            let reps: Vec<Vec<u8>> = (0..ker.cols())
                .map(|j| ker.column(j))
                .filter(|c| e.insert(c).is_some())
                .collect();
            (w, im, FpMatrix::from_columns(fld, d, &reps))
        })
        .collect();
    FunctorModule::subquotient(mid, format!("H({})", mid.label()), blocks)
}

#[cfg(test)]
mod tests;
