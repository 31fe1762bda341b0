//! Injective coresolutions by sums of the summands `I_mu = (xi_mu S)^*` of
//! `S^d_V`, and Ext through the closed form `Hom(F, I_mu) = (F_mu)^*`.
//!
//! A map `I_mu -> I_nu` is right multiplication by some `c` in
//! `xi_mu S xi_nu`; on Hom spaces it becomes `lambda -> lambda o act_F(c)`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use parking_lot::RwLock;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{CochainMap, Complex, VComplex};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, FpMatrix};
use crate::module::{cokernel, FunctorModule, ModuleMap};
use crate::schur::{SchurAlgebra, SparseElem, Weight};

/// How embeddings into injectives pick their summands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// Highest weights first (lexicographic); a functional is used only if
    /// the summands chosen so far do not already see it. Not minimal in general.
    Greedy,
    /// One summand per basis functional of every weight space.
    WeightBasis,
    /// Greedy closure, but weights in a seeded random order and random
    /// functionals instead of basis vectors.
    Shuffled(u64),
}

/// Shared `I_mu` modules, so their actions are computed once.
pub struct Cogenerators {
    alg: Arc<SchurAlgebra>,
    cache: RwLock<BTreeMap<Weight, FunctorModule>>,
}

impl Cogenerators {
    pub fn new(alg: &Arc<SchurAlgebra>) -> Self {
        Cogenerators {
            alg: alg.clone(),
            cache: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn algebra(&self) -> &Arc<SchurAlgebra> {
        &self.alg
    }

    pub fn get(&self, mu: &Weight) -> FunctorModule {
        if let Some(m) = self.cache.read().get(mu) {
            return m.clone();
        }
        let m = FunctorModule::coregular(&self.alg, mu);
        self.cache.write().entry(mu.clone()).or_insert(m).clone()
    }
}

/// `I_{mu_1} + ... + I_{mu_k}`.
#[derive(Clone, Debug)]
pub struct InjTerm {
    summands: Vec<Weight>,
    parts: Vec<FunctorModule>,
    module: FunctorModule,
}

impl InjTerm {
    pub fn new(cog: &Cogenerators, summands: Vec<Weight>) -> Self {
        let parts: Vec<FunctorModule> = summands.iter().map(|mu| cog.get(mu)).collect();
        let module = FunctorModule::direct_sum(&cog.alg, parts.clone());
        InjTerm {
            summands,
            parts,
            module,
        }
    }

    pub fn summands(&self) -> &[Weight] {
        &self.summands
    }

    pub fn parts(&self) -> &[FunctorModule] {
        &self.parts
    }

    pub fn module(&self) -> &FunctorModule {
        &self.module
    }

    /// `dim Hom(F, self) = sum_k dim F_{mu_k}`.
    pub fn hom_dim_from(&self, f: &FunctorModule) -> usize {
        self.summands.iter().map(|mu| f.block_dim(mu)).sum()
    }

    /// Position of the basis functional of `xi_b` (in summand `k`) inside the
    /// block of weight `colsum(b)`.
    fn position(&self, alg: &SchurAlgebra, k: usize, b: u32) -> usize {
        let w = alg.colsum(b);
        let before: usize = self.parts[..k].iter().map(|p| p.block_dim(w)).sum();
        let local = alg
            .between(&self.summands[k], w)
            .iter()
            .position(|&x| x == b)
            .expect("basis element of the summand");
        before + local
    }
}

/// Matrix of algebra elements; `entries[l][k]` is in `xi_{mu_k} S xi_{nu_l}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjMap {
    pub entries: Vec<Vec<SparseElem>>,
}

impl InjMap {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|c| c.is_empty())
    }

    /// The module map given by right multiplication.
    pub fn to_module_map(&self, alg: &SchurAlgebra, src: &InjTerm, tgt: &InjTerm) -> ModuleMap {
        let f = alg.field();
        let comps: Vec<(usize, usize, ModuleMap)> = self
            .entries
            .iter()
            .enumerate()
            .flat_map(|(l, row)| row.iter().enumerate().map(move |(k, c)| (l, k, c)))
            .filter(|(_, _, c)| !c.is_empty())
            .map(|(l, k, c)| {
                let (mu, nu) = (&src.summands[k], &tgt.summands[l]);
                let (sp, tp) = (&src.parts[k], &tgt.parts[l]);
                let blocks: Vec<(Weight, FpMatrix)> = tp
                    .blocks()
                    .filter(|(w, _)| sp.block_dim(w) > 0)
                    .map(|(w, _)| {
                        let rows = alg.between(nu, &w);
                        let cols = alg.between(mu, &w);
                        let mut m = FpMatrix::zeros(f, rows.len(), cols.len());
                        for (i, &b) in rows.iter().enumerate() {
                            for &(mp, cm) in c {
                                for &(x, v) in alg.basis_product(mp, b).iter() {
                                    if let Ok(j) = cols.binary_search(&x) {
                                        m.add_at(i, j, f.mul(cm, v));
                                    }
                                }
                            }
                        }
                        (w, m)
                    })
                    .collect();
                (l, k, ModuleMap::from_blocks(sp, tp, blocks).expect("shapes"))
            })
            .collect();
        let entries: Vec<(usize, usize, &ModuleMap)> =
            comps.iter().map(|(l, k, m)| (*l, *k, m)).collect();
        ModuleMap::assemble(&src.module, &src.parts, &tgt.module, &tgt.parts, &entries)
    }

    /// Recovers the algebra elements of an equivariant map and checks them.
    pub fn extract(alg: &SchurAlgebra, src: &InjTerm, tgt: &InjTerm, psi: &ModuleMap) -> Result<InjMap> {
        let entries = (0..tgt.summands.len())
            .map(|l| {
                let nu = &tgt.summands[l];
                let e = alg.idempotent(nu).expect("weight of the algebra");
                let row = tgt.position(alg, l, e);
                let block = psi.block(nu);
                (0..src.summands.len())
                    .map(|k| {
                        alg.between(&src.summands[k], nu)
                            .into_iter()
                            .filter_map(|mp| {
                                let v = block.get(row, src.position(alg, k, mp));
                                (v != 0).then_some((mp, v))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let out = InjMap { entries };
        let back = out.to_module_map(alg, src, tgt);
        if !back.add(&psi.neg()).is_zero() {
            return Err(Error::Inconsistent(
                "map between injectives is not right multiplication".into(),
            ));
        }
        Ok(out)
    }
}

/// Embedding of `m` into a sum of `I_mu`. With `restrict`, only summands with
/// weights in the set are produced; the map is then injective on every
/// weight space in the set but not necessarily elsewhere.
pub fn injective_hull(
    m: &FunctorModule,
    cog: &Cogenerators,
    strategy: Strategy,
    restrict: Option<&BTreeSet<Weight>>,
) -> (InjTerm, ModuleMap) {
    let alg = m.algebra().clone();
    let f = m.field();
    let mut spans: BTreeMap<Weight, Echelon> =
        m.blocks().map(|(w, d)| (w, Echelon::new(f, d))).collect();
    let mut chosen: Vec<(Weight, Vec<u8>)> = Vec::new();
    let mut order: Vec<Weight> = m.weights().iter().rev().cloned().collect();
    let mut rng = match strategy {
        Strategy::Shuffled(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ m.dim() as u64);
            order.shuffle(&mut rng);
            Some(rng)
        }
        _ => None,
    };
    for mu in &order {
        if restrict.is_some_and(|r| !r.contains(mu)) {
            continue;
        }
        let dm = m.block_dim(mu);
        let mut i = 0;
        while spans[mu].rank() < dm {
            let e = match rng.as_mut() {
                Some(rng) => (0..dm).map(|_| rng.gen_range(0..f.p()) as u8).collect(),
                None => {
                    let mut e = vec![0u8; dm];
                    e[i] = 1;
                    i += 1;
                    e
                }
            };
            if spans[mu].contains(&e) {
                continue;
            }
            chosen.push((mu.clone(), e.clone()));
            match strategy {
                Strategy::WeightBasis => {
                    spans.get_mut(mu).unwrap().insert(&e);
                }
                _ => close_functionals(m, &alg, &mut spans, mu.clone(), e),
            }
        }
    }
    let term = InjTerm::new(cog, chosen.iter().map(|(w, _)| w.clone()).collect());
    let blocks: Vec<(Weight, FpMatrix)> = m
        .blocks()
        .map(|(w, d)| {
            let mut rows: Vec<Vec<u8>> = Vec::new();
            for (mu, lambda) in &chosen {
                for b in alg.between(mu, &w) {
                    rows.push(m.act(b).vec_mul(lambda));
                }
            }
            (w, FpMatrix::from_row_vectors(f, d, &rows))
        })
        .collect();
    let iota = ModuleMap::from_blocks(m, &term.module, blocks).expect("hull shapes");
    (term, iota.with_label("hull"))
}

/// Adds the right submodule generated by `lambda` at weight `mu` to `spans`.
fn close_functionals(
    m: &FunctorModule,
    alg: &SchurAlgebra,
    spans: &mut BTreeMap<Weight, Echelon>,
    mu: Weight,
    lambda: Vec<u8>,
) {
    let mut queue = vec![(mu, lambda)];
    while let Some((w, phi)) = queue.pop() {
        if spans.get_mut(&w).unwrap().insert(&phi).is_none() {
            continue;
        }
        for &g in alg.generators() {
            if alg.is_diagonal(g) || alg.rowsum(g) != &w {
                continue;
            }
            let src = alg.colsum(g);
            let Some(span) = spans.get(src) else { continue };
            if span.rank() == m.block_dim(src) {
                continue;
            }
            let next = m.act(g).vec_mul(&phi);
            if next.iter().any(|&x| x != 0) && !span.contains(&next) {
                queue.push((src.clone(), next));
            }
        }
    }
}

/// A complex of injectives with its differentials as algebra elements.
#[derive(Clone, Debug)]
pub struct InjComplex {
    alg: Arc<SchurAlgebra>,
    start: i32,
    terms: Vec<InjTerm>,
    diffs: Vec<InjMap>,
    complex: Complex,
}

impl InjComplex {
    /// Extracts algebra elements from a complex whose terms are the given sums.
    pub fn from_complex(complex: Complex, terms: Vec<InjTerm>) -> Result<Self> {
        let alg = complex.algebra().clone();
        let start = complex.start();
        if terms.len() != (complex.end() - start + 1) as usize {
            return Err(Error::DimensionMismatch("injective terms".into()));
        }
        let diffs = (0..terms.len().saturating_sub(1))
            .map(|k| {
                let d = complex.diff(start + k as i32);
                InjMap::extract(&alg, &terms[k], &terms[k + 1], &d)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(InjComplex {
            alg,
            start,
            terms,
            diffs,
            complex,
        })
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn end(&self) -> i32 {
        self.start + self.terms.len() as i32 - 1
    }

    pub fn term(&self, i: i32) -> Option<&InjTerm> {
        (i >= self.start && i <= self.end()).then(|| &self.terms[(i - self.start) as usize])
    }

    pub fn diff(&self, i: i32) -> Option<&InjMap> {
        if i < self.start {
            return None;
        }
        self.diffs.get((i - self.start) as usize)
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn algebra(&self) -> &Arc<SchurAlgebra> {
        &self.alg
    }

    /// Summand weights per degree.
    pub fn summary(&self) -> Vec<(i32, Vec<Weight>)> {
        (self.start..=self.end())
            .map(|i| (i, self.term(i).unwrap().summands.clone()))
            .collect()
    }

    /// `Hom(F, J)` through the closed form.
    pub fn hom_from(&self, f: &FunctorModule) -> VComplex {
        let fld = self.alg.field();
        let dims: Vec<usize> = self.terms.iter().map(|t| t.hom_dim_from(f)).collect();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, d)| hom_block(f, &self.terms[k], &self.terms[k + 1], d, fld))
            .collect();
        VComplex::new(fld, self.start, dims, diffs).expect("Hom of a complex is a complex")
    }
}

/// Matrix of `Hom(F, src) -> Hom(F, tgt)` in the coordinates `(+ F_mu^*)`.
pub(crate) fn hom_block(
    f: &FunctorModule,
    src: &InjTerm,
    tgt: &InjTerm,
    d: &InjMap,
    fld: crate::Field,
) -> FpMatrix {
    let offs = |t: &InjTerm| {
        let mut acc = 0;
        t.summands
            .iter()
            .map(|mu| {
                let o = acc;
                acc += f.block_dim(mu);
                o
            })
            .collect::<Vec<_>>()
    };
    let (so, to) = (offs(src), offs(tgt));
    let mut m = FpMatrix::zeros(fld, tgt.hom_dim_from(f), src.hom_dim_from(f));
    for (l, row) in d.entries.iter().enumerate() {
        for (k, c) in row.iter().enumerate() {
            let (mu, nu) = (&src.summands[k], &tgt.summands[l]);
            if c.is_empty() || f.block_dim(mu) == 0 || f.block_dim(nu) == 0 {
                continue;
            }
            let a = f.act_elem(c, nu, mu).transpose();
            m.put(to[l], so[k], &a);
        }
    }
    m
}

/// The map `F -> (+ I_mu)` whose closed-form coordinates are `coords`
/// (one functional on `F_{mu_k}` per summand).
pub fn closed_form_to_map(f: &FunctorModule, term: &InjTerm, coords: &[u8]) -> ModuleMap {
    let alg = f.algebra().clone();
    let fld = f.field();
    assert_eq!(coords.len(), term.hom_dim_from(f));
    let mut lambdas = Vec::new();
    let mut o = 0;
    for mu in &term.summands {
        let d = f.block_dim(mu);
        lambdas.push(&coords[o..o + d]);
        o += d;
    }
    let blocks: Vec<(Weight, FpMatrix)> = f
        .blocks()
        .map(|(w, d)| {
            let mut rows: Vec<Vec<u8>> = Vec::new();
            for (mu, lambda) in term.summands.iter().zip(&lambdas) {
                for b in alg.between(mu, &w) {
                    if lambda.is_empty() {
                        rows.push(vec![0; d]);
                    } else {
                        rows.push(f.act(b).vec_mul(lambda));
                    }
                }
            }
            (w, FpMatrix::from_row_vectors(fld, d, &rows))
        })
        .collect();
    ModuleMap::from_blocks(f, &term.module, blocks).expect("closed form shapes")
}

/// Closed-form coordinates of an equivariant map `F -> (+ I_mu)`.
pub fn map_to_closed_form(psi: &ModuleMap, term: &InjTerm) -> Vec<u8> {
    let f = psi.source();
    let alg = f.algebra();
    let mut out = Vec::with_capacity(term.hom_dim_from(f));
    for (k, mu) in term.summands.iter().enumerate() {
        if f.block_dim(mu) == 0 {
            continue;
        }
        let e = alg.idempotent(mu).expect("weight of the algebra");
        let row = term.position(alg, k, e);
        out.extend_from_slice(psi.block(mu).row(row));
    }
    out
}

/// An injective coresolution `C -> J` of a bounded complex.
#[derive(Clone, Debug)]
pub struct Coresolution {
    pub source: Complex,
    pub injectives: InjComplex,
    pub augmentation: CochainMap,
    /// Last degree of `J`; the term there may be partial when a weight
    /// restriction was requested.
    pub top: i32,
    pub partial_top: bool,
    /// The construction terminated: `J` is a full coresolution.
    pub complete: bool,
}

impl Coresolution {
    /// Cohomology of `Hom(F, J)` in degrees `< top`.
    pub fn hom_cohomology(&self, f: &FunctorModule) -> BTreeMap<i32, usize> {
        let h = self.injectives.hom_from(f);
        (h.start()..self.top).map(|i| (i, h.homology_dim(i))).collect()
    }
}

/// Options for [`coresolve_complex`].
#[derive(Clone, Copy, Debug)]
pub struct CoresolveOptions {
    pub strategy: Strategy,
    /// Add a contractible injective complex when needed so the augmentation
    /// is injective in every degree.
    pub injective_augmentation: bool,
}

impl Default for CoresolveOptions {
    fn default() -> Self {
        CoresolveOptions {
            strategy: Strategy::Greedy,
            injective_augmentation: true,
        }
    }
}

/// Coresolution of a single module through degree `top`.
pub fn coresolve(m: &FunctorModule, top: i32, strategy: Strategy) -> Result<Coresolution> {
    let cog = Cogenerators::new(m.algebra());
    let opts = CoresolveOptions {
        strategy,
        injective_augmentation: true,
    };
    coresolve_complex(&Complex::single(m, 0), top, opts, &cog, None)
}

/// Builds `J^n` inductively: `J^n` is a hull of the pushout of
/// `coker(J^{n-2} -> J^{n-1}) <- C^{n-1} -> C^n`. The result is quasi-isomorphic
/// to `C` and exact enough to compute `Hom(F, -)` cohomology below `top`.
/// With `restrict`, the last term only has summands with weights in the set.
pub fn coresolve_complex(
    c: &Complex,
    top: i32,
    opts: CoresolveOptions,
    cog: &Cogenerators,
    restrict: Option<&BTreeSet<Weight>>,
) -> Result<Coresolution> {
    let alg = c.algebra().clone();
    let c = c.trimmed();
    let a = c.start();
    let mut terms: Vec<InjTerm> = Vec::new();
    let mut diffs: Vec<ModuleMap> = Vec::new();
    let mut aug: Vec<ModuleMap> = Vec::new();
    let mut partial = false;
    for n in a..=top.max(a) {
        let (p, from_j, from_c) = if n == a {
            let cn = c.term(n);
            (cn.clone(), None, ModuleMap::identity(&cn))
        } else {
            let jprev = &terms[terms.len() - 1].module;
            let (q, pi) = match diffs.last() {
                Some(d) => cokernel(d),
                None => (jprev.clone(), ModuleMap::identity(jprev)),
            };
            let cn = c.term(n);
            let cprev = c.term(n - 1);
            let parts = vec![q.clone(), cn.clone()];
            let s = FunctorModule::direct_sum(&alg, parts.clone());
            let pf = pi.compose(aug.last().unwrap());
            let nd = c.diff(n - 1).neg();
            let rel = ModuleMap::assemble(&cprev, std::slice::from_ref(&cprev), &s, &parts, &[(0, 0, &pf), (1, 0, &nd)]);
            let (p, proj) = cokernel(&rel);
            let inc_q = ModuleMap::assemble(&q, std::slice::from_ref(&q), &s, &parts, &[(0, 0, &ModuleMap::identity(&q))]);
            let inc_c = ModuleMap::assemble(&cn, std::slice::from_ref(&cn), &s, &parts, &[(1, 0, &ModuleMap::identity(&cn))]);
            let fj = proj.compose(&inc_q).compose(&pi);
            let fc = proj.compose(&inc_c);
            (p, Some(fj), fc)
        };
        let last = n == top;
        let r = if last { restrict } else { None };
        partial |= r.is_some();
        let (term, iota) = injective_hull(&p, cog, opts.strategy, r);
        if let Some(fj) = from_j {
            diffs.push(iota.compose(&fj));
        }
        aug.push(iota.compose(&from_c));
        terms.push(term);
        if p.is_zero() && n >= c.end() {
            partial = false;
            break;
        }
    }
    let mut top_deg = a + terms.len() as i32 - 1;
    let exhausted = terms.last().is_some_and(|t| t.summands.is_empty());
    if exhausted {
        top_deg = top.max(top_deg);
    }
    let mut jc = Complex::new(&alg, a, terms.iter().map(|t| t.module.clone()).collect(), diffs)?;
    let mut aug_maps: BTreeMap<i32, ModuleMap> =
        aug.into_iter().enumerate().map(|(k, m)| (a + k as i32, m)).collect();
    let needs_k = opts.injective_augmentation
        && c.degrees().any(|i| aug_maps.get(&i).map_or(0, |m| m.rank()) != c.term(i).dim());
    if needs_k {
        let (terms2, jc2, aug2) = add_contractible(&c, cog, opts.strategy, &terms, &jc, &aug_maps)?;
        terms = terms2;
        jc = jc2;
        aug_maps = aug2;
    }
    let augmentation = CochainMap::new(&c, &jc, aug_maps)?;
    let injectives = InjComplex::from_complex(jc, terms)?;
    Ok(Coresolution {
        source: c,
        injectives,
        augmentation,
        top: top_deg,
        partial_top: partial,
        complete: exhausted,
    })
}

/// `J + K` where `K^j = I(C^j) + I(C^{j+1})` with `d(x, y) = (y, 0)`, and
/// the augmentation gains the component `c -> (iota c, iota d c)`.
#[allow(clippy::type_complexity)]
fn add_contractible(
    c: &Complex,
    cog: &Cogenerators,
    strategy: Strategy,
    jterms: &[InjTerm],
    jc: &Complex,
    aug: &BTreeMap<i32, ModuleMap>,
) -> Result<(Vec<InjTerm>, Complex, BTreeMap<i32, ModuleMap>)> {
    let alg = c.algebra().clone();
    let hulls: BTreeMap<i32, (InjTerm, ModuleMap)> = c
        .degrees()
        .map(|j| (j, injective_hull(&c.term(j), cog, strategy, None)))
        .collect();
    let empty = InjTerm::new(cog, Vec::new());
    let hull = |j: i32| hulls.get(&j).map(|h| &h.0).unwrap_or(&empty);
    let lo = (c.start() - 1).min(jc.start());
    let hi = jc.end().max(c.end());
    let jterm = |i: i32| {
        if i >= jc.start() && i <= jc.end() { jterms[(i - jc.start()) as usize].clone() } else { empty.clone() }
    };
    let mut terms = Vec::new();
    for i in lo..=hi {
        let (jt, k0, k1) = (jterm(i), hull(i), hull(i + 1));
        let summands = [jt.summands.clone(), k0.summands.clone(), k1.summands.clone()].concat();
        terms.push(InjTerm::new(cog, summands));
    }
    let parts_of = |i: i32| {
        vec![
            jterm(i).module.clone(),
            hull(i).module.clone(),
            hull(i + 1).module.clone(),
        ]
    };
    let mut diffs = Vec::new();
    for i in lo..hi {
        let k = (i - lo) as usize;
        let dj = jc.diff(i);
        let dj = ModuleMap::from_blocks(&jterm(i).module, &jterm(i + 1).module, dj.nonzero_blocks().map(|(w, b)| (w.clone(), b.clone())).collect::<Vec<_>>())?;
        let id = ModuleMap::identity(&hull(i + 1).module);
        diffs.push(ModuleMap::assemble(
            &terms[k].module,
            &parts_of(i),
            &terms[k + 1].module,
            &parts_of(i + 1),
            &[(0, 0, &dj), (1, 2, &id)],
        ));
    }
    let complex = Complex::new(&alg, lo, terms.iter().map(|t| t.module.clone()).collect(), diffs)?;
    let mut maps = BTreeMap::new();
    for i in c.degrees() {
        let k = (i - lo) as usize;
        let ci = c.term(i);
        let phi = aug.get(&i).cloned().unwrap_or_else(|| ModuleMap::zero(&ci, &jterm(i).module));
        let phi = ModuleMap::from_blocks(&ci, &jterm(i).module, phi.nonzero_blocks().map(|(w, b)| (w.clone(), b.clone())).collect::<Vec<_>>())?;
        let i0 = hulls[&i].1.clone();
        let i1 = match hulls.get(&(i + 1)) {
            Some((_, iota)) => iota.compose(&c.diff(i)),
            None => ModuleMap::zero(&ci, &empty.module),
        };
        maps.insert(
            i,
            ModuleMap::assemble(
                &ci,
                std::slice::from_ref(&ci),
                &terms[k].module,
                &parts_of(i),
                &[(0, 0, &phi), (1, 0, &i0), (2, 0, &i1)],
            ),
        );
    }
    Ok((terms, complex, maps))
}

/// `Ext^i(F, G)` for `0 <= i <= imax`.
pub fn ext_dims(f: &FunctorModule, g: &FunctorModule, imax: usize, strategy: Strategy) -> Result<Vec<usize>> {
    if !f.same_algebra(g.algebra()) {
        return Err(Error::DegreeMismatch("Ext between different algebras".into()));
    }
    let cog = Cogenerators::new(g.algebra());
    let weights: BTreeSet<Weight> = f.weights().iter().cloned().collect();
    let opts = CoresolveOptions {
        strategy,
        injective_augmentation: true,
    };
    let top = imax as i32 + 1;
    let res = coresolve_complex(&Complex::single(g, 0), top, opts, &cog, Some(&weights))?;
    let h = res.injectives.hom_from(f);
    Ok((0..=imax as i32).map(|i| h.homology_dim(i)).collect())
}

/// Serializable Ext table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtTable {
    pub p: u32,
    pub n: usize,
    pub d: usize,
    #[serde(rename = "F")]
    pub f: String,
    #[serde(rename = "G")]
    pub g: String,
    pub i_max: usize,
    pub dims: Vec<usize>,
}

pub fn ext_table(f: &FunctorModule, g: &FunctorModule, imax: usize) -> Result<ExtTable> {
    let alg = f.algebra();
    Ok(ExtTable {
        p: alg.field().p(),
        n: alg.n(),
        d: alg.d(),
        f: f.label().to_string(),
        g: g.label().to_string(),
        i_max: imax,
        dims: ext_dims(f, g, imax, Strategy::Greedy)?,
    })
}

#[cfg(test)]
mod tests;
