//! Characteristic-two standard coresolutions, the weight-space formality
//! check at `p = 2, r = 1`, the adjoint of precomposition by a twist, and
//! formality certificates.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{cochain_map_space, CochainMap, Complex, VComplex};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::field::Field;
use crate::injective::{coresolve_complex, hom_block, Cogenerators, CoresolveOptions, InjComplex};
use crate::linalg::FpMatrix;
use crate::module::{cokernel, hom_dim, kernel, CustomAction, FunctorModule, ModuleMap};
use crate::schur::{exponent_vectors, SchurAlgebra, Weight};

/// Exponents of `x_1..x_w, y_1..y_w`.
type Monomial = Vec<u8>;

fn odd_prime_error() -> Error {
    Error::Unsupported(
        "standard coresolutions are only implemented in characteristic 2; odd primes need Troesch complexes".into(),
    )
}

/// `D = sum_k y_k d/dx_k` on one monomial, over `F_2`.
fn derive_monomial(m: &[u8], w: usize) -> Vec<Monomial> {
    (0..w)
        .filter(|&k| m[k] % 2 == 1)
        .map(|k| {
            let mut t = m.to_vec();
            t[k] -= 1;
            t[w + k] += 1;
            t
        })
        .collect()
}

/// A polynomial in `k[x_1..x_w, y_1..y_w]` over `F_2`, as its set of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly2 {
    pub w: usize,
    pub terms: BTreeSet<Monomial>,
}

impl Poly2 {
    pub fn zero(w: usize) -> Self {
        Poly2 {
            w,
            terms: BTreeSet::new(),
        }
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for m in &other.terms {
            out.toggle(m.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero(self.w);
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        out
    }

    /// The differential `y d/dx`.
    pub fn derive(&self) -> Poly2 {
        let mut out = Poly2::zero(self.w);
        for m in &self.terms {
            for t in derive_monomial(m, self.w) {
                out.toggle(t);
            }
        }
        out
    }

    pub fn random(rng: &mut ChaCha8Rng, w: usize, max_deg: u8, terms: usize) -> Poly2 {
        let mut p = Poly2::zero(w);
        for _ in 0..terms {
            p.toggle((0..2 * w).map(|_| rng.gen_range(0..=max_deg)).collect());
        }
        p
    }
}

/// Checks `D(fg) = D(f) g + f D(g)` on random products.
pub fn check_leibniz(w: usize, samples: usize, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..samples {
        let f = Poly2::random(&mut rng, w, 3, 4);
        let g = Poly2::random(&mut rng, w, 3, 4);
        let lhs = f.mul(&g).derive();
        let rhs = f.derive().mul(&g).add(&f.mul(&g.derive()));
        if lhs != rhs {
            return Err(Error::Inconsistent(format!("Leibniz rule fails on sample {s}")));
        }
    }
    Ok(())
}

/// `S^{2d} W -> S^{2d-1} W (x) S^1 W -> ... -> S^{2d} W` with differential
/// `y d/dx`, in degrees `0..=2d`. The `i`-th term is spanned by
/// `x^a y^b` with `|a| = 2d - i`, `|b| = i`.
#[derive(Clone, Debug)]
pub struct StandardCoresolution {
    pub d: usize,
    pub w: usize,
    pub complex: VComplex,
    bases: Vec<Vec<Monomial>>,
}

impl StandardCoresolution {
    pub fn new(p: u32, d: usize, w: usize) -> Result<Self> {
        if p != 2 {
            return Err(odd_prime_error());
        }
        let field = Field::new(2)?;
        let bases: Vec<Vec<Monomial>> = (0..=2 * d)
            .map(|i| {
                let mut out = Vec::new();
                for a in exponent_vectors(w, 2 * d - i) {
                    for b in exponent_vectors(w, i) {
                        out.push(a.iter().chain(&b).copied().collect());
                    }
                }
                out
            })
            .collect();
        let index: Vec<HashMap<&Monomial, usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(k, m)| (m, k)).collect())
            .collect();
        let diffs = (0..2 * d)
            .map(|i| {
                let mut m = FpMatrix::zeros(field, bases[i + 1].len(), bases[i].len());
                for (c, mono) in bases[i].iter().enumerate() {
                    for t in derive_monomial(mono, w) {
                        m.add_at(index[i + 1][&t], c, 1);
                    }
                }
                m
            })
            .collect();
        let dims = bases.iter().map(|b| b.len()).collect();
        Ok(StandardCoresolution {
            d,
            w,
            complex: VComplex::new(field, 0, dims, diffs)?,
            bases,
        })
    }

    /// Torus weight `a + b` of `x^a y^b`.
    fn weight(&self, m: &Monomial) -> Weight {
        Weight((0..self.w).map(|k| (m[k] + m[self.w + k]) as u32).collect())
    }

    /// Homology in degree `i`, split by torus weight.
    pub fn homology_by_weight(&self, i: usize) -> BTreeMap<Weight, usize> {
        let top = 2 * self.d;
        let coords = |deg: usize, wt: &Weight| -> Vec<usize> {
            self.bases[deg]
                .iter()
                .enumerate()
                .filter(|(_, m)| &self.weight(m) == wt)
                .map(|(k, _)| k)
                .collect()
        };
        let weights: BTreeSet<Weight> = self.bases[i].iter().map(|m| self.weight(m)).collect();
        let mut out = BTreeMap::new();
        for wt in weights {
            let here = coords(i, &wt);
            let out_rank = if i < top {
                self.complex.diff(i as i32).submatrix(&coords(i + 1, &wt), &here).rank()
            } else {
                0
            };
            let in_rank = if i > 0 {
                self.complex.diff(i as i32 - 1).submatrix(&here, &coords(i - 1, &wt)).rank()
            } else {
                0
            };
            let h = here.len() - out_rank - in_rank;
            if h > 0 {
                out.insert(wt, h);
            }
        }
        out
    }

    /// Doubled weights of `S^d(k^w)`, each with multiplicity one.
    pub fn expected_degree_zero(&self) -> BTreeMap<Weight, usize> {
        exponent_vectors(self.w, self.d)
            .into_iter()
            .map(|a| (Weight(a.iter().map(|&x| 2 * x as u32).collect()), 1))
            .collect()
    }

    /// Exactness in positive degrees and the twisted symmetric power in degree zero.
    pub fn check(&self) -> Result<()> {
        for i in 1..=2 * self.d {
            let h = self.complex.homology_dim(i as i32);
            if h != 0 {
                return Err(Error::Inconsistent(format!("homology {h} in degree {i}")));
            }
        }
        let h0 = self.homology_by_weight(0);
        if h0 != self.expected_degree_zero() {
            return Err(Error::Inconsistent(format!("degree-zero homology {h0:?}")));
        }
        Ok(())
    }
}

/// The differential on `S^1(k^2 (x) W) = W + W`.
pub fn linear_part(w: usize) -> FpMatrix {
    let f = Field::new(2).unwrap();
    let mut m = FpMatrix::zeros(f, 2 * w, 2 * w);
    for c in 0..2 * w {
        let mut mono = vec![0u8; 2 * w];
        mono[c] = 1;
        for t in derive_monomial(&mono, w) {
            let r = t.iter().position(|&e| e == 1).unwrap();
            m.add_at(r, c, 1);
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightCount {
    pub weight: Vec<u32>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub i: usize,
    pub dim: usize,
    pub weights: Vec<WeightCount>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    EvenConcentration,
    Mismatch,
}

/// Degreewise comparison of `Hom(G^(1)#, R_V^{2d,*})` with the weight spaces of
/// `G^(1)(k^2 (x) V)` and with `G_{E_1} o I^(1)`, at `V = k^n`.
#[derive(Clone, Debug, Serialize)]
pub struct FormalityReport {
    #[serde(rename = "G")]
    pub g: String,
    pub d: usize,
    pub p: u32,
    pub n: usize,
    pub degrees: Vec<DegreeReport>,
    pub weight_spaces: Vec<DegreeReport>,
    pub graded_target: Vec<DegreeReport>,
    pub odd_degrees_vanish: bool,
    pub weights_match: bool,
    pub totals_match: bool,
    pub verdict: Verdict,
    pub certificate: Option<FormalityCertificate>,
}

fn degree_reports(top: usize, by_degree: BTreeMap<usize, BTreeMap<Weight, usize>>) -> Vec<DegreeReport> {
    (0..=top)
        .map(|i| {
            let ws = by_degree.get(&i).cloned().unwrap_or_default();
            DegreeReport {
                i,
                dim: ws.values().sum(),
                weights: ws
                    .into_iter()
                    .filter(|&(_, d)| d > 0)
                    .map(|(w, dim)| WeightCount { weight: w.0, dim })
                    .collect(),
            }
        })
        .collect()
}

/// The weight of `S(n, 2d)` carrying the nonzero parts of `(a, b)`.
fn packed_weight(a: &[u8], b: &[u8], n: usize) -> Weight {
    let mut parts: Vec<u32> = a.iter().chain(b).filter(|&&x| x > 0).map(|&x| x as u32).collect();
    parts.sort_unstable_by(|x, y| y.cmp(x));
    parts.resize(n, 0);
    Weight(parts)
}

pub fn formality_verify_p2r1(g: &Expr, d: usize, n: usize, guard: usize) -> Result<FormalityReport> {
    let p = 2;
    if n < 2 * d {
        return Err(Error::InvalidInput(format!("need n >= 2d, got n = {n}, d = {d}")));
    }
    let field = Field::new(p)?;
    let small = Arc::new(SchurAlgebra::new(field, n, d)?);
    let big = Arc::new(SchurAlgebra::new(field, n, 2 * d)?);
    let gm = FunctorModule::from_expr(&small, g, guard)?;
    let f = gm.twisted(&big, 1)?.dual();

    // Hom(F, S^{2d-i}_V (x) S^i_V) splits over the summands I_(a,b)
    let mut memo: HashMap<Weight, usize> = HashMap::new();
    let mut computed: BTreeMap<usize, BTreeMap<Weight, usize>> = BTreeMap::new();
    for i in 0..=2 * d {
        let slot = computed.entry(i).or_default();
        for a in exponent_vectors(n, 2 * d - i) {
            for b in exponent_vectors(n, i) {
                let mu = packed_weight(&a, &b, n);
                let dim = *memo
                    .entry(mu.clone())
                    .or_insert_with(|| hom_dim(&f, &FunctorModule::coregular(&big, &mu)));
                if dim > 0 {
                    let vw = Weight(a.iter().zip(&b).map(|(x, y)| (x + y) as u32).collect());
                    *slot.entry(vw).or_default() += dim;
                }
            }
        }
    }

    // weight spaces of G^(1)(k^2 (x) k^n) and of G(k^2 (x) k^n), split in halves
    let split = |e: &Expr, scale: u32| {
        let mut out: BTreeMap<usize, BTreeMap<Weight, usize>> = BTreeMap::new();
        for wt in e.weights(p, 2 * n) {
            let (x, y) = wt.0.split_at(n);
            let deg = y.iter().sum::<u32>() * scale;
            let vw = Weight(x.iter().zip(y).map(|(a, b)| (a + b) * scale).collect());
            *out.entry(deg as usize).or_default().entry(vw).or_default() += 1;
        }
        out
    };
    let weight_spaces = split(&Expr::twist(g.clone(), 1), 1);
    let graded_target = split(g, 2);

    let degrees = degree_reports(2 * d, computed);
    let weight_spaces = degree_reports(2 * d, weight_spaces);
    let graded_target = degree_reports(2 * d, graded_target);
    let odd_degrees_vanish = degrees.iter().all(|r| r.i % 2 == 0 || r.dim == 0);
    let weights_match = degrees == weight_spaces;
    let totals_match = degrees
        .iter()
        .zip(&graded_target)
        .all(|(a, b)| a.dim == b.dim);
    let ok = odd_degrees_vanish && weights_match && totals_match;
    let certificate = ok.then(|| FormalityCertificate::EvenConcentration {
        degrees: degrees.iter().filter(|r| r.dim > 0).map(|r| r.i as i32).collect(),
    });
    Ok(FormalityReport {
        g: g.to_string(),
        d,
        p,
        n,
        degrees,
        weight_spaces,
        graded_target,
        odd_degrees_vanish,
        weights_match,
        totals_match,
        verdict: if ok { Verdict::EvenConcentration } else { Verdict::Mismatch },
        certificate,
    })
}

/// Action of `S(n, d)` on `V -> Hom(G^{dV} o I^(r), J)`, in closed-form coordinates.
struct AdjointAction {
    alg: Arc<SchurAlgebra>,
    q: u32,
    summands: Vec<Weight>,
}

impl AdjointAction {
    fn inner(&self, mu: &Weight) -> Option<Weight> {
        let m = mu.divided(self.q)?;
        (m.0.iter().sum::<u32>() as usize == self.alg.d()).then_some(m)
    }
}

impl CustomAction for AdjointAction {
    fn act(&self, k: u32) -> FpMatrix {
        let alg = &self.alg;
        let (c, r) = (alg.colsum(k), alg.rowsum(k));
        let mut blocks = Vec::new();
        for mu in &self.summands {
            let Some(m) = self.inner(mu) else { continue };
            // precomposition with x -> x xi_k from P_r to P_c
            let rows = alg.between(&m, r);
            let cols = alg.between(&m, c);
            let mut b = FpMatrix::zeros(alg.field(), rows.len(), cols.len());
            for (i, &x) in rows.iter().enumerate() {
                for &(t, v) in alg.basis_product(x, k).iter() {
                    let j = cols.binary_search(&t).expect("right multiple stays in the block");
                    b.add_at(i, j, v);
                }
            }
            blocks.push(b);
        }
        let (nr, nc) = blocks.iter().fold((0, 0), |(a, b), m| (a + m.rows(), b + m.cols()));
        let mut out = FpMatrix::zeros(alg.field(), nr, nc);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            out.put(ro, co, &b);
            ro += b.rows();
            co += b.cols();
        }
        out
    }
}

/// `K(J)(V) = Hom(G^{dV} o I^(r), J)` at `V = k^n`, a complex over `small = S(n, d)`.
pub fn twist_adjoint(small: &Arc<SchurAlgebra>, j: &InjComplex, r: u32) -> Result<Complex> {
    let big = j.algebra();
    let q = small.field().p().pow(r);
    if big.n() != small.n() || big.d() != small.d() * q as usize || big.field() != small.field() {
        return Err(Error::DegreeMismatch(format!(
            "J lives over S({}, {}), expected S({}, {})",
            big.n(),
            big.d(),
            small.n(),
            small.d() * q as usize
        )));
    }
    let fld = small.field();
    let proj: BTreeMap<Weight, FunctorModule> = small
        .weights()
        .into_iter()
        .map(|l| {
            let p = if r == 0 {
                Ok(FunctorModule::projective(big, &l))
            } else {
                FunctorModule::projective(small, &l).twisted(big, r)
            };
            p.map(|p| (l, p))
        })
        .collect::<Result<_>>()?;
    let mut terms = Vec::new();
    for i in j.start()..=j.end() {
        let t = j.term(i).unwrap();
        let blocks = proj
            .iter()
            .map(|(l, p)| (l.clone(), t.hom_dim_from(p)))
            .filter(|&(_, dim)| dim > 0)
            .collect();
        let action = AdjointAction {
            alg: small.clone(),
            q,
            summands: t.summands().to_vec(),
        };
        terms.push(FunctorModule::custom(small, format!("K(J^{i})"), blocks, Arc::new(action)));
    }
    let mut diffs = Vec::new();
    for i in j.start()..j.end() {
        let k = (i - j.start()) as usize;
        let (t0, t1, dj) = (j.term(i).unwrap(), j.term(i + 1).unwrap(), j.diff(i).unwrap());
        let blocks: Vec<(Weight, FpMatrix)> = proj
            .iter()
            .map(|(l, p)| (l.clone(), hom_block(p, t0, t1, dj, fld)))
            .collect();
        diffs.push(ModuleMap::from_blocks(&terms[k], &terms[k + 1], blocks)?);
    }
    Complex::new(small, j.start(), terms, diffs)
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitStep {
    /// Lowest homology degree split off at this stage.
    pub degree: i32,
    pub homology_dim: usize,
    /// Extension of the augmentation `tau C -> J` to `C -> J`.
    #[serde(skip)]
    pub extension: CochainMap,
    /// The quasi-isomorphism `C -> J + C / tau C`.
    #[serde(skip)]
    pub splitting: CochainMap,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
pub enum FormalityCertificate {
    /// All nonzero terms sit in even degrees, so every differential vanishes.
    EvenConcentration { degrees: Vec<i32> },
    ZeroDifferential { degrees: Vec<i32> },
    /// `C <- tau C -> H^m[-m]`.
    SingleHomologyDegree {
        degree: i32,
        #[serde(skip)]
        zigzag: Box<(CochainMap, CochainMap)>,
    },
    UntwistSplitting {
        steps: Vec<SplitStep>,
        #[serde(skip_serializing_if = "Option::is_none")]
        last: Option<Box<FormalityCertificate>>,
    },
}

impl FormalityCertificate {
    /// Re-verifies the witness against `c` (the complex the certificate was issued for).
    pub fn recheck(&self, c: &Complex) -> Result<()> {
        let nonzero: Vec<i32> = c.degrees().filter(|&i| !c.term(i).is_zero()).collect();
        match self {
            FormalityCertificate::EvenConcentration { degrees } => {
                if nonzero.iter().any(|i| i % 2 != 0 || !degrees.contains(i)) {
                    return Err(Error::Inconsistent("a nonzero term sits in an odd or unlisted degree".into()));
                }
            }
            FormalityCertificate::ZeroDifferential { .. } => {
                if c.degrees().any(|i| !c.diff(i).is_zero()) {
                    return Err(Error::Inconsistent("nonzero differential".into()));
                }
            }
            FormalityCertificate::SingleHomologyDegree { zigzag, .. } => {
                let (a, b) = zigzag.as_ref();
                if !a.is_quasi_iso() || !b.is_quasi_iso() {
                    return Err(Error::Inconsistent("zigzag map is not a quasi-isomorphism".into()));
                }
                let h = b.target();
                if h.degrees().any(|i| !h.diff(i).is_zero()) {
                    return Err(Error::Inconsistent("zigzag does not end at a formal complex".into()));
                }
            }
            FormalityCertificate::UntwistSplitting { steps, last } => {
                for s in steps {
                    s.splitting.check()?;
                    s.extension.check()?;
                    if !s.splitting.is_quasi_iso() {
                        return Err(Error::Inconsistent(format!("splitting at degree {} fails", s.degree)));
                    }
                }
                if let Some(l) = last {
                    if let FormalityCertificate::SingleHomologyDegree { zigzag, .. } = l.as_ref() {
                        l.recheck(zigzag.0.target())?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn strategy(&self) -> &'static str {
        match self {
            FormalityCertificate::EvenConcentration { .. } => "even-concentration",
            FormalityCertificate::ZeroDifferential { .. } => "zero-differential",
            FormalityCertificate::SingleHomologyDegree { .. } => "single-homology-degree",
            FormalityCertificate::UntwistSplitting { .. } => "untwist-splitting",
        }
    }
}

/// Certificate when every nonzero term sits in an even degree.
pub fn formality_check_even(c: &Complex) -> Option<FormalityCertificate> {
    let degrees: Vec<i32> = c.degrees().filter(|&i| !c.term(i).is_zero()).collect();
    degrees
        .iter()
        .all(|i| i % 2 == 0)
        .then_some(FormalityCertificate::EvenConcentration { degrees })
}

/// The same test on graded dimensions.
pub fn formality_check_even_dims(dims: &BTreeMap<i32, usize>) -> Option<FormalityCertificate> {
    let degrees: Vec<i32> = dims.iter().filter(|(_, &d)| d > 0).map(|(&i, _)| i).collect();
    degrees
        .iter()
        .all(|i| i % 2 == 0)
        .then_some(FormalityCertificate::EvenConcentration { degrees })
}

#[derive(Clone, Debug)]
pub enum UntwistOutcome {
    Certified(FormalityCertificate),
    /// The procedure stopped; nothing is claimed about formality.
    Failed { stage: usize, degree: i32, reason: String },
}

/// `tau C`: `C^k` below `m`, cycles in degree `m`, with its inclusion into `C`.
fn truncation(c: &Complex, m: i32) -> Result<(Complex, CochainMap)> {
    let alg = c.algebra();
    let z = kernel(&c.diff(m));
    let mut terms: Vec<FunctorModule> = (c.start()..m).map(|k| c.term(k)).collect();
    terms.push(z.clone());
    let mut diffs: Vec<ModuleMap> = (c.start()..m - 1).map(|k| c.diff(k)).collect();
    if m > c.start() {
        diffs.push(ModuleMap::projection(&c.term(m), &z).compose(&c.diff(m - 1)));
    }
    let d = Complex::new(alg, c.start(), terms, diffs)?;
    let mut maps: BTreeMap<i32, ModuleMap> =
        (c.start()..m).map(|k| (k, ModuleMap::identity(&c.term(k)))).collect();
    maps.insert(m, ModuleMap::inclusion(&z, &c.term(m)));
    let incl = CochainMap::new(&d, c, maps)?;
    Ok((d, incl))
}

/// `C / tau C` with the projection from `C`.
fn quotient_by_truncation(c: &Complex, incl_m: &ModuleMap, m: i32) -> Result<(Complex, CochainMap)> {
    let alg = c.algebra();
    let (q, proj) = cokernel(incl_m);
    let mut terms = vec![q.clone()];
    terms.extend((m + 1..=c.end()).map(|k| c.term(k)));
    let mut diffs = Vec::new();
    if m < c.end() {
        let (_, parts) = q.subquotient_parts().expect("cokernel is a subquotient");
        let dm = c.diff(m);
        let blocks: Vec<(Weight, FpMatrix)> = parts
            .into_iter()
            .map(|(w, reps, _)| (w.clone(), dm.block(&w).mul_unchecked(reps)))
            .collect();
        diffs.push(ModuleMap::from_blocks(&q, &c.term(m + 1), blocks)?);
        diffs.extend((m + 1..c.end()).map(|k| c.diff(k)));
    }
    let quot = Complex::new(alg, m, terms, diffs)?;
    let mut maps: BTreeMap<i32, ModuleMap> =
        (m + 1..=c.end()).map(|k| (k, ModuleMap::identity(&c.term(k)))).collect();
    maps.insert(m, proj);
    let pi = CochainMap::new(c, &quot, maps)?;
    Ok((quot, pi))
}

fn flatten(maps: &[ModuleMap]) -> Vec<u8> {
    maps.iter()
        .flat_map(|m| {
            let d = m.to_dense();
            (0..d.rows()).flat_map(move |r| d.row(r).to_vec()).collect::<Vec<_>>()
        })
        .collect()
}

fn single_homology_zigzag(c: &Complex, m: i32) -> Result<FormalityCertificate> {
    let (d, incl) = truncation(c, m)?;
    let h = c.homology(m);
    let to_h = ModuleMap::projection(&c.term(m), &h).compose(&ModuleMap::inclusion(&d.term(m), &c.term(m)));
    let hc = Complex::single(&h, m);
    let proj = CochainMap::new(&d, &hc, BTreeMap::from([(m, to_h)]))?;
    Ok(FormalityCertificate::SingleHomologyDegree {
        degree: m,
        zigzag: Box::new((incl, proj)),
    })
}

/// Splits off the lowest homology degree repeatedly: with `D = tau C`
/// coresolved by `D -> J`, an extension `C -> J` of the augmentation gives a
/// quasi-isomorphism `C -> J + C / D`.
pub fn untwist_formality_certificate(c: &Complex, i_max: i32, opts: CoresolveOptions) -> Result<UntwistOutcome> {
    let c = c.trimmed();
    if c.degrees().all(|i| c.diff(i).is_zero()) {
        let degrees = c.degrees().filter(|&i| !c.term(i).is_zero()).collect();
        return Ok(UntwistOutcome::Certified(FormalityCertificate::ZeroDifferential { degrees }));
    }
    let cog = Cogenerators::new(c.algebra());
    let mut x = c;
    let mut steps = Vec::new();
    loop {
        let hom = x.homology_dims();
        let Some((&m, &hdim)) = hom.iter().next() else {
            return Ok(UntwistOutcome::Certified(FormalityCertificate::UntwistSplitting { steps, last: None }));
        };
        if hom.len() == 1 {
            let last = single_homology_zigzag(&x, m)?;
            if steps.is_empty() {
                return Ok(UntwistOutcome::Certified(last));
            }
            return Ok(UntwistOutcome::Certified(FormalityCertificate::UntwistSplitting {
                steps,
                last: Some(Box::new(last)),
            }));
        }
        let stage = steps.len();
        let (d, incl) = truncation(&x, m)?;
        let res = coresolve_complex(&d, m + i_max, opts, &cog, None)?;
        if !res.complete {
            return Ok(UntwistOutcome::Failed {
                stage,
                degree: m,
                reason: format!("coresolution of the truncation did not terminate within {i_max} steps"),
            });
        }
        let j = res.injectives.complex().clone();
        let eps = &res.augmentation;
        let basis = cochain_map_space(&x, &j);
        let degs: Vec<i32> = d.degrees().collect();
        let target = flatten(&degs.iter().map(|&k| eps.component(k)).collect::<Vec<_>>());
        let fld = x.algebra().field();
        let cols: Vec<Vec<u8>> = basis
            .iter()
            .map(|b| flatten(&degs.iter().map(|&k| b.component(k).compose(&incl.component(k))).collect::<Vec<_>>()))
            .collect();
        let sol = if cols.is_empty() {
            target.iter().all(|&v| v == 0).then(Vec::new)
        } else {
            FpMatrix::from_columns(fld, target.len(), &cols).solve(&target)?
        };
        let Some(coef) = sol else {
            return Ok(UntwistOutcome::Failed {
                stage,
                degree: m,
                reason: "restriction Hom(C, J) -> Hom(tau C, J) misses the augmentation".into(),
            });
        };
        let mut maps: BTreeMap<i32, ModuleMap> = BTreeMap::new();
        for (b, &a) in basis.iter().zip(&coef) {
            if a == 0 {
                continue;
            }
            for k in x.degrees() {
                let term = b.component(k).scale(a);
                let e = maps.entry(k).or_insert_with(|| ModuleMap::zero(&x.term(k), &j.term(k)));
                *e = e.add(&term);
            }
        }
        let ext = CochainMap::new(&x, &j, maps)?;
        let (quot, pi) = quotient_by_truncation(&x, &incl.component(m), m)?;
        let sum = j.direct_sum(&quot);
        let split_maps: BTreeMap<i32, ModuleMap> = x
            .degrees()
            .map(|k| {
                let (gk, pk) = (ext.component(k), pi.component(k));
                let parts = [j.term(k), quot.term(k)];
                let m = ModuleMap::assemble(
                    &x.term(k),
                    std::slice::from_ref(&x.term(k)),
                    &sum.term(k),
                    &parts,
                    &[(0, 0, &gk), (1, 0, &pk)],
                );
                (k, m)
            })
            .collect();
        let splitting = CochainMap::new(&x, &sum, split_maps)?;
        if !splitting.is_quasi_iso() {
            return Ok(UntwistOutcome::Failed {
                stage,
                degree: m,
                reason: "splitting map is not a quasi-isomorphism".into(),
            });
        }
        steps.push(SplitStep {
            degree: m,
            homology_dim: hdim,
            extension: ext,
            splitting,
        });
        x = quot.trimmed();
    }
}

#[cfg(test)]
mod tests;
