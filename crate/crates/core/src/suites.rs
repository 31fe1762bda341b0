//! Named invariant batteries, shared by the command-line `check` runner and
//! the acceptance tests. Each check compares two independent computations.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::VComplex;
use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::field::Field;
use crate::formality::StandardCoresolution;
use crate::injective::{ext_dims, Strategy};
use crate::linalg::FpMatrix;
use crate::module::{hom_dim, FunctorModule};
use crate::schur::cache::StructureTable;
use crate::schur::{exponent_vectors, SchurAlgebra, Weight};
use crate::spectral::{Bicomplex, Filtration, SpectralSequence};

pub const DEFAULT_SEED: u64 = 0x5eed;

pub const SUITES: &[&str] = &[
    "yoneda",
    "pairing",
    "adjunction",
    "untwist-hom",
    "exponential",
    "polarization",
    "homotopy",
    "parser",
    "cache",
    "standard-coresolution",
    "spectral",
];

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub label: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckLine>,
    pub passed: bool,
    pub seconds: f64,
}

struct Lines(Vec<CheckLine>);

impl Lines {
    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, label: impl Into<String>, expected: T, got: T) {
        self.0.push(CheckLine {
            label: label.into(),
            expected: format!("{expected:?}"),
            got: format!("{got:?}"),
            pass: expected == got,
        });
    }
}

const GUARD: usize = 100_000;

fn alg(p: u32, n: usize, d: usize) -> Result<Arc<SchurAlgebra>> {
    Ok(Arc::new(SchurAlgebra::new(Field::new(p)?, n, d)?))
}

fn module(a: &Arc<SchurAlgebra>, s: &str) -> Result<FunctorModule> {
    FunctorModule::parse(a, s, GUARD)
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let t0 = Instant::now();
    let mut out = Lines(Vec::new());
    match name {
        "yoneda" | "pairing" => yoneda_pairing(&mut out, name == "yoneda")?,
        "adjunction" => adjunction(&mut out)?,
        "untwist-hom" => untwist_hom(&mut out)?,
        "exponential" => exponential(&mut out),
        "polarization" => polarization(&mut out)?,
        "homotopy" => homotopy(&mut out, seed)?,
        "parser" => parser(&mut out, seed)?,
        "cache" => cache(&mut out)?,
        "standard-coresolution" => standard(&mut out)?,
        "spectral" => spectral(&mut out, seed),
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown suite {other:?}; known: {}",
                SUITES.join(", ")
            )))
        }
    }
    let passed = out.0.iter().all(|c| c.pass);
    Ok(SuiteReport {
        suite: name.to_string(),
        seed,
        checks: out.0,
        passed,
        seconds: t0.elapsed().as_secs_f64(),
    })
}

/// `Hom(G^{d,V}, F) = F(V)` and `Hom(F, S^d_V) = F^#(V)`.
fn yoneda_pairing(out: &mut Lines, yoneda: bool) -> Result<()> {
    for (p, d, exprs) in [
        (2, 2, vec!["S^2", "G^2", "T^2", "frob(1)"]),
        (3, 2, vec!["S^2", "G^2", "T^2"]),
        (2, 3, vec!["S^3", "G^2 (*) I", "frob(1) (*) I"]),
        (3, 3, vec!["frob(1)", "S^2 (*) I"]),
    ] {
        let a = alg(p, d, d)?;
        for e in exprs {
            let f = module(&a, e)?;
            let expr = parse(e)?;
            for v in 1..=3u32 {
                if yoneda {
                    let gamma = module(&a, &format!("param_sup(G^{d}, {v})"))?;
                    out.eq(
                        format!("p={p} Hom(G^{d},{v}, {e})"),
                        expr.dim(p, v as usize),
                        hom_dim(&gamma, &f) as u128,
                    );
                } else {
                    let inj = module(&a, &format!("param_sub(S^{d}, {v})"))?;
                    out.eq(
                        format!("p={p} Hom({e}, S^{d}_{v})"),
                        Expr::dual(expr.clone()).dim(p, v as usize),
                        hom_dim(&f, &inj) as u128,
                    );
                }
            }
        }
    }
    Ok(())
}

/// `Hom(F^V, G) = Hom(F, G_V)`.
fn adjunction(out: &mut Lines) -> Result<()> {
    for (p, pairs) in [
        (2, vec![("S^2", "G^2"), ("T^2", "S^2"), ("G^2", "frob(1)"), ("frob(1)", "T^2")]),
        (3, vec![("S^2", "G^2"), ("T^2", "S^2")]),
    ] {
        let a = alg(p, 2, 2)?;
        for (fs, gs) in pairs {
            for v in 1..=2 {
                let lhs = hom_dim(&module(&a, &format!("param_sup({fs}, {v})"))?, &module(&a, gs)?);
                let rhs = hom_dim(&module(&a, fs)?, &module(&a, &format!("param_sub({gs}, {v})"))?);
                out.eq(format!("p={p} {fs} {gs} v={v}"), lhs, rhs);
            }
        }
    }
    Ok(())
}

/// `Hom(F, G) = Hom(F^(1), G^(1))`.
fn untwist_hom(out: &mut Lines) -> Result<()> {
    for (p, n, d, pairs) in [
        (2, 4, 2, vec![("S^2", "S^2"), ("G^2", "S^2"), ("S^2", "G^2"), ("T^2", "G^2"), ("T^2", "T^2")]),
        (3, 2, 1, vec![("I", "I")]),
        (2, 3, 1, vec![("I", "I")]),
    ] {
        let small = alg(p, n, d)?;
        let big = alg(p, n, d * p as usize)?;
        for (fs, gs) in pairs {
            let lhs = hom_dim(&module(&small, fs)?, &module(&small, gs)?);
            let rhs = hom_dim(
                &module(&big, &format!("twist({fs}, 1)"))?,
                &module(&big, &format!("twist({gs}, 1)"))?,
            );
            out.eq(format!("p={p} n={n} {fs} {gs}"), lhs, rhs);
        }
    }
    Ok(())
}

/// `S^d(V + W) = sum S^i V (x) S^{d-i} W`, same for divided powers.
fn exponential(out: &mut Lines) {
    for p in [2, 3, 5] {
        for (v, w) in [(1usize, 2usize), (2, 2), (1, 3), (3, 2)] {
            for d in 0..=4u32 {
                for head in ["S", "G", "T"] {
                    let e = |k: u32| parse(&format!("{head}^{k}")).unwrap();
                    let lhs = e(d).dim(p, v + w);
                    let rhs: u128 = if head == "T" {
                        // tensor powers split over subsets rather than sizes
                        (0..=d)
                            .map(|i| crate::schur::binomial(d as u64, i as u64) as u128 * e(i).dim(p, v) * e(d - i).dim(p, w))
                            .sum()
                    } else {
                        (0..=d).map(|i| e(i).dim(p, v) * e(d - i).dim(p, w)).sum()
                    };
                    out.eq(format!("p={p} {head}^{d} on {v}+{w}"), lhs, rhs);
                }
            }
        }
    }
}

/// `v^{(x)d}` in divided-power coordinates is `sum_alpha v^alpha x^{[alpha]}`.
fn tensor_power_vector(m: &FunctorModule, n: usize, d: usize, v: &[u8]) -> Vec<u8> {
    let f = m.field();
    let mut out = vec![0u8; m.dim()];
    for alpha in exponent_vectors(n, d) {
        let w = Weight(alpha.iter().map(|&x| x as u32).collect());
        let mut c = 1u8;
        for i in 0..n {
            c = f.mul(c, f.pow(v[i], alpha[i] as u64));
        }
        out[m.block_offset(&w).unwrap()] = c;
    }
    out
}

/// The tensor powers `v^{(x)d}` generate `G^d(k^n)` over `F_2`.
fn polarization(out: &mut Lines) -> Result<()> {
    for (n, d) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let a = alg(2, n, d)?;
        let g = module(&a, &format!("G^{d}"))?;
        let vectors: Vec<Vec<u8>> = (0..1u32 << n)
            .map(|bits| {
                let v: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
                tensor_power_vector(&g, n, d, &v)
            })
            .collect();
        out.eq(format!("n={n} d={d}"), g.dim(), g.submodule_generated(&vectors).dim());
    }
    Ok(())
}

/// Ext tables from two differently built coresolutions agree.
fn homotopy(out: &mut Lines, seed: u64) -> Result<()> {
    for (p, n, d, names, imax) in [
        (2, 2, 2, vec!["S^2", "G^2", "T^2", "frob(1)"], 3),
        (3, 2, 3, vec!["S^3", "G^3", "frob(1)"], 3),
        (2, 3, 3, vec!["frob(1) (*) I", "S^3"], 2),
    ] {
        let a = alg(p, n, d)?;
        for f in &names {
            for g in &names {
                let (mf, mg) = (module(&a, f)?, module(&a, g)?);
                let e1 = ext_dims(&mf, &mg, imax, Strategy::Greedy)?;
                let e2 = ext_dims(&mf, &mg, imax, Strategy::Shuffled(seed))?;
                out.eq(format!("p={p} n={n} Ext({f}, {g})"), e1, e2);
            }
        }
    }
    Ok(())
}

fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..5) {
            0 => Expr::Sym(rng.gen_range(0..4)),
            1 => Expr::Div(rng.gen_range(0..4)),
            2 => Expr::Tens(rng.gen_range(0..4)),
            3 => Expr::Id,
            _ => Expr::Frob(rng.gen_range(0..3)),
        };
    }
    let mut sub = || random_expr(rng, depth - 1);
    let a = sub();
    let b = sub();
    match rng.gen_range(0..6) {
        0 => Expr::dual(a),
        1 => Expr::twist(a, rng.gen_range(0..3)),
        2 => Expr::compose(a, b),
        3 => Expr::tensor(a, b),
        4 => Expr::param_sub(a, rng.gen_range(0..4)),
        _ => Expr::param_sup(a, rng.gen_range(0..4)),
    }
}

/// Printing then reparsing gives the same tree, for 200 random expressions.
fn parser(out: &mut Lines, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for _ in 0..200 {
        let e = random_expr(&mut rng, 4);
        let printed = e.to_string();
        match parse(&printed) {
            Ok(back) if back == e && back.to_string() == printed => {}
            _ => bad.push(printed),
        }
    }
    out.eq("round trips failing", Vec::<String>::new(), bad);
    Ok(())
}

/// Cached tables reload byte-identically and match a fresh computation.
fn cache(out: &mut Lines) -> Result<()> {
    for (p, n, d) in [(2, 2, 2), (3, 3, 3), (2, 3, 4)] {
        let a = SchurAlgebra::new(Field::new(p)?, n, d)?;
        let t = StructureTable::compute(&a);
        let bytes = t.to_binary();
        let back = StructureTable::from_binary(&bytes)?;
        out.eq(format!("S({n},{d}) p={p} binary"), true, back.to_binary() == bytes);
        let json = StructureTable::from_json_lines(&t.to_json_lines())?;
        out.eq(format!("S({n},{d}) p={p} json"), true, json == t);
        let fresh = SchurAlgebra::new(Field::new(p)?, n, d)?;
        back.load_into(&fresh)?;
        out.eq(
            format!("S({n},{d}) p={p} reload"),
            true,
            StructureTable::compute(&fresh).to_binary() == bytes,
        );
    }
    Ok(())
}

fn standard(out: &mut Lines) -> Result<()> {
    for d in 1..=3 {
        for w in 1..=3 {
            let r = StandardCoresolution::new(2, d, w)?;
            let homology: Vec<usize> = (0..=2 * d as i32).map(|i| r.complex.homology_dim(i)).collect();
            let mut expect = vec![0; 2 * d + 1];
            expect[0] = crate::schur::binomial((w + d - 1) as u64, d as u64) as usize;
            out.eq(format!("d={d} w={w} homology"), expect, homology);
            out.eq(format!("d={d} w={w} weights"), r.expected_degree_zero(), r.homology_by_weight(0));
        }
    }
    Ok(())
}

fn random_matrix(rng: &mut ChaCha8Rng, f: Field, r: usize, c: usize) -> FpMatrix {
    let mut m = FpMatrix::zeros(f, r, c);
    for i in 0..r {
        for j in 0..c {
            m.set(i, j, rng.gen_range(0..f.p()) as u8);
        }
    }
    m
}

fn random_vcomplex(rng: &mut ChaCha8Rng, f: Field, dims: [usize; 3]) -> VComplex {
    let d0 = random_matrix(rng, f, dims[1], dims[0]);
    let left = d0.transpose().kernel_basis().transpose();
    let d1 = random_matrix(rng, f, dims[2], left.rows()).mul_unchecked(&left);
    VComplex::new(f, 0, dims.to_vec(), vec![d0, d1]).expect("d1 d0 = 0 by construction")
}

fn kron(a: &FpMatrix, b: &FpMatrix) -> FpMatrix {
    let f = a.field();
    let mut m = FpMatrix::zeros(f, a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    m.set(i * b.rows() + k, j * b.cols() + l, f.mul(a.get(i, j), b.get(k, l)));
                }
            }
        }
    }
    m
}

/// Tensor products of random complexes: Kunneth on page two, convergence.
fn spectral(out: &mut Lines, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..20 {
        let f = Field::new([2, 3, 5][trial % 3]).unwrap();
        let mut dims = || [rng.gen_range(0..3), rng.gen_range(0..4), rng.gen_range(0..3)];
        let (da, db) = (dims(), dims());
        let a = random_vcomplex(&mut rng, f, da);
        let b = random_vcomplex(&mut rng, f, db);
        let mut bc = Bicomplex::new(f);
        for i in 0..3 {
            for j in 0..3 {
                bc.set_dim((i, j), a.dim(i) * b.dim(j));
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let (ia, ib) = (FpMatrix::identity(f, a.dim(i)), FpMatrix::identity(f, b.dim(j)));
                bc.set_first((i, j), kron(&a.diff(i), &ib));
                bc.set_second((i, j), kron(&ia, &b.diff(j)));
            }
        }
        for filtration in [Filtration::First, Filtration::Second] {
            let ss = SpectralSequence::new(&bc, filtration);
            out.eq(format!("trial {trial} {filtration:?} convergence"), true, ss.check_convergence().is_ok());
            out.eq(format!("trial {trial} {filtration:?} pages"), true, ss.check_transitions().is_ok());
            let e2: Vec<usize> = (0..9).map(|k| ss.page(2).dim((k / 3, k % 3))).collect();
            let kunneth: Vec<usize> = (0..9)
                .map(|k| a.homology_dim(k / 3) * b.homology_dim(k % 3))
                .collect();
            out.eq(format!("trial {trial} {filtration:?} E2"), kunneth, e2);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suites_pass() {
        for &name in SUITES {
            let r = run_suite(name, DEFAULT_SEED).unwrap();
            let failing: Vec<_> = r.checks.iter().filter(|c| !c.pass).collect();
            assert!(r.passed, "{name}: {failing:?}");
            assert!(!r.checks.is_empty());
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(run_suite("nope", 1), Err(Error::InvalidInput(_))));
    }
}
