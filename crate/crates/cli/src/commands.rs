use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};
use spf_core::complex::Complex;
use spf_core::expr::{parse, Expr};
use spf_core::formality::{formality_verify_p2r1, DegreeReport, Verdict};
use spf_core::injective::{self, ext_table, Cogenerators, CoresolveOptions, Strategy};
use spf_core::module::{hom_space, FunctorModule};
use spf_core::schur::{cache, SchurAlgebra};
use spf_core::spectral::{Filtration, HyperExt, PageReport};
use spf_core::suites::{run_suite, SUITES};
use spf_core::{Error, Field};

pub struct Config {
    pub p: u32,
    pub n: Option<usize>,
    pub imax: usize,
    pub guard: usize,
    pub cache_dir: Option<PathBuf>,
    pub seed: u64,
}

pub struct Report {
    pub json: Value,
    pub text: String,
    /// An invariant or verdict came out negative.
    pub failed: bool,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. }
            | Error::InvalidPrime(_)
            | Error::InvalidInput(_)
            | Error::Unsupported(_)
            | Error::DegreeMismatch(_)
            | Error::DimensionMismatch(_) => 2,
            Error::Guard { .. } => 3,
            Error::Inconsistent(_) => 5,
            Error::CacheFormat(_) | Error::Io(_) | Error::Json(_) => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Out = Result<Report, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: msg.into(),
    }
}

/// `dim S(n, d) = C(n^2 + d - 1, d)`, saturating.
fn schur_dim(n: usize, d: usize) -> u128 {
    let u = (n * n) as u128;
    let mut acc: u128 = 1;
    for i in 0..d as u128 {
        acc = match acc.checked_mul(u + i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

impl Config {
    fn algebra(&self, n: usize, d: usize) -> Result<Arc<SchurAlgebra>, Failure> {
        let dim = schur_dim(n, d);
        if dim > self.guard as u128 {
            return Err(Error::Guard {
                what: format!("S({n}, {d})"),
                dim: dim.min(usize::MAX as u128) as usize,
                bound: self.guard,
            }
            .into());
        }
        let alg = Arc::new(SchurAlgebra::new(Field::new(self.p)?, n, d)?);
        if let Some(dir) = &self.cache_dir {
            std::fs::create_dir_all(dir).map_err(Error::from)?;
            cache::load_or_build(&alg, dir)?;
        }
        Ok(alg)
    }

    fn n_for(&self, d: usize) -> Result<usize, Failure> {
        let n = self.n.unwrap_or(d.max(1));
        if n < d {
            return Err(usage(format!("--n {n} is below the degree {d}")));
        }
        Ok(n)
    }

    fn echo(&self, n: usize) -> Value {
        json!({ "p": self.p, "n": n, "i_max": self.imax, "guard_dim": self.guard, "seed": self.seed })
    }
}

fn degree(e: &Expr, p: u32) -> Result<usize, Failure> {
    usize::try_from(e.degree(p)).map_err(|_| usage(format!("degree of {e} overflows")))
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut a, b) {
        a.extend(b);
    }
    a
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report serializes")
}

pub fn ext(cfg: &Config, f: &str, g: &str) -> Out {
    let (ef, eg) = (parse(f)?, parse(g)?);
    let d = degree(&ef, cfg.p)?;
    let dg = degree(&eg, cfg.p)?;
    if d != dg {
        return Err(usage(format!("degrees differ: {ef} has {d}, {eg} has {dg}")));
    }
    let n = cfg.n_for(d)?;
    let alg = cfg.algebra(n, d)?;
    let mf = FunctorModule::from_expr(&alg, &ef, cfg.guard)?;
    let mg = FunctorModule::from_expr(&alg, &eg, cfg.guard)?;
    let table = ext_table(&mf, &mg, cfg.imax)?;
    let mut text = format!("Ext^i({}, {}) over S({n}, {d}), p = {}, seed {}\n", table.f, table.g, cfg.p, cfg.seed);
    for (i, dim) in table.dims.iter().enumerate() {
        writeln!(text, "  i = {i}: {dim}").unwrap();
    }
    Ok(Report {
        json: merge(to_value(&table), json!({ "guard_dim": cfg.guard, "seed": cfg.seed })),
        text,
        failed: false,
    })
}

fn render_degrees(text: &mut String, title: &str, degrees: &[DegreeReport]) {
    let dims: Vec<String> = degrees.iter().map(|r| r.dim.to_string()).collect();
    writeln!(text, "  {title}: [{}]", dims.join(", ")).unwrap();
}

pub fn formality(cfg: &Config, g: &str, d: Option<usize>) -> Out {
    if cfg.p != 2 {
        return Err(Error::Unsupported(format!("formality verification needs p = 2, got {}", cfg.p)).into());
    }
    let eg = parse(g)?;
    let deg = degree(&eg, cfg.p)?;
    let d = d.unwrap_or(deg);
    if d != deg {
        return Err(usage(format!("--d {d} disagrees with the degree {deg} of {eg}")));
    }
    let n = cfg.n.unwrap_or(2 * d.max(1));
    if n < d {
        return Err(usage(format!("--n {n} is below the degree {d}")));
    }
    // the heaviest algebra involved is S(n, 2d)
    let dim = schur_dim(n, 2 * d);
    if dim > cfg.guard as u128 {
        return Err(Error::Guard {
            what: format!("S({n}, {})", 2 * d),
            dim: dim.min(usize::MAX as u128) as usize,
            bound: cfg.guard,
        }
        .into());
    }
    let r = formality_verify_p2r1(&eg, d, n, cfg.guard)?;
    let mut text = format!("formality of {}^(1), d = {d}, p = 2, V = k^{n}, seed {}\n", r.g, cfg.seed);
    render_degrees(&mut text, "Hom(G^(1)#, R^{2d,i})", &r.degrees);
    render_degrees(&mut text, "weight spaces", &r.weight_spaces);
    render_degrees(&mut text, "graded target", &r.graded_target);
    writeln!(
        text,
        "  odd degrees vanish: {}, weights match: {}, totals match: {}",
        r.odd_degrees_vanish, r.weights_match, r.totals_match
    )
    .unwrap();
    let verdict = to_value(&r.verdict);
    writeln!(text, "  verdict: {}", verdict.as_str().unwrap_or("?")).unwrap();
    Ok(Report {
        json: merge(to_value(&r), json!({ "guard_dim": cfg.guard, "seed": cfg.seed })),
        text,
        failed: r.verdict != Verdict::EvenConcentration,
    })
}

/// `A -> B -> ...` with each arrow the unique map up to scalars.
fn parse_complex(cfg: &Config, spec: &str, start: i32, alg: &Arc<SchurAlgebra>) -> Result<Complex, Failure> {
    let mut terms = Vec::new();
    for part in spec.split("->") {
        terms.push(FunctorModule::from_expr(alg, &parse(part)?, cfg.guard)?);
    }
    let mut diffs = Vec::new();
    for w in terms.windows(2) {
        let hs = hom_space(&w[0], &w[1]);
        let nonzero: Vec<_> = hs.into_iter().filter(|h| !h.is_zero()).collect();
        if nonzero.len() != 1 {
            return Err(usage(format!(
                "Hom({}, {}) has dimension {}; arrows need a unique map",
                w[0].label(),
                w[1].label(),
                nonzero.len()
            )));
        }
        diffs.push(nonzero[0].clone());
    }
    for k in 1..diffs.len() {
        if !diffs[k].compose(&diffs[k - 1]).is_zero() {
            return Err(usage(format!("{spec}: consecutive arrows do not compose to zero")));
        }
    }
    Ok(Complex::new(alg, start, terms, diffs)?)
}

fn spec_degree(spec: &str, p: u32) -> Result<usize, Failure> {
    let first = spec.split("->").next().unwrap_or_default();
    degree(&parse(first)?, p)
}

fn render_page(text: &mut String, r: &PageReport) {
    let cells: Vec<String> = r.entries.iter().map(|e| format!("({},{}):{}", e.i, e.j, e.dim)).collect();
    writeln!(text, "  E_{}: {}", r.page, cells.join(" ")).unwrap();
    for dr in &r.differentials_nonzero {
        writeln!(text, "    d_{} {:?} -> {:?} rank {}", r.page, dr.from, dr.to, dr.rank).unwrap();
    }
}

pub fn hyperext(cfg: &Config, c: &str, d: &str, c_start: i32, d_start: i32) -> Out {
    let deg = spec_degree(c, cfg.p)?;
    let dd = spec_degree(d, cfg.p)?;
    if deg != dd {
        return Err(usage(format!("degrees differ: {deg} and {dd}")));
    }
    let n = cfg.n_for(deg)?;
    let alg = cfg.algebra(n, deg)?;
    let cc = parse_complex(cfg, c, c_start, &alg)?;
    let dc = parse_complex(cfg, d, d_start, &alg)?;
    let top = d_start + cfg.imax as i32 + 2;
    let h = HyperExt::new(&cc, &dc, top, CoresolveOptions::default(), &Cogenerators::new(&alg))?;
    let ss = &h.sequence;
    ss.check_transitions()?;
    ss.check_convergence()?;
    let degeneration = ss.degeneration_page();
    let pages: Vec<PageReport> = (1..=degeneration).map(|r| ss.report(r)).collect();
    let infinity: Vec<Value> = ss.infinity.iter().map(|(&(i, j), &dim)| json!({ "i": i, "j": j, "dim": dim })).collect();
    let total: BTreeMap<String, usize> = ss.total.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    let reliable = h.reliable_below();
    let filtration = match ss.filtration {
        Filtration::First => "first",
        Filtration::Second => "second",
    };
    let mut text = format!("hyper-Ext of Hom({c}, {d}) over S({n}, {deg}), p = {}, seed {}\n", cfg.p, cfg.seed);
    writeln!(text, "  filtration: {filtration}, coresolution complete: {}", h.resolution.complete).unwrap();
    for r in &pages {
        render_page(&mut text, r);
    }
    let cells: Vec<String> = ss.infinity.iter().map(|(&(i, j), &dim)| format!("({i},{j}):{dim}")).collect();
    writeln!(text, "  E_inf: {}", cells.join(" ")).unwrap();
    let tot: Vec<String> = ss.total.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    writeln!(text, "  H(Tot): {}", tot.join(" ")).unwrap();
    writeln!(text, "  degenerates at E_{degeneration}").unwrap();
    let json = merge(
        cfg.echo(n),
        json!({
            "C": c, "D": d, "c_start": c_start, "d_start": d_start, "d": deg,
            "filtration": filtration,
            "complete": h.resolution.complete,
            "reliable_below": if reliable == i32::MAX { Value::Null } else { json!(reliable) },
            "pages": pages,
            "infinity": infinity,
            "total": total,
            "degeneration_page": degeneration,
            "certificate": ss.certificate().map(|c| json!({ "page": c.page, "verified_through": c.verified_through })),
        }),
    );
    Ok(Report { json, text, failed: false })
}

pub fn coresolve(cfg: &Config, f: &str) -> Out {
    let ef = parse(f)?;
    let d = degree(&ef, cfg.p)?;
    let n = cfg.n_for(d)?;
    let alg = cfg.algebra(n, d)?;
    let m = FunctorModule::from_expr(&alg, &ef, cfg.guard)?;
    let res = injective::coresolve(&m, cfg.imax as i32, Strategy::Greedy)?;
    let j = &res.injectives;
    let mut terms = Vec::new();
    let mut text = format!("coresolution of {} over S({n}, {d}), p = {}, seed {}\n", m.label(), cfg.p, cfg.seed);
    for (i, summands) in j.summary() {
        let dim = j.term(i).map_or(0, |t| t.module().dim());
        let homology = j.complex().homology(i).dim();
        let names: Vec<String> = summands.iter().map(|w| format!("I{:?}", w.0)).collect();
        let names = if names.is_empty() { "-".to_string() } else { names.join(" + ") };
        writeln!(text, "  J^{i}: dim {dim}, H = {homology}, summands {names}").unwrap();
        let ws: Vec<&Vec<u32>> = summands.iter().map(|w| &w.0).collect();
        terms.push(json!({ "i": i, "dim": dim, "homology": homology, "summands": ws }));
    }
    writeln!(text, "  complete: {}", res.complete).unwrap();
    let json = merge(
        cfg.echo(n),
        json!({ "F": m.label(), "d": d, "terms": terms, "complete": res.complete, "source_dim": m.dim() }),
    );
    Ok(Report { json, text, failed: false })
}

pub fn check(cfg: &Config, suite: &str) -> Out {
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut reports = Vec::new();
    let mut text = String::new();
    let mut failed = false;
    for name in names {
        let r = run_suite(name, cfg.seed)?;
        writeln!(text, "{} (seed {}): {} in {:.2}s", r.suite, r.seed, if r.passed { "PASS" } else { "FAIL" }, r.seconds).unwrap();
        for c in r.checks.iter().filter(|c| !c.pass) {
            writeln!(text, "  FAIL {}: expected {}, got {}", c.label, c.expected, c.got).unwrap();
        }
        failed |= !r.passed;
        reports.push(r);
    }
    Ok(Report {
        json: json!({ "seed": cfg.seed, "passed": !failed, "suites": reports }),
        text,
        failed,
    })
}
