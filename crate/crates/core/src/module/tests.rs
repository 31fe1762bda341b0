use std::sync::Arc;

use super::*;
use crate::expr::parse;
use crate::schur::SchurAlgebra;

const GUARD: usize = 20_000;

fn alg(p: u32, n: usize, d: usize) -> Arc<SchurAlgebra> {
    Arc::new(SchurAlgebra::new(Field::new(p).unwrap(), n, d).unwrap())
}

fn module(a: &Arc<SchurAlgebra>, s: &str) -> FunctorModule {
    FunctorModule::parse(a, s, GUARD).unwrap()
}

fn all_pairs(a: &SchurAlgebra, stride: usize) -> Vec<(u32, u32)> {
    let n = a.dim() as u32;
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .step_by(stride)
        .collect()
}

#[test]
fn basic_dimensions_and_weights() {
    let a = alg(2, 2, 2);
    let t = module(&a, "T^2");
    assert_eq!(t.dim(), 4);
    let w: Vec<(Weight, usize)> = t.blocks().collect();
    assert_eq!(
        w,
        vec![
            (Weight(vec![0, 2]), 1),
            (Weight(vec![1, 1]), 2),
            (Weight(vec![2, 0]), 1)
        ]
    );
    assert_eq!(module(&a, "S^2").dim(), 3);
    assert_eq!(module(&a, "frob(1)").dim(), 2);
    assert_eq!(
        module(&a, "frob(1)").weights(),
        &[Weight(vec![0, 2]), Weight(vec![2, 0])]
    );
    assert_eq!(module(&alg(3, 3, 3), "frob(1)").dim(), 3);
    assert_eq!(module(&alg(2, 3, 3), "T^3").dim(), 27);
    assert_eq!(module(&alg(2, 4, 4), "twist(S^2, 1)").dim(), 10);
    assert!(FunctorModule::parse(&a, "S^3", GUARD).is_err());
}

#[test]
fn action_laws_on_battery() {
    for (p, n, d, exprs) in [
        (2, 2, 2, vec!["S^2", "G^2", "T^2", "frob(1)", "dual(S^2)", "I (*) I", "param_sub(S^2, 2)"]),
        (3, 2, 2, vec!["S^2", "G^2", "dual(T^2)", "param_sup(G^2, 2)"]),
        (2, 3, 3, vec!["S^3", "G^3", "S^2 (*) I", "dual(G^2) (*) I"]),
        (3, 3, 3, vec!["frob(1)", "G^3", "S^1 (*) G^2"]),
        (2, 4, 4, vec!["compose(S^2, S^2)", "twist(G^2, 1)", "compose(G^2, frob(1))"]),
    ] {
        let a = alg(p, n, d);
        let pairs = all_pairs(&a, if a.dim() > 100 { 997 } else { 1 });
        for e in exprs {
            let m = module(&a, e);
            m.check_action(&pairs).unwrap_or_else(|err| panic!("{e}: {err}"));
        }
    }
}

#[test]
fn action_is_identity_for_unit_on_tensor_cube() {
    let a = alg(2, 3, 3);
    let m = module(&a, "T^3");
    let unit = a.unit();
    for (w, d) in m.blocks() {
        let k: Vec<(u32, u8)> = unit
            .iter()
            .copied()
            .filter(|&(k, _)| a.rowsum(k) == &w)
            .collect();
        assert_eq!(m.act_elem(&k, &w, &w), FpMatrix::identity(a.field(), d));
    }
}

#[test]
fn twist_weight_idempotent_fixes_one_vector() {
    let a = alg(2, 2, 2);
    let m = module(&a, "frob(1)");
    for lambda in [Weight(vec![2, 0]), Weight(vec![0, 2])] {
        let k = a.idempotent(&lambda).unwrap();
        assert_eq!(m.act(k).rank(), 1);
    }
    let k = a.idempotent(&Weight(vec![1, 1])).unwrap();
    assert_eq!(m.act(k).rank(), 0);
}

#[test]
fn coregular_matches_symmetric_tensor_products() {
    for (p, n, d) in [(2, 2, 2), (3, 2, 3), (2, 3, 3), (3, 3, 2)] {
        let a = alg(p, n, d);
        for mu in a.weights() {
            let inj = FunctorModule::coregular(&a, &mu);
            inj.check_action(&all_pairs(&a, 7)).unwrap();
            let factors: Vec<Expr> = mu.0.iter().map(|&k| Expr::Sym(k)).collect();
            let sym = FunctorModule::from_expr(&a, &Expr::tensor_all(factors), GUARD).unwrap();
            assert!(
                find_isomorphism(&inj, &sym, 1).is_some(),
                "I{mu} vs S^mu at p={p}"
            );
        }
    }
}

#[test]
fn symmetric_and_divided_are_kuhn_dual() {
    for (p, n, d) in [(2, 2, 2), (3, 3, 3), (2, 3, 3)] {
        let a = alg(p, n, d);
        let s = module(&a, &format!("S^{d}"));
        let g = module(&a, &format!("G^{d}"));
        assert!(find_isomorphism(&s.dual(), &g, 2).is_some());
        assert!(find_isomorphism(&module(&a, &format!("dual(S^{d})")), &g, 2).is_some());
        assert!(find_isomorphism(&s.dual().dual(), &s, 2).is_some());
    }
    let a = alg(2, 2, 2);
    let tw = module(&a, "frob(1)");
    assert!(find_isomorphism(&tw.dual(), &tw, 3).is_some());
}

#[test]
fn identity_tensor_square_is_tensor_power() {
    let a = alg(3, 2, 2);
    assert!(find_isomorphism(&module(&a, "I (*) I"), &module(&a, "T^2"), 0).is_some());
    assert_eq!(module(&a, "S^1 (*) S^1").dim(), 4);
}

#[test]
fn twisted_kind_agrees_with_twisted_recipe() {
    let small = alg(2, 4, 2);
    let big = alg(2, 4, 4);
    for e in ["S^2", "G^2", "T^2"] {
        let tw = module(&small, e).twisted(&big, 1).unwrap();
        let rec = module(&big, &format!("twist({e}, 1)"));
        assert_eq!(tw.weights(), rec.weights());
        for k in 0..big.dim() as u32 {
            assert_eq!(*tw.act(k), *rec.act(k), "{e} at {k}");
        }
    }
}

#[test]
fn exercise_homs() {
    let a = alg(2, 2, 2);
    assert_eq!(hom_dim(&module(&a, "S^2"), &module(&a, "S^2")), 1);
    assert_eq!(hom_dim(&module(&a, "G^2"), &module(&a, "I (*) I")), 1);
    assert_eq!(hom_dim(&module(&a, "S^2"), &module(&a, "G^2")), 1);
}

#[test]
fn solver_maps_are_equivariant_for_every_basis_element() {
    let a = alg(3, 2, 3);
    let m = module(&a, "S^2 (*) I");
    let n = module(&a, "T^3");
    let homs = hom_space(&m, &n);
    assert!(!homs.is_empty());
    for f in &homs {
        f.check_equivariant(true).unwrap();
    }
}

#[test]
fn generators_suffice_for_hom() {
    // Hom computed from generators equals Hom computed from every basis element.
    let a = alg(2, 3, 3);
    let m = module(&a, "G^2 (*) I");
    let n = module(&a, "S^3");
    let from_gens = hom_space(&m, &n);
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let total: usize = m.blocks().map(|(w, d)| d * n.block_dim(&w)).sum();
    let weights: Vec<Weight> = m.weights().iter().filter(|w| n.block_dim(w) > 0).cloned().collect();
    let offset = |w: &Weight| {
        let mut o = 0;
        for v in &weights {
            if v == w {
                return Some(o);
            }
            o += m.block_dim(v) * n.block_dim(v);
        }
        None
    };
    let f = a.field();
    for k in 0..a.dim() as u32 {
        let (from, to) = (a.colsum(k), a.rowsum(k));
        let (am, an) = (m.act(k), n.act(k));
        for r in 0..n.block_dim(to) {
            for c in 0..m.block_dim(from) {
                let mut row = vec![0u8; total];
                if let Some(o) = offset(to) {
                    let sd = m.block_dim(to);
                    for s in 0..sd {
                        row[o + r * sd + s] = f.add(row[o + r * sd + s], am.get(s, c));
                    }
                }
                if let Some(o) = offset(from) {
                    let sd = m.block_dim(from);
                    for t in 0..n.block_dim(from) {
                        row[o + t * sd + c] = f.sub(row[o + t * sd + c], an.get(r, t));
                    }
                }
                rows.push(row);
            }
        }
    }
    let full = FpMatrix::from_row_vectors(f, total, &rows);
    assert_eq!(total - full.rank(), from_gens.len());
}

#[test]
fn symmetrization_kernel_and_cokernel() {
    for (p, n) in [(2, 2), (2, 3), (3, 3)] {
        let a = alg(p, n, p as usize);
        let alpha = symmetrization(&a, GUARD).unwrap();
        alpha.check_equivariant(true).unwrap();
        let tw = module(&a, "frob(1)");
        let k = kernel(&alpha);
        let (c, _) = cokernel(&alpha);
        assert!(find_isomorphism(&k, &tw, 0).is_some());
        assert!(find_isomorphism(&c, &tw, 0).is_some());
        k.check_action(&all_pairs(&a, 5)).unwrap();
        c.check_action(&all_pairs(&a, 5)).unwrap();
    }
    let a = alg(2, 2, 2);
    assert_eq!(symmetrization(&a, GUARD).unwrap().rank(), 1);
}

#[test]
fn submodule_generation() {
    let a = alg(2, 2, 2);
    let g = module(&a, "G^2");
    let full: Vec<Vec<u8>> = (0..g.dim())
        .map(|i| {
            let mut v = vec![0u8; g.dim()];
            v[i] = 1;
            v
        })
        .collect();
    assert_eq!(g.submodule_generated(&full).dim(), g.dim());
    assert_eq!(g.submodule_generated(&[vec![0; 3]]).dim(), 0);
}

/// `v^{(x)d}` in divided-power coordinates is `sum_alpha v^alpha x^{[alpha]}`.
fn tensor_power_vector(m: &FunctorModule, n: usize, d: usize, v: &[u8]) -> Vec<u8> {
    let f = m.field();
    let mut out = vec![0u8; m.dim()];
    for alpha in crate::schur::exponent_vectors(n, d) {
        let w = Weight(alpha.iter().map(|&x| x as u32).collect());
        let mut c = 1u8;
        for i in 0..n {
            c = f.mul(c, f.pow(v[i], alpha[i] as u64));
        }
        out[m.block_offset(&w).unwrap()] = c;
    }
    out
}

#[test]
fn polarization_generates_divided_powers_over_f2() {
    for (n, d) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let a = alg(2, n, d);
        let g = module(&a, &format!("G^{d}"));
        let vectors: Vec<Vec<u8>> = (0..1u32 << n)
            .map(|bits| {
                let v: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
                tensor_power_vector(&g, n, d, &v)
            })
            .collect();
        let sub = g.submodule_generated(&vectors);
        // Weight spaces of G^d are one-dimensional, so the submodule is
        // everything iff each weight occurs in some generator's projection.
        let oracle = g
            .blocks()
            .all(|(w, _)| vectors.iter().any(|v| v[g.block_offset(&w).unwrap()] != 0));
        assert!(oracle);
        assert_eq!(sub.dim(), g.dim(), "n={n} d={d}");
    }
}

#[test]
fn yoneda_and_injective_pairing() {
    for (p, d, exprs) in [
        (2, 2, vec!["S^2", "G^2", "T^2", "frob(1)"]),
        (3, 2, vec!["S^2", "G^2", "T^2"]),
        (3, 3, vec!["frob(1)"]),
    ] {
        let a = alg(p, d, d);
        for e in exprs {
            let f = module(&a, e);
            let expr = parse(e).unwrap();
            for v in 1..=3u32 {
                let gamma = module(&a, &format!("param_sup(G^{d}, {v})"));
                assert_eq!(
                    hom_dim(&gamma, &f) as u128,
                    expr.dim(p, v as usize),
                    "Yoneda {e} v={v}"
                );
                let inj = module(&a, &format!("param_sub(S^{d}, {v})"));
                assert_eq!(
                    hom_dim(&f, &inj) as u128,
                    Expr::dual(expr.clone()).dim(p, v as usize),
                    "pairing {e} v={v}"
                );
            }
        }
    }
}

#[test]
fn parametrization_adjunction() {
    let a = alg(2, 2, 2);
    for (fs, gs) in [("S^2", "G^2"), ("T^2", "S^2"), ("G^2", "frob(1)")] {
        for v in 1..=2 {
            let lhs = hom_dim(&module(&a, &format!("param_sup({fs}, {v})")), &module(&a, gs));
            let rhs = hom_dim(&module(&a, fs), &module(&a, &format!("param_sub({gs}, {v})")));
            assert_eq!(lhs, rhs, "{fs} {gs} v={v}");
        }
    }
}

#[test]
fn untwist_of_hom() {
    let small = alg(2, 4, 2);
    let big = alg(2, 4, 4);
    for (fs, gs) in [("S^2", "S^2"), ("G^2", "S^2"), ("S^2", "G^2"), ("T^2", "G^2")] {
        let lhs = hom_dim(&module(&small, fs), &module(&small, gs));
        let rhs = hom_dim(
            &module(&big, &format!("twist({fs}, 1)")),
            &module(&big, &format!("twist({gs}, 1)")),
        );
        assert_eq!(lhs, rhs, "{fs} {gs}");
    }
}

#[test]
fn exponential_property_dimensions() {
    for p in [2, 3] {
        for (v, w) in [(1usize, 2usize), (2, 2), (1, 3)] {
            for d in 0..=3u32 {
                for head in ["S", "G"] {
                    let e = |k: u32| parse(&format!("{head}^{k}")).unwrap();
                    let lhs = e(d).dim(p, v + w);
                    let rhs: u128 = (0..=d).map(|i| e(i).dim(p, v) * e(d - i).dim(p, w)).sum();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn compose_examples() {
    assert_eq!(parse("compose(S^2, S^2)").unwrap().dim(2, 2), 6);
    let a = alg(2, 2, 2);
    let lhs = module(&a, "compose(S^1, frob(1))");
    assert!(find_isomorphism(&lhs, &module(&a, "frob(1)"), 0).is_some());
    let b = alg(3, 3, 3);
    assert!(find_isomorphism(&module(&b, "compose(S^3, I)"), &module(&b, "S^3"), 0).is_some());
}

#[test]
fn projectives_are_divided_power_products() {
    let a = alg(2, 3, 3);
    for lambda in [Weight(vec![3, 0, 0]), Weight(vec![2, 1, 0]), Weight(vec![1, 1, 1])] {
        let p = FunctorModule::projective(&a, &lambda);
        p.check_action(&all_pairs(&a, 7)).unwrap();
        let recipe = lambda
            .0
            .iter()
            .filter(|&&k| k > 0)
            .map(|k| format!("G^{k}"))
            .collect::<Vec<_>>()
            .join(" (*) ");
        let g = module(&a, &recipe);
        assert!(find_isomorphism(&p, &g, 1).is_some(), "{lambda}");
        for f in ["T^3", "S^2 (*) I", "frob(1) (*) I"] {
            let f = module(&a, f);
            assert_eq!(hom_dim(&p, &f), f.block_dim(&lambda));
        }
    }
}
