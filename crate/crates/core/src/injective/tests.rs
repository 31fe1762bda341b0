use std::sync::Arc;

use super::*;
use crate::field::Field;
use crate::module::{hom_dim, symmetrization};

fn alg(p: u32, n: usize, d: usize) -> Arc<SchurAlgebra> {
    Arc::new(SchurAlgebra::new(Field::new(p).unwrap(), n, d).unwrap())
}

fn module(a: &Arc<SchurAlgebra>, s: &str) -> FunctorModule {
    FunctorModule::parse(a, s, 100_000).unwrap()
}

fn w(v: &[u32]) -> Weight {
    Weight(v.to_vec())
}

#[test]
fn hulls_are_injective() {
    for (p, n, d) in [(2, 2, 2), (3, 2, 3), (2, 3, 3)] {
        let a = alg(p, n, d);
        let cog = Cogenerators::new(&a);
        for s in ["S^2 (*) I", "G^2 (*) I", "I (*) I (*) I", "dual(S^2) (*) G^1"] {
            let s = if d == 2 { "S^1 (*) G^1" } else { s };
            let m = module(&a, s);
            for strategy in [Strategy::Greedy, Strategy::WeightBasis, Strategy::Shuffled(11)] {
                let (t, iota) = injective_hull(&m, &cog, strategy, None);
                assert_eq!(iota.rank(), m.dim(), "{s} p={p}");
                iota.check_equivariant(false).unwrap();
                assert_eq!(t.module().dim(), iota.target().dim());
            }
        }
    }
}

#[test]
fn greedy_hull_is_no_larger_than_weight_basis() {
    let a = alg(3, 3, 3);
    let cog = Cogenerators::new(&a);
    for s in ["S^2 (*) S^1", "T^3", "G^3", "frob(1)"] {
        let m = module(&a, s);
        let (g, _) = injective_hull(&m, &cog, Strategy::Greedy, None);
        let (b, _) = injective_hull(&m, &cog, Strategy::WeightBasis, None);
        assert!(g.summands().len() <= b.summands().len(), "{s}");
        assert_eq!(b.summands().len(), m.dim());
    }
    // S^3 is cogenerated by its top weight
    let (t, _) = injective_hull(&module(&a, "S^3"), &cog, Strategy::Greedy, None);
    assert_eq!(t.summands(), &[w(&[3, 0, 0])]);
}

#[test]
fn closed_form_hom_matches_solver() {
    let a = alg(2, 3, 3);
    let cog = Cogenerators::new(&a);
    for s in ["T^3", "S^2 (*) G^1", "frob(1) (*) I", "G^3"] {
        let f = module(&a, s);
        for mu in a.weights() {
            let t = InjTerm::new(&cog, vec![mu.clone()]);
            assert_eq!(hom_dim(&f, t.module()), f.block_dim(&mu), "{s} into I{mu}");
        }
    }
}

#[test]
fn extraction_round_trips() {
    let a = alg(3, 2, 3);
    let cog = Cogenerators::new(&a);
    let src = InjTerm::new(&cog, vec![w(&[2, 1]), w(&[3, 0])]);
    let tgt = InjTerm::new(&cog, vec![w(&[1, 2])]);
    for psi in crate::module::hom_space(src.module(), tgt.module()) {
        let c = InjMap::extract(&a, &src, &tgt, &psi).unwrap();
        assert_eq!(c.to_module_map(&a, &src, &tgt).to_dense(), psi.to_dense());
    }
}

#[test]
fn frobenius_twist_coresolution_shape_p2() {
    let a = alg(2, 2, 2);
    let m = module(&a, "frob(1)");
    let res = coresolve(&m, 4, Strategy::Greedy).unwrap();
    let shape: Vec<Vec<Weight>> = res.injectives.summary().into_iter().map(|(_, s)| s).collect();
    assert_eq!(shape[0], vec![w(&[2, 0])]);
    assert_eq!(shape[1], vec![w(&[1, 1])]);
    assert_eq!(shape[2], vec![w(&[2, 0])]);
    let j = res.injectives.complex();
    for i in 1..4 {
        assert_eq!(j.homology_dim(i), 0, "degree {i}");
    }
    assert_eq!(j.homology_dim(0), m.dim());
    assert!(res.augmentation.is_degreewise_injective());
}

#[test]
fn ext_twist_twist() {
    let a = alg(2, 2, 2);
    let m = module(&a, "frob(1)");
    assert_eq!(ext_dims(&m, &m, 4, Strategy::Greedy).unwrap(), vec![1, 0, 1, 0, 0]);
    let a = alg(3, 3, 3);
    let m = module(&a, "frob(1)");
    assert_eq!(ext_dims(&m, &m, 4, Strategy::Greedy).unwrap(), vec![1, 0, 1, 0, 1]);
}

#[test]
fn ext_vanishes_for_projectives_and_injectives() {
    let a = alg(2, 3, 3);
    for f in ["T^3", "S^2 (*) I", "frob(1) (*) I"] {
        let f = module(&a, f);
        let e = ext_dims(&f, &module(&a, "S^3"), 2, Strategy::Greedy).unwrap();
        assert_eq!(e, vec![f.block_dim(&w(&[3, 0, 0])), 0, 0]);
        let e = ext_dims(&module(&a, "G^2 (*) G^1"), &f, 2, Strategy::Greedy).unwrap();
        assert_eq!(e, vec![f.block_dim(&w(&[2, 1, 0])), 0, 0]);
    }
}

#[test]
fn ext_zero_is_hom_and_strategy_independent() {
    let a = alg(2, 2, 2);
    let names = ["S^2", "G^2", "I (*) I", "frob(1)", "dual(frob(1))"];
    for f in names {
        for g in names {
            let (mf, mg) = (module(&a, f), module(&a, g));
            let e1 = ext_dims(&mf, &mg, 3, Strategy::Greedy).unwrap();
            let e2 = ext_dims(&mf, &mg, 3, Strategy::WeightBasis).unwrap();
            assert_eq!(e1, e2, "Ext({f}, {g})");
            let e3 = ext_dims(&mf, &mg, 3, Strategy::Shuffled(5)).unwrap();
            assert_eq!(e1, e3, "shuffled Ext({f}, {g})");
            assert_eq!(e1[0], hom_dim(&mf, &mg), "Hom({f}, {g})");
        }
    }
}

#[test]
fn restricted_last_step_agrees_with_full() {
    let a = alg(3, 3, 3);
    let f = module(&a, "frob(1)");
    let g = module(&a, "S^2 (*) I");
    let full = coresolve(&g, 4, Strategy::Greedy).unwrap();
    let h = full.injectives.hom_from(&f);
    let direct: Vec<usize> = (0..=3).map(|i| h.homology_dim(i)).collect();
    assert_eq!(ext_dims(&f, &g, 3, Strategy::Greedy).unwrap(), direct);
}

#[test]
fn complex_coresolution_preserves_weight_cohomology() {
    let a = alg(2, 2, 2);
    let alpha = symmetrization(&a, 1000).unwrap();
    let c = Complex::from_map(&alpha, 0).unwrap();
    let cog = Cogenerators::new(&a);
    let res = coresolve_complex(&c, 4, CoresolveOptions::default(), &cog, None).unwrap();
    assert!(res.augmentation.is_degreewise_injective());
    let j = res.injectives.complex();
    for i in -1..res.top {
        for lambda in a.weights() {
            assert_eq!(
                j.homology_dim_at(i, &lambda),
                c.homology_dim_at(i, &lambda),
                "H^{i} at {lambda}"
            );
        }
    }
    // Hom from the projective G^lambda reads off weight spaces.
    let gam = module(&a, "G^1 (*) G^1");
    let h = res.injectives.hom_from(&gam);
    for i in 0..res.top {
        assert_eq!(h.homology_dim(i), c.homology_dim_at(i, &w(&[1, 1])));
    }
}

#[test]
fn ext_table_serializes() {
    let a = alg(2, 2, 2);
    let m = module(&a, "frob(1)");
    let t = ext_table(&m, &m, 2).unwrap();
    let s = serde_json::to_string(&t).unwrap();
    assert!(s.contains("\"F\":\"frob(1)\""));
    let back: ExtTable = serde_json::from_str(&s).unwrap();
    assert_eq!(back, t);
}

#[test]
fn shuffled_coresolutions_agree_at_p3() {
    let a = alg(3, 2, 3);
    let names = ["S^3", "G^3", "frob(1)", "T^3"];
    for f in names {
        for g in names {
            let (mf, mg) = (module(&a, f), module(&a, g));
            let e1 = ext_dims(&mf, &mg, 3, Strategy::Greedy).unwrap();
            for seed in [1, 2] {
                assert_eq!(e1, ext_dims(&mf, &mg, 3, Strategy::Shuffled(seed)).unwrap(), "Ext({f}, {g})");
            }
        }
    }
}
