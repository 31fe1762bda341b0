use super::*;
use crate::expr::parse;
use crate::injective::{coresolve, Strategy};
use crate::module::symmetrization;
use crate::schur::binomial;

fn alg(p: u32, n: usize, d: usize) -> Arc<SchurAlgebra> {
    Arc::new(SchurAlgebra::new(Field::new(p).unwrap(), n, d).unwrap())
}

fn module(a: &Arc<SchurAlgebra>, s: &str) -> FunctorModule {
    FunctorModule::parse(a, s, 100_000).unwrap()
}

#[test]
fn standard_coresolution_small_cases() {
    // S^2 -> S^1 (x) S^1 -> S^2 over one variable: 1 -> 1 -> 1
    let r = StandardCoresolution::new(2, 1, 1).unwrap();
    assert_eq!((0..3).map(|i| r.complex.dim(i)).collect::<Vec<_>>(), vec![1, 1, 1]);
    assert_eq!(r.complex.homology_dim(0), 1);
    let r = StandardCoresolution::new(2, 1, 2).unwrap();
    assert_eq!((0..3).map(|i| r.complex.dim(i)).collect::<Vec<_>>(), vec![3, 4, 3]);
    assert_eq!(r.complex.homology_dim(0), 2);
    let r = StandardCoresolution::new(2, 2, 2).unwrap();
    assert_eq!(r.complex.homology_dim(0), 3);
}

#[test]
fn standard_coresolution_is_exact_in_positive_degrees() {
    for d in 1..=3 {
        for w in 1..=3 {
            let r = StandardCoresolution::new(2, d, w).unwrap();
            r.check().unwrap();
            let h0 = r.complex.homology_dim(0);
            assert_eq!(h0 as u64, binomial((w + d - 1) as u64, d as u64), "d={d} w={w}");
        }
    }
}

#[test]
fn standard_coresolution_rejects_odd_primes() {
    for p in [3, 5] {
        match StandardCoresolution::new(p, 1, 1) {
            Err(Error::Unsupported(msg)) => assert!(msg.contains("characteristic 2")),
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn linear_part_is_the_nilpotent_block() {
    let f = Field::new(2).unwrap();
    for w in 1..=3 {
        let mut expect = FpMatrix::zeros(f, 2 * w, 2 * w);
        for k in 0..w {
            expect.set(w + k, k, 1);
        }
        assert_eq!(linear_part(w), expect);
    }
}

#[test]
fn derivation_satisfies_leibniz() {
    for w in 1..=3 {
        check_leibniz(w, 200, w as u64).unwrap();
    }
}

/// Weight multiplicities of `G^(1)(k^{2n})` grouped by `(second half total, V-weight)`,
/// counted from scratch for the battery.
fn battery_weight_spaces(g: &str, n: usize) -> BTreeMap<(usize, Vec<u32>), usize> {
    // weights of G on k^{2n} listed as exponent vectors of basis elements
    let u = 2 * n;
    let mut basis: Vec<Vec<u32>> = Vec::new();
    match g {
        "I" => basis.extend((0..u).map(|k| (0..u).map(|j| (j == k) as u32).collect())),
        "S^2" | "G^2" => {
            for a in 0..u {
                for b in a..u {
                    let mut v = vec![0; u];
                    v[a] += 1;
                    v[b] += 1;
                    basis.push(v);
                }
            }
        }
        "T^2" => {
            for a in 0..u {
                for b in 0..u {
                    let mut v = vec![0; u];
                    v[a] += 1;
                    v[b] += 1;
                    basis.push(v);
                }
            }
        }
        _ => unreachable!(),
    }
    let mut out = BTreeMap::new();
    for v in basis {
        let deg = 2 * v[n..].iter().sum::<u32>() as usize;
        let vw: Vec<u32> = (0..n).map(|k| 2 * (v[k] + v[n + k])).collect();
        *out.entry((deg, vw)).or_default() += 1;
    }
    out
}

#[test]
fn formality_battery_degree_one() {
    let report = formality_verify_p2r1(&parse("I").unwrap(), 1, 2, 100_000).unwrap();
    assert_eq!(report.verdict, Verdict::EvenConcentration);
    let dims: Vec<usize> = report.degrees.iter().map(|r| r.dim).collect();
    assert_eq!(dims, vec![2, 0, 2]);
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["G"], "I");
    assert_eq!(json["verdict"], "even-concentration");
    assert_eq!(json["certificate"]["strategy"], "even-concentration");
}

#[test]
fn formality_battery_degree_two() {
    for g in ["S^2", "G^2", "T^2"] {
        let report = formality_verify_p2r1(&parse(g).unwrap(), 2, 4, 100_000).unwrap();
        assert!(report.odd_degrees_vanish, "{g}");
        assert_eq!(report.verdict, Verdict::EvenConcentration, "{g}");
        let oracle = battery_weight_spaces(g, 4);
        let mut got = BTreeMap::new();
        for r in &report.degrees {
            for wc in &r.weights {
                got.insert((r.i, wc.weight.clone()), wc.dim);
            }
        }
        assert_eq!(got, oracle, "{g}");
    }
    // S^2(k^4 + k^4) graded: S^2 k^4, k^4 (x) k^4, S^2 k^4
    let report = formality_verify_p2r1(&parse("S^2").unwrap(), 2, 4, 100_000).unwrap();
    let dims: Vec<usize> = report.degrees.iter().map(|r| r.dim).collect();
    assert_eq!(dims, vec![10, 0, 16, 0, 10]);
}

fn adjoint_of_coresolution(small: &Arc<SchurAlgebra>, big: &Arc<SchurAlgebra>, g: &str, r: u32) -> Complex {
    let m = module(small, g).twisted(big, r).unwrap();
    let res = coresolve(&m, 12, Strategy::Greedy).unwrap();
    assert!(res.complete);
    twist_adjoint(small, &res.injectives, r).unwrap()
}

#[test]
fn twist_adjoint_terms_are_modules_and_match_hom_dimensions() {
    let small = alg(2, 2, 1);
    let big = alg(2, 2, 2);
    let m = module(&small, "I").twisted(&big, 1).unwrap();
    let res = coresolve(&m, 12, Strategy::Greedy).unwrap();
    let k = twist_adjoint(&small, &res.injectives, 1).unwrap();
    k.check_equivariant().unwrap();
    for i in k.degrees() {
        let t = res.injectives.term(i).unwrap();
        k.term(i).check_action(&[(0, 1), (1, 2), (2, 1), (1, 0)]).unwrap();
        for l in small.weights() {
            let p = FunctorModule::projective(&small, &l).twisted(&big, 1).unwrap();
            assert_eq!(k.term(i).block_dim(&l), hom_dim(&p, t.module()), "K^{i} at {l}");
        }
    }
}

#[test]
fn twist_adjoint_of_the_twist_has_graded_homology() {
    // K(I^(1)) has homology I in degrees 0 and 2
    let small = alg(2, 2, 1);
    let big = alg(2, 2, 2);
    let k = adjoint_of_coresolution(&small, &big, "I", 1);
    assert_eq!(k.homology_dims(), BTreeMap::from([(0, 2), (2, 2)]));
    let h2 = k.homology(2);
    assert!(find_iso(&h2, &module(&small, "I")));
}

fn find_iso(a: &FunctorModule, b: &FunctorModule) -> bool {
    crate::module::find_isomorphism(a, b, 3).is_some()
}

#[test]
fn twist_adjoint_without_twist_is_the_identity() {
    let a = alg(3, 2, 2);
    let res = coresolve(&module(&a, "G^2"), 12, Strategy::Greedy).unwrap();
    let k = twist_adjoint(&a, &res.injectives, 0).unwrap();
    let j = res.injectives.complex();
    for i in j.degrees() {
        assert!(find_iso(&k.term(i), &j.term(i)), "degree {i}");
    }
    assert_eq!(k.homology_dims(), BTreeMap::from([(0, 3)]));
}

#[test]
fn even_concentration() {
    let a = alg(2, 2, 2);
    let s = module(&a, "S^2");
    let c = Complex::single(&s, 0)
        .direct_sum(&Complex::single(&s, 2))
        .direct_sum(&Complex::single(&s, 4));
    let cert = formality_check_even(&c).unwrap();
    cert.recheck(&c).unwrap();
    let alpha = symmetrization(&a, 1000).unwrap();
    assert!(formality_check_even(&Complex::from_map(&alpha, 0).unwrap()).is_none());
    let dims = BTreeMap::from([(0, 1), (1, 0), (2, 4)]);
    assert!(formality_check_even_dims(&dims).is_some());
}

fn multiplication(a: &Arc<SchurAlgebra>) -> ModuleMap {
    let maps = crate::module::hom_space(&module(a, "T^2"), &module(a, "S^2"));
    assert_eq!(maps.len(), 1);
    maps[0].clone()
}

#[test]
fn untwisting_certificates() {
    let a = alg(2, 2, 2);
    let opts = CoresolveOptions::default();
    // zero differential
    let c = Complex::single(&module(&a, "S^2"), 0).direct_sum(&Complex::single(&module(&a, "G^2"), 1));
    match untwist_formality_certificate(&c, 8, opts).unwrap() {
        UntwistOutcome::Certified(cert) => assert_eq!(cert.strategy(), "zero-differential"),
        other => panic!("{other:?}"),
    }
    // one homology degree
    let mult = Complex::from_map(&multiplication(&a), 0).unwrap();
    match untwist_formality_certificate(&mult, 8, opts).unwrap() {
        UntwistOutcome::Certified(cert) => {
            assert_eq!(cert.strategy(), "single-homology-degree");
            cert.recheck(&mult).unwrap();
        }
        other => panic!("{other:?}"),
    }
    // two homology degrees, split
    let c = mult.direct_sum(&Complex::single(&module(&a, "G^2"), 1));
    match untwist_formality_certificate(&c, 8, opts).unwrap() {
        UntwistOutcome::Certified(cert) => {
            assert_eq!(cert.strategy(), "untwist-splitting");
            cert.recheck(&c).unwrap();
            let json = serde_json::to_value(&cert).unwrap();
            assert_eq!(json["steps"][0]["degree"], 0);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn symmetrization_complex_gets_no_certificate() {
    let a = alg(2, 2, 2);
    let alpha = symmetrization(&a, 1000).unwrap();
    let c = Complex::from_map(&alpha, -1).unwrap();
    match untwist_formality_certificate(&c, 8, CoresolveOptions::default()).unwrap() {
        UntwistOutcome::Failed { stage, degree, reason } => {
            assert_eq!((stage, degree), (0, -1));
            assert!(reason.contains("misses the augmentation"), "{reason}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn twist_adjoint_of_twisted_square_is_graded() {
    let small = alg(2, 4, 2);
    let big = alg(2, 4, 4);
    for (g, dims) in [("S^2", [10, 16, 10]), ("G^2", [10, 16, 10]), ("T^2", [16, 32, 16])] {
        let k = adjoint_of_coresolution(&small, &big, g, 1);
        assert_eq!(
            k.homology_dims(),
            BTreeMap::from([(0, dims[0]), (2, dims[1]), (4, dims[2])]),
            "{g}"
        );
    }
}
