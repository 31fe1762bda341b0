use std::collections::HashMap;
use std::sync::Arc;

use super::Expr;
use crate::field::Field;
use crate::ring::{PMat, RElem, TruncRing};
use crate::schur::{exponent_vectors, DividedPowerSpace, Weight};

/// The generic matrix `sum_{m_ij > 0} t_ij E_ij` over the ring truncated at
/// `t^m`, for an `n x n` multiplicity matrix `m`.
pub fn generic_matrix(field: Field, n: usize, m: &[u8]) -> PMat {
    let cells: Vec<usize> = (0..n * n).filter(|&u| m[u] > 0).collect();
    let ring = TruncRing::new(field, cells.iter().map(|&u| m[u]).collect());
    let triples: Vec<(usize, usize, RElem)> = cells
        .iter()
        .enumerate()
        .map(|(k, &u)| (u / n, u % n, ring.var(k)))
        .collect();
    PMat::from_triples(ring, n, n, triples)
}

pub(super) fn weights(e: &Expr, p: u32, w: usize) -> Vec<Weight> {
    match e {
        Expr::Sym(k) | Expr::Div(k) => exponent_vectors(w, *k as usize)
            .into_iter()
            .map(|a| Weight(a.into_iter().map(u32::from).collect()))
            .collect(),
        Expr::Tens(k) => {
            let mut out = vec![Weight::zero(w)];
            for _ in 0..*k {
                out = out
                    .iter()
                    .flat_map(|x| (0..w).map(move |i| x.add(&Weight::unit(w, i, 1))))
                    .collect();
            }
            out
        }
        Expr::Id => (0..w).map(|i| Weight::unit(w, i, 1)).collect(),
        Expr::Frob(r) => (0..w).map(|i| Weight::unit(w, i, p.pow(*r))).collect(),
        Expr::Dual(inner) => weights(inner, p, w),
        Expr::Twist(inner, r) => weights(inner, p, w)
            .into_iter()
            .map(|x| x.scaled(p.pow(*r)))
            .collect(),
        Expr::Tensor(parts) => {
            let mut out = vec![Weight::zero(w)];
            for part in parts {
                let pw = weights(part, p, w);
                out = out
                    .iter()
                    .flat_map(|x| pw.iter().map(move |y| x.add(y)))
                    .collect();
            }
            out
        }
        Expr::Compose(f, g) => {
            let gw = weights(g, p, w);
            weights(f, p, gw.len())
                .into_iter()
                .map(|beta| {
                    let mut acc = vec![0u32; w];
                    for (b, &mult) in beta.0.iter().enumerate() {
                        if mult > 0 {
                            for (a, &x) in acc.iter_mut().zip(&gw[b].0) {
                                *a += mult * x;
                            }
                        }
                    }
                    Weight(acc)
                })
                .collect()
        }
        Expr::ParamSub(inner, v) | Expr::ParamSup(inner, v) => {
            let v = *v as usize;
            weights(inner, p, v * w)
                .into_iter()
                .map(|beta| {
                    let mut acc = vec![0u32; w];
                    for (idx, &x) in beta.0.iter().enumerate() {
                        acc[idx % w] += x;
                    }
                    Weight(acc)
                })
                .collect()
        }
    }
}

impl Expr {
    /// `F(N)` for a square matrix `N` over a truncated ring.
    pub fn eval(&self, p: u32, n: &PMat) -> PMat {
        let ring = n.ring.clone();
        let w = n.rows;
        match self {
            Expr::Sym(k) => eval_sym(n, *k as usize),
            Expr::Div(k) => eval_div(n, *k as usize),
            Expr::Tens(k) => {
                let mut acc = PMat::identity(ring, 1);
                for _ in 0..*k {
                    acc = acc.kron(n);
                }
                acc
            }
            Expr::Id => n.clone(),
            Expr::Frob(r) => {
                let e = (p as u64).pow(*r);
                n.map_entries(|x| ring.pow(x, e))
            }
            Expr::Dual(inner) => inner.eval(p, &n.transpose()).transpose(),
            Expr::Twist(inner, r) => inner.eval(p, &Expr::Frob(*r).eval(p, n)),
            Expr::Tensor(parts) => {
                let mut acc = PMat::identity(ring, 1);
                for part in parts {
                    acc = acc.kron(&part.eval(p, n));
                }
                acc
            }
            Expr::Compose(f, g) => f.eval(p, &g.eval(p, n)),
            Expr::ParamSub(inner, v) | Expr::ParamSup(inner, v) => {
                let v = *v as usize;
                let id = PMat::identity(ring, v);
                let big = id.kron(n);
                debug_assert_eq!(big.rows, v * w);
                inner.eval(p, &big)
            }
        }
    }
}

/// Columns of `N` as sparse lists.
fn columns(n: &PMat) -> Vec<Vec<(u32, RElem)>> {
    n.transpose().entries
}

fn eval_sym(n: &PMat, d: usize) -> PMat {
    let ring = n.ring.clone();
    let w = n.rows;
    let space = DividedPowerSpace::new(w, d);
    let cols = columns(n);
    let mut triples = Vec::new();
    for (ci, alpha) in space.basis().iter().enumerate() {
        // prod_j (sum_i N_ij y_i)^{alpha_j}
        let mut poly: HashMap<Vec<u8>, RElem> = HashMap::new();
        poly.insert(vec![0u8; w], ring.constant(1));
        for (j, &a) in alpha.multiplicities().iter().enumerate() {
            for _ in 0..a {
                poly = mul_linear(&ring, &poly, &cols[j]);
            }
        }
        for (exp, c) in poly {
            let r = space.index_of(&exp).expect("degree preserved");
            triples.push((r, ci, c));
        }
    }
    PMat::from_triples(ring, space.dim(), space.dim(), triples)
}

fn eval_div(n: &PMat, d: usize) -> PMat {
    let ring = n.ring.clone();
    let w = n.rows;
    let space = DividedPowerSpace::new(w, d);
    let cols = columns(n);
    let f = ring.field();
    let mut triples = Vec::new();
    for (ci, alpha) in space.basis().iter().enumerate() {
        let mut poly: HashMap<Vec<u8>, RElem> = HashMap::new();
        poly.insert(vec![0u8; w], ring.constant(1));
        for (j, &a) in alpha.multiplicities().iter().enumerate() {
            if a == 0 {
                continue;
            }
            let factor = divided_power_of_linear(&ring, w, &cols[j], a);
            let mut next: HashMap<Vec<u8>, RElem> = HashMap::new();
            for (e1, c1) in &poly {
                for (e2, c2) in &factor {
                    let mut coeff = 1u8;
                    let mut e = e1.clone();
                    for i in 0..w {
                        coeff = f.mul(coeff, f.binom((e1[i] + e2[i]) as u64, e1[i] as u64));
                        e[i] += e2[i];
                    }
                    if coeff == 0 {
                        continue;
                    }
                    let prod = ring.scale(&ring.mul(c1, c2), coeff);
                    if TruncRing::is_zero(&prod) {
                        continue;
                    }
                    match next.get_mut(&e) {
                        Some(x) => ring.add_assign(x, &prod),
                        None => {
                            next.insert(e, prod);
                        }
                    }
                }
            }
            poly = next;
        }
        for (exp, c) in poly {
            if !TruncRing::is_zero(&c) {
                triples.push((space.index_of(&exp).expect("degree preserved"), ci, c));
            }
        }
    }
    PMat::from_triples(ring, space.dim(), space.dim(), triples)
}

/// Multiplies a polynomial in `y_1..y_w` by the linear form `sum_i col_i y_i`.
fn mul_linear(
    ring: &Arc<TruncRing>,
    poly: &HashMap<Vec<u8>, RElem>,
    col: &[(u32, RElem)],
) -> HashMap<Vec<u8>, RElem> {
    let mut out: HashMap<Vec<u8>, RElem> = HashMap::new();
    for (e, c) in poly {
        for (i, a) in col {
            let prod = ring.mul(c, a);
            if TruncRing::is_zero(&prod) {
                continue;
            }
            let mut e2 = e.clone();
            e2[*i as usize] += 1;
            match out.get_mut(&e2) {
                Some(x) => ring.add_assign(x, &prod),
                None => {
                    out.insert(e2, prod);
                }
            }
        }
    }
    out
}

/// `(sum_i col_i x_i)^{[a]} = sum_{|beta| = a} prod_i col_i^{beta_i} x^{[beta]}`.
fn divided_power_of_linear(
    ring: &Arc<TruncRing>,
    w: usize,
    col: &[(u32, RElem)],
    a: u8,
) -> HashMap<Vec<u8>, RElem> {
    let support: Vec<usize> = col.iter().map(|(i, _)| *i as usize).collect();
    let mut out = HashMap::new();
    for beta in exponent_vectors(support.len(), a as usize) {
        let mut c = ring.constant(1);
        let mut e = vec![0u8; w];
        for (k, &b) in beta.iter().enumerate() {
            if b > 0 {
                c = ring.mul(&c, &ring.pow(&col[k].1, b as u64));
                e[support[k]] = b;
            }
        }
        if !TruncRing::is_zero(&c) {
            out.insert(e, c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::field::Field;
    use crate::schur::SchurAlgebra;

    /// `xi_m . x^alpha` in `S^d` by the closed form
    /// `[colsum = alpha] prod_j multinom(alpha_j; m_{.j}) x^{rowsum}`.
    fn sym_closed(f: Field, n: usize, m: &[u8], alpha: &[u8]) -> Option<(Vec<u8>, u8)> {
        let mut row = vec![0u8; n];
        let mut c = 1u8;
        for j in 0..n {
            let colj: Vec<u64> = (0..n).map(|i| m[i * n + j] as u64).collect();
            if colj.iter().sum::<u64>() != alpha[j] as u64 {
                return None;
            }
            c = f.mul(c, f.multinomial(colj));
        }
        for i in 0..n {
            row[i] = (0..n).map(|j| m[i * n + j]).sum();
        }
        Some((row, c))
    }

    /// Same for `Gamma^d`: `prod_i multinom(rowsum_i; m_{i.})`.
    fn div_closed(f: Field, n: usize, m: &[u8], alpha: &[u8]) -> Option<(Vec<u8>, u8)> {
        let (row, _) = sym_closed(f, n, m, alpha)?;
        let mut c = 1u8;
        for i in 0..n {
            c = f.mul(c, f.multinomial((0..n).map(|j| m[i * n + j] as u64)));
        }
        Some((row, c))
    }

    fn check_closed(
        expr: &str,
        closed: fn(Field, usize, &[u8], &[u8]) -> Option<(Vec<u8>, u8)>,
    ) {
        for p in [2, 3] {
            let f = Field::new(p).unwrap();
            for (n, d) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
                let alg = SchurAlgebra::new(f, n, d).unwrap();
                let e = parse(&expr.replace('d', &d.to_string())).unwrap();
                let space = DividedPowerSpace::new(n, d);
                for k in 0..alg.dim() as u32 {
                    let m = alg.matrix(k);
                    let full = e.eval(p, &generic_matrix(f, n, m));
                    for (ci, alpha) in space.basis().iter().enumerate() {
                        let expect = closed(f, n, m, alpha.multiplicities());
                        for ri in 0..space.dim() {
                            let got = full.get(ri, ci).map(|x| full.ring.top(x)).unwrap_or(0);
                            let want = match &expect {
                                Some((row, c)) if space.index_of(row) == Some(ri) => *c,
                                _ => 0,
                            };
                            assert_eq!(got, want, "{expr} p={p} m={m:?} col={ci} row={ri}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn symmetric_power_matches_closed_form() {
        check_closed("S^d", sym_closed);
    }

    #[test]
    fn divided_power_matches_closed_form() {
        check_closed("G^d", div_closed);
    }

    #[test]
    fn weights_match_dims() {
        for s in [
            "S^2",
            "G^3",
            "T^2 (*) I",
            "compose(S^2, G^2)",
            "twist(S^2, 1)",
            "param_sub(S^2, 2)",
            "dual(T^2)",
        ] {
            let e = parse(s).unwrap();
            for w in 1..4 {
                let ws = e.weights(2, w);
                assert_eq!(ws.len() as u128, e.dim(2, w), "{s} at {w}");
                let deg = e.degree(2) as u32;
                assert!(ws.iter().all(|x| x.total() == deg && x.len() == w));
            }
        }
    }

    #[test]
    fn tensor_weights_follow_union_rule() {
        let e = parse("S^2 (*) S^1").unwrap();
        let ws = e.weights(2, 2);
        let mut got: Vec<Vec<u32>> = ws.into_iter().map(|w| w.0).collect();
        got.sort();
        let mut want = Vec::new();
        for a in [[2, 0], [1, 1], [0, 2]] {
            for b in [[1, 0], [0, 1]] {
                want.push(vec![a[0] + b[0], a[1] + b[1]]);
            }
        }
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn eval_dimensions_agree_with_dim() {
        let f = Field::new(2).unwrap();
        let m = [1u8, 0, 0, 1];
        let t = generic_matrix(f, 2, &m);
        for s in ["compose(S^2, S^2)", "param_sup(G^2, 2)", "T^3", "frob(1) (*) I"] {
            let e = parse(s).unwrap();
            let r = e.eval(2, &t);
            assert_eq!(r.rows as u128, e.dim(2, 2), "{s}");
        }
    }
}
