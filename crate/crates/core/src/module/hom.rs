use super::{FunctorModule, ModuleMap};
use crate::linalg::{Echelon, FpMatrix};
use crate::schur::Weight;

struct Unknowns {
    weights: Vec<Weight>,
    offsets: Vec<usize>,
    shapes: Vec<(usize, usize)>,
    total: usize,
}

impl Unknowns {
    fn new(m: &FunctorModule, n: &FunctorModule) -> Self {
        let mut weights = Vec::new();
        let mut offsets = Vec::new();
        let mut shapes = Vec::new();
        let mut total = 0;
        for (w, sd) in m.blocks() {
            let td = n.block_dim(&w);
            if td == 0 {
                continue;
            }
            weights.push(w);
            offsets.push(total);
            shapes.push((td, sd));
            total += td * sd;
        }
        Unknowns {
            weights,
            offsets,
            shapes,
            total,
        }
    }

    fn find(&self, w: &Weight) -> Option<usize> {
        self.weights.binary_search(w).ok()
    }
}

/// Basis of `Hom(M, N)`: unknowns only between equal-weight blocks, one
/// equation block per algebra generator, streamed into an incremental echelon.
pub fn hom_space(m: &FunctorModule, n: &FunctorModule) -> Vec<ModuleMap> {
    assert!(m.same_algebra(n.algebra()), "modules over different algebras");
    let f = m.field();
    let alg = m.algebra().clone();
    let u = Unknowns::new(m, n);
    if u.total == 0 {
        return Vec::new();
    }
    let mut ech = Echelon::new(f, u.total);
    let mut row = vec![0u8; u.total];
    'gens: for &g in alg.generators() {
        if alg.is_diagonal(g) {
            continue;
        }
        let (a, b) = (alg.colsum(g), alg.rowsum(g));
        let (ia, ib) = (u.find(a), u.find(b));
        if ia.is_none() && ib.is_none() {
            continue;
        }
        let (rows, cols) = (n.block_dim(b), m.block_dim(a));
        if rows == 0 || cols == 0 {
            continue;
        }
        let am = m.act(g);
        let an = n.act(g);
        for r in 0..rows {
            for c in 0..cols {
                row.iter_mut().for_each(|x| *x = 0);
                let mut nonzero = false;
                if let Some(ib) = ib {
                    let (_, sd) = u.shapes[ib];
                    let off = u.offsets[ib];
                    for s in 0..sd {
                        let v = am.get(s, c);
                        if v != 0 {
                            row[off + r * sd + s] = f.add(row[off + r * sd + s], v);
                            nonzero = true;
                        }
                    }
                }
                if let Some(ia) = ia {
                    let (td, sd) = u.shapes[ia];
                    let off = u.offsets[ia];
                    for t in 0..td {
                        let v = an.get(r, t);
                        if v != 0 {
                            row[off + t * sd + c] = f.sub(row[off + t * sd + c], v);
                            nonzero = true;
                        }
                    }
                }
                if nonzero {
                    ech.insert(&row);
                    if ech.rank() == u.total {
                        break 'gens;
                    }
                }
            }
        }
    }
    let (rows, _) = ech.rref_rows();
    let system = if rows.is_empty() {
        FpMatrix::zeros(f, 0, u.total)
    } else {
        FpMatrix::from_row_vectors(f, u.total, &rows)
    };
    let kernel = system.kernel_basis();
    (0..kernel.cols())
        .map(|j| {
            let x = kernel.column(j);
            let blocks: Vec<(Weight, FpMatrix)> = u
                .weights
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    let (td, sd) = u.shapes[i];
                    let mut b = FpMatrix::zeros(f, td, sd);
                    for r in 0..td {
                        for c in 0..sd {
                            b.set(r, c, x[u.offsets[i] + r * sd + c]);
                        }
                    }
                    (w.clone(), b)
                })
                .collect();
            ModuleMap::from_blocks(m, n, blocks).expect("solution shapes")
        })
        .collect()
}

pub fn hom_dim(m: &FunctorModule, n: &FunctorModule) -> usize {
    hom_space(m, n).len()
}

/// Searches `Hom(M, N)` for an isomorphism: basis elements first, then seeded
/// random combinations.
pub fn find_isomorphism(m: &FunctorModule, n: &FunctorModule, seed: u64) -> Option<ModuleMap> {
    use rand::{Rng, SeedableRng};
    if m.dim() != n.dim() || m.blocks().any(|(w, d)| n.block_dim(&w) != d) {
        return None;
    }
    let is_iso = |f: &ModuleMap| f.rank() == m.dim();
    if m.dim() == 0 {
        return Some(ModuleMap::zero(m, n));
    }
    let basis = hom_space(m, n);
    if let Some(f) = basis.iter().find(|f| is_iso(f)) {
        return Some(f.clone());
    }
    if basis.is_empty() {
        return None;
    }
    let p = m.field().p();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let mut acc = ModuleMap::zero(m, n);
        for b in &basis {
            let c = rng.gen_range(0..p) as u8;
            if c != 0 {
                acc = acc.add(&b.scale(c));
            }
        }
        if is_iso(&acc) {
            return Some(acc);
        }
    }
    None
}
