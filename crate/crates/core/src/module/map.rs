use std::collections::BTreeMap;

use super::FunctorModule;
use crate::error::{Error, Result};
use crate::linalg::{BlockMatrix, FpMatrix};
use crate::schur::Weight;

/// A weight-preserving linear map between modules over the same algebra.
/// Blocks absent from the map are zero.
#[derive(Clone)]
pub struct ModuleMap {
    source: FunctorModule,
    target: FunctorModule,
    blocks: BTreeMap<Weight, FpMatrix>,
    label: String,
}

impl std::fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {:?} -> {:?}", self.label, self.source, self.target)
    }
}

impl ModuleMap {
    pub fn zero(source: &FunctorModule, target: &FunctorModule) -> Self {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            blocks: BTreeMap::new(),
            label: "0".into(),
        }
    }

    pub fn identity(m: &FunctorModule) -> Self {
        let f = m.field();
        let blocks = m
            .blocks()
            .map(|(w, d)| (w, FpMatrix::identity(f, d)))
            .collect();
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            blocks,
            label: "id".into(),
        }
    }

    /// Builds from per-weight blocks (`target_dim x source_dim`).
    pub fn from_blocks(
        source: &FunctorModule,
        target: &FunctorModule,
        blocks: impl IntoIterator<Item = (Weight, FpMatrix)>,
    ) -> Result<Self> {
        let mut out = ModuleMap::zero(source, target);
        for (w, m) in blocks {
            let (r, c) = (target.block_dim(&w), source.block_dim(&w));
            if m.rows() != r || m.cols() != c {
                return Err(Error::DimensionMismatch(format!(
                    "block {w} is {}x{}, expected {r}x{c}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_zero() {
                out.blocks.insert(w, m);
            }
        }
        Ok(out)
    }

    /// Builds from a dense matrix in global coordinates; off-weight entries must vanish.
    pub fn from_dense(source: &FunctorModule, target: &FunctorModule, m: &FpMatrix) -> Result<Self> {
        if m.rows() != target.dim() || m.cols() != source.dim() {
            return Err(Error::DimensionMismatch("dense map shape".into()));
        }
        let sw = source.coordinate_weights();
        let tw = target.coordinate_weights();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if m.get(i, j) != 0 && sw[j] != tw[i] {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i}, {j}) joins weights {} and {}",
                        sw[j], tw[i]
                    )));
                }
            }
        }
        let blocks = source.blocks().filter_map(|(w, d)| {
            let to = target.block_offset(&w)?;
            let from = source.block_offset(&w).unwrap();
            let rows: Vec<usize> = (to..to + target.block_dim(&w)).collect();
            let cols: Vec<usize> = (from..from + d).collect();
            Some((w, m.submatrix(&rows, &cols)))
        });
        Self::from_blocks(source, target, blocks.collect::<Vec<_>>())
    }

    /// Projection onto a quotient built by [`FunctorModule::subquotient`] of `parent`.
    pub fn projection(parent: &FunctorModule, quotient: &FunctorModule) -> Self {
        let (_, parts) = quotient
            .subquotient_parts()
            .expect("quotient is a subquotient");
        let blocks: Vec<(Weight, FpMatrix)> =
            parts.into_iter().map(|(w, _, p)| (w, p.clone())).collect();
        let mut m = Self::from_blocks(parent, quotient, blocks).expect("projector shapes");
        m.label = "proj".into();
        m
    }

    /// Inclusion of a submodule built by [`FunctorModule::subquotient`] with zero `sub`.
    pub fn inclusion(sub: &FunctorModule, parent: &FunctorModule) -> Self {
        let (_, parts) = sub.subquotient_parts().expect("submodule is a subquotient");
        let blocks: Vec<(Weight, FpMatrix)> =
            parts.into_iter().map(|(w, r, _)| (w, r.clone())).collect();
        let mut m = Self::from_blocks(sub, parent, blocks).expect("inclusion shapes");
        m.label = "incl".into();
        m
    }

    /// Map between direct sums given by component maps `(target part, source part, map)`.
    pub fn assemble(
        source: &FunctorModule,
        source_parts: &[FunctorModule],
        target: &FunctorModule,
        target_parts: &[FunctorModule],
        entries: &[(usize, usize, &ModuleMap)],
    ) -> ModuleMap {
        let f = source.field();
        let mut blocks = Vec::new();
        for (w, sd) in source.blocks() {
            let td = target.block_dim(&w);
            if td == 0 {
                continue;
            }
            let offs = |parts: &[FunctorModule]| {
                let mut acc = 0;
                parts
                    .iter()
                    .map(|p| {
                        let o = acc;
                        acc += p.block_dim(&w);
                        o
                    })
                    .collect::<Vec<_>>()
            };
            let (so, to) = (offs(source_parts), offs(target_parts));
            let mut m = FpMatrix::zeros(f, td, sd);
            for &(t, s, map) in entries {
                let b = map.block(&w);
                if b.rows() > 0 && b.cols() > 0 {
                    let cur = m.submatrix(
                        &(to[t]..to[t] + b.rows()).collect::<Vec<_>>(),
                        &(so[s]..so[s] + b.cols()).collect::<Vec<_>>(),
                    );
                    m.put(to[t], so[s], &cur.add(&b));
                }
            }
            blocks.push((w, m));
        }
        ModuleMap::from_blocks(source, target, blocks).expect("assembled shapes")
    }

    /// The same blocks between twisted modules (weights scaled by `q = p^r`).
    pub fn twisted(&self, source: &FunctorModule, target: &FunctorModule, q: u32) -> Result<ModuleMap> {
        let blocks: Vec<(Weight, FpMatrix)> = self
            .blocks
            .iter()
            .map(|(w, b)| (w.scaled(q), b.clone()))
            .collect();
        Ok(ModuleMap::from_blocks(source, target, blocks)?.with_label(format!("twist({})", self.label)))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn source(&self) -> &FunctorModule {
        &self.source
    }

    pub fn target(&self) -> &FunctorModule {
        &self.target
    }

    /// Block at weight `w` (zero when absent).
    pub fn block(&self, w: &Weight) -> FpMatrix {
        self.blocks.get(w).cloned().unwrap_or_else(|| {
            FpMatrix::zeros(
                self.source.field(),
                self.target.block_dim(w),
                self.source.block_dim(w),
            )
        })
    }

    pub fn nonzero_blocks(&self) -> impl Iterator<Item = (&Weight, &FpMatrix)> {
        self.blocks.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.blocks.values().map(|m| m.rank()).sum()
    }

    /// `self o other`.
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        let blocks: Vec<(Weight, FpMatrix)> = other
            .blocks
            .iter()
            .filter_map(|(w, b)| Some((w.clone(), self.blocks.get(w)?.mul_unchecked(b))))
            .collect();
        ModuleMap::from_blocks(&other.source, &self.target, blocks).expect("composable")
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        let mut out = self.clone();
        for (w, b) in &other.blocks {
            let sum = out.block(w).add(b);
            if sum.is_zero() {
                out.blocks.remove(w);
            } else {
                out.blocks.insert(w.clone(), sum);
            }
        }
        out
    }

    pub fn scale(&self, c: u8) -> ModuleMap {
        let blocks: Vec<(Weight, FpMatrix)> =
            self.blocks.iter().map(|(w, b)| (w.clone(), b.scale(c))).collect();
        let mut m = ModuleMap::from_blocks(&self.source, &self.target, blocks).unwrap();
        m.label = self.label.clone();
        m
    }

    pub fn neg(&self) -> ModuleMap {
        self.scale(self.source.field().neg(1))
    }

    pub fn to_dense(&self) -> FpMatrix {
        self.to_block_matrix().to_dense()
    }

    pub fn to_block_matrix(&self) -> BlockMatrix<Weight> {
        let f = self.source.field();
        let rows: Vec<(Weight, usize)> = self.target.blocks().collect();
        let cols: Vec<(Weight, usize)> = self.source.blocks().collect();
        let mut bm = BlockMatrix::new(f, rows, cols);
        for (w, b) in &self.blocks {
            let r = self.target.block_index(w).unwrap();
            let c = self.source.block_index(w).unwrap();
            bm.set_block(r, c, b.clone());
        }
        bm
    }

    /// Checks `f act_source(g) = act_target(g) f` for the algebra generators
    /// (or every basis element when `all` is set).
    pub fn check_equivariant(&self, all: bool) -> Result<()> {
        let alg = self.source.algebra().clone();
        let elems: Vec<u32> = if all {
            (0..alg.dim() as u32).collect()
        } else {
            alg.generators().to_vec()
        };
        for k in elems {
            let (from, to) = (alg.colsum(k), alg.rowsum(k));
            let lhs = self.block(to).mul_unchecked(&self.source.act(k));
            let rhs = self.target.act(k).mul_unchecked(&self.block(from));
            if lhs != rhs {
                return Err(Error::Inconsistent(format!(
                    "{} is not equivariant for basis element {k}",
                    self.label
                )));
            }
        }
        Ok(())
    }
}
