use std::collections::BTreeMap;

use super::FpMatrix;
use crate::field::Field;

/// Matrix partitioned into labeled row and column blocks. Absent blocks are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatrix<L: Ord + Clone> {
    field: Field,
    row_blocks: Vec<(L, usize)>,
    col_blocks: Vec<(L, usize)>,
    blocks: BTreeMap<(usize, usize), FpMatrix>,
}

impl<L: Ord + Clone> BlockMatrix<L> {
    pub fn new(field: Field, row_blocks: Vec<(L, usize)>, col_blocks: Vec<(L, usize)>) -> Self {
        BlockMatrix {
            field,
            row_blocks,
            col_blocks,
            blocks: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn row_blocks(&self) -> &[(L, usize)] {
        &self.row_blocks
    }

    pub fn col_blocks(&self) -> &[(L, usize)] {
        &self.col_blocks
    }

    pub fn set_block(&mut self, r: usize, c: usize, m: FpMatrix) {
        assert_eq!(m.rows(), self.row_blocks[r].1, "row block size");
        assert_eq!(m.cols(), self.col_blocks[c].1, "column block size");
        if m.is_zero() {
            self.blocks.remove(&(r, c));
        } else {
            self.blocks.insert((r, c), m);
        }
    }

    pub fn block(&self, r: usize, c: usize) -> Option<&FpMatrix> {
        self.blocks.get(&(r, c))
    }

    pub fn nonzero_blocks(&self) -> impl Iterator<Item = (&(usize, usize), &FpMatrix)> {
        self.blocks.iter()
    }

    pub fn rows(&self) -> usize {
        self.row_blocks.iter().map(|b| b.1).sum()
    }

    pub fn cols(&self) -> usize {
        self.col_blocks.iter().map(|b| b.1).sum()
    }

    fn offsets(blocks: &[(L, usize)]) -> Vec<usize> {
        let mut acc = 0;
        blocks
            .iter()
            .map(|b| {
                let o = acc;
                acc += b.1;
                o
            })
            .collect()
    }

    pub fn to_dense(&self) -> FpMatrix {
        let ro = Self::offsets(&self.row_blocks);
        let co = Self::offsets(&self.col_blocks);
        let mut out = FpMatrix::zeros(self.field, self.rows(), self.cols());
        for (&(r, c), m) in &self.blocks {
            out.put(ro[r], co[c], m);
        }
        out
    }

    /// Rank computed per connected component of the block pattern.
    pub fn rank(&self) -> usize {
        let nr = self.row_blocks.len();
        let nc = self.col_blocks.len();
        // union-find over row blocks [0, nr) and column blocks [nr, nr + nc)
        let mut parent: Vec<usize> = (0..nr + nc).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(r, c) in self.blocks.keys() {
            let (a, b) = (find(&mut parent, r), find(&mut parent, nr + c));
            if a != b {
                parent[a] = b;
            }
        }
        let mut components: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for &(r, c) in self.blocks.keys() {
            let root = find(&mut parent, r);
            let entry = components.entry(root).or_default();
            if !entry.0.contains(&r) {
                entry.0.push(r);
            }
            if !entry.1.contains(&c) {
                entry.1.push(c);
            }
        }
        components
            .values()
            .map(|(rs, cs)| {
                if rs.len() == 1 && cs.len() == 1 {
                    return self.blocks[&(rs[0], cs[0])].rank();
                }
                let rsz: Vec<usize> = rs.iter().map(|&r| self.row_blocks[r].1).collect();
                let csz: Vec<usize> = cs.iter().map(|&c| self.col_blocks[c].1).collect();
                let mut dense =
                    FpMatrix::zeros(self.field, rsz.iter().sum(), csz.iter().sum());
                let mut ro = 0;
                for (i, &r) in rs.iter().enumerate() {
                    let mut co = 0;
                    for (j, &c) in cs.iter().enumerate() {
                        if let Some(m) = self.blocks.get(&(r, c)) {
                            dense.put(ro, co, m);
                        }
                        co += csz[j];
                    }
                    ro += rsz[i];
                }
                dense.rank()
            })
            .sum()
    }
}
