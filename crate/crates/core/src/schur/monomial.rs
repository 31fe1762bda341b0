use std::collections::HashMap;

/// A multiset of size `d` over `0..u`, stored as multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    mult: Vec<u8>,
}

impl Monomial {
    pub fn from_multiplicities(mult: Vec<u8>) -> Self {
        Monomial { mult }
    }

    pub fn from_indices(u: usize, indices: &[usize]) -> Self {
        let mut mult = vec![0u8; u];
        for &i in indices {
            mult[i] += 1;
        }
        Monomial { mult }
    }

    pub fn multiplicities(&self) -> &[u8] {
        &self.mult
    }

    pub fn degree(&self) -> usize {
        self.mult.iter().map(|&m| m as usize).sum()
    }

    /// Sorted index list.
    pub fn indices(&self) -> Vec<usize> {
        self.mult
            .iter()
            .enumerate()
            .flat_map(|(i, &m)| std::iter::repeat_n(i, m as usize))
            .collect()
    }
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `C(u + d - 1, d)`, the number of multisets of size `d` from `u` symbols.
pub fn divided_power_dim(u: usize, d: usize) -> usize {
    if d == 0 {
        return 1;
    }
    if u == 0 {
        return 0;
    }
    binomial((u + d - 1) as u64, d as u64) as usize
}

/// Basis of the degree-`d` divided power of a `u`-dimensional space,
/// enumerated lexicographically on sorted index lists.
#[derive(Clone, Debug)]
pub struct DividedPowerSpace {
    u: usize,
    d: usize,
    basis: Vec<Monomial>,
    index: HashMap<Vec<u8>, usize>,
}

impl DividedPowerSpace {
    pub fn new(u: usize, d: usize) -> Self {
        let mut basis = Vec::with_capacity(divided_power_dim(u, d));
        let mut current = Vec::with_capacity(d);
        enumerate_sorted(u, d, 0, &mut current, &mut |idx| {
            basis.push(Monomial::from_indices(u, idx))
        });
        let index = basis
            .iter()
            .enumerate()
            .map(|(k, m)| (m.mult.clone(), k))
            .collect();
        DividedPowerSpace { u, d, basis, index }
    }

    pub fn ambient(&self) -> usize {
        self.u
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn index_of(&self, mult: &[u8]) -> Option<usize> {
        self.index.get(mult).copied()
    }
}

fn enumerate_sorted(
    u: usize,
    remaining: usize,
    start: usize,
    current: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if remaining == 0 {
        emit(current);
        return;
    }
    for i in start..u {
        current.push(i);
        enumerate_sorted(u, remaining - 1, i, current, emit);
        current.pop();
    }
}

/// All exponent vectors of length `u` summing to `d`, in the same canonical
/// order as [`DividedPowerSpace`].
pub fn exponent_vectors(u: usize, d: usize) -> Vec<Vec<u8>> {
    DividedPowerSpace::new(u, d)
        .basis
        .into_iter()
        .map(|m| m.mult)
        .collect()
}
