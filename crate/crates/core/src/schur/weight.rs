use std::fmt;

use serde::{Deserialize, Serialize};

/// Torus weight: one nonnegative entry per coordinate of k^n.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<u32>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    pub fn unit(n: usize, i: usize, scale: u32) -> Self {
        let mut w = vec![0; n];
        w[i] = scale;
        Weight(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        assert_eq!(self.len(), other.len());
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, c: u32) -> Weight {
        Weight(self.0.iter().map(|a| a * c).collect())
    }

    /// Divides every entry by `c` when all are divisible.
    pub fn divided(&self, c: u32) -> Option<Weight> {
        if self.0.iter().all(|a| a % c == 0) {
            Some(Weight(self.0.iter().map(|a| a / c).collect()))
        } else {
            None
        }
    }

    /// Extends with zeros (or truncates trailing zeros) to length `n`.
    pub fn resized(&self, n: usize) -> Option<Weight> {
        if self.0.len() > n && self.0[n..].iter().any(|&a| a != 0) {
            return None;
        }
        let mut v = self.0.clone();
        v.resize(n, 0);
        Some(Weight(v))
    }

    /// Entries sorted decreasingly with zeros dropped.
    pub fn partition(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.0.iter().copied().filter(|&a| a > 0).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|a| a % 2 == 0)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A weight together with its Grosshans height.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightTag {
    pub weight: Weight,
    pub height: i64,
}

impl WeightTag {
    pub fn new(weight: Weight) -> Self {
        let height = grosshans_height(&weight.0);
        WeightTag { weight, height }
    }
}

/// `sum_{i<j} (l_i - l_j)`.
pub fn grosshans_height_pairwise(lambda: &[u32]) -> i64 {
    let mut h = 0i64;
    for i in 0..lambda.len() {
        for j in i + 1..lambda.len() {
            h += lambda[i] as i64 - lambda[j] as i64;
        }
    }
    h
}

/// `sum_i (n - 2i + 1) l_i` with 1-based `i`.
pub fn grosshans_height_linear(lambda: &[u32]) -> i64 {
    let n = lambda.len() as i64;
    lambda
        .iter()
        .enumerate()
        .map(|(i, &l)| (n - 2 * (i as i64 + 1) + 1) * l as i64)
        .sum()
}

/// Grosshans height; both closed forms are evaluated and must agree.
pub fn grosshans_height(lambda: &[u32]) -> i64 {
    let a = grosshans_height_pairwise(lambda);
    let b = grosshans_height_linear(lambda);
    assert_eq!(a, b, "height formulas disagree on {lambda:?}");
    a
}
