//! Functor expressions: the recipe language shared by the library and the CLI.

mod eval;
mod parse;

use std::fmt;

pub use eval::generic_matrix;
pub use parse::parse;

use crate::error::{Error, Result};
use crate::schur::Weight;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    /// Symmetric power `S^k`.
    Sym(u32),
    /// Divided power `G^k`.
    Div(u32),
    /// Tensor power `T^k`.
    Tens(u32),
    /// Identity functor.
    Id,
    /// Frobenius twist `I^{(r)}`.
    Frob(u32),
    Dual(Box<Expr>),
    Twist(Box<Expr>, u32),
    /// `compose(F, G) = F o G`.
    Compose(Box<Expr>, Box<Expr>),
    /// Tensor product of at least two factors, none of them a tensor product.
    Tensor(Vec<Expr>),
    ParamSub(Box<Expr>, u32),
    ParamSup(Box<Expr>, u32),
}

impl Expr {
    pub fn dual(e: Expr) -> Expr {
        Expr::Dual(Box::new(e))
    }

    pub fn twist(e: Expr, r: u32) -> Expr {
        Expr::Twist(Box::new(e), r)
    }

    pub fn compose(f: Expr, g: Expr) -> Expr {
        Expr::Compose(Box::new(f), Box::new(g))
    }

    pub fn param_sub(e: Expr, v: u32) -> Expr {
        Expr::ParamSub(Box::new(e), v)
    }

    pub fn param_sup(e: Expr, v: u32) -> Expr {
        Expr::ParamSup(Box::new(e), v)
    }

    /// Tensor product, flattening nested products.
    pub fn tensor(a: Expr, b: Expr) -> Expr {
        let mut parts = Vec::new();
        for e in [a, b] {
            match e {
                Expr::Tensor(v) => parts.extend(v),
                other => parts.push(other),
            }
        }
        Expr::Tensor(parts)
    }

    pub fn tensor_all(factors: Vec<Expr>) -> Expr {
        let mut it = factors.into_iter();
        let first = it.next().expect("at least one factor");
        it.fold(first, Expr::tensor)
    }

    pub fn degree(&self, p: u32) -> u64 {
        self.checked_degree(p).unwrap_or(u64::MAX)
    }

    pub fn checked_degree(&self, p: u32) -> Option<u64> {
        let p = p as u64;
        Some(match self {
            Expr::Sym(k) | Expr::Div(k) | Expr::Tens(k) => *k as u64,
            Expr::Id => 1,
            Expr::Frob(r) => p.checked_pow(*r)?,
            Expr::Dual(e) | Expr::ParamSub(e, _) | Expr::ParamSup(e, _) => e.checked_degree(p as u32)?,
            Expr::Twist(e, r) => e.checked_degree(p as u32)?.checked_mul(p.checked_pow(*r)?)?,
            Expr::Compose(f, g) => f
                .checked_degree(p as u32)?
                .checked_mul(g.checked_degree(p as u32)?)?,
            Expr::Tensor(v) => v
                .iter()
                .try_fold(0u64, |acc, e| acc.checked_add(e.checked_degree(p as u32)?))?,
        })
    }

    /// Errors when the degree exceeds `max`.
    pub fn check_degree(&self, p: u32, max: u64) -> Result<u64> {
        match self.checked_degree(p) {
            Some(d) if d <= max => Ok(d),
            d => Err(Error::Guard {
                what: format!("degree of {self}"),
                dim: d.map(|d| d as usize).unwrap_or(usize::MAX),
                bound: max as usize,
            }),
        }
    }

    /// `dim F(k^w)`, saturating.
    pub fn dim(&self, p: u32, w: usize) -> u128 {
        let w128 = w as u128;
        match self {
            Expr::Sym(k) | Expr::Div(k) => multiset_count(w128, *k as u128),
            Expr::Tens(k) => w128.saturating_pow(*k),
            Expr::Id | Expr::Frob(_) => w128,
            Expr::Dual(e) => e.dim(p, w),
            Expr::Twist(e, _) => e.dim(p, w),
            Expr::Compose(f, g) => {
                let inner = g.dim(p, w);
                if inner > usize::MAX as u128 {
                    u128::MAX
                } else {
                    f.dim(p, inner as usize)
                }
            }
            Expr::Tensor(v) => v.iter().fold(1u128, |acc, e| acc.saturating_mul(e.dim(p, w))),
            Expr::ParamSub(e, v) | Expr::ParamSup(e, v) => e.dim(p, w.saturating_mul(*v as usize)),
        }
    }

    /// Largest intermediate space dimension met while evaluating at `k^w`.
    pub fn peak_dim(&self, p: u32, w: usize) -> u128 {
        let own = self.dim(p, w);
        let inner = match self {
            Expr::Dual(e) | Expr::Twist(e, _) => e.peak_dim(p, w),
            Expr::Compose(f, g) => {
                let gd = g.dim(p, w);
                let fpk = if gd > usize::MAX as u128 {
                    u128::MAX
                } else {
                    f.peak_dim(p, gd as usize)
                };
                g.peak_dim(p, w).max(fpk)
            }
            Expr::Tensor(v) => v.iter().map(|e| e.peak_dim(p, w)).max().unwrap_or(0),
            Expr::ParamSub(e, v) | Expr::ParamSup(e, v) => {
                e.peak_dim(p, w.saturating_mul(*v as usize))
            }
            _ => 0,
        };
        own.max(inner)
    }

    /// Torus weights of the canonical basis of `F(k^w)`.
    pub fn weights(&self, p: u32, w: usize) -> Vec<Weight> {
        eval::weights(self, p, w)
    }

    /// Whether evaluation at `k^w` stays under `bound`.
    pub fn check_size(&self, p: u32, w: usize, bound: usize) -> Result<()> {
        let peak = self.peak_dim(p, w);
        if peak > bound as u128 {
            return Err(Error::Guard {
                what: format!("evaluation of {self} at k^{w}"),
                dim: peak.min(usize::MAX as u128) as usize,
                bound,
            });
        }
        Ok(())
    }
}

fn multiset_count(u: u128, d: u128) -> u128 {
    if d == 0 {
        return 1;
    }
    if u == 0 {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..d {
        acc = match acc.checked_mul(u + i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Sym(k) => write!(f, "S^{k}"),
            Expr::Div(k) => write!(f, "G^{k}"),
            Expr::Tens(k) => write!(f, "T^{k}"),
            Expr::Id => write!(f, "I"),
            Expr::Frob(r) => write!(f, "frob({r})"),
            Expr::Dual(e) => write!(f, "dual({e})"),
            Expr::Twist(e, r) => write!(f, "twist({e}, {r})"),
            Expr::Compose(a, b) => write!(f, "compose({a}, {b})"),
            Expr::ParamSub(e, v) => write!(f, "param_sub({e}, {v})"),
            Expr::ParamSup(e, v) => write!(f, "param_sup({e}, {v})"),
            Expr::Tensor(v) => {
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " (*) ")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
        }
    }
}
