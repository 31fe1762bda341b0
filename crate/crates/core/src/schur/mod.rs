mod algebra;
pub mod cache;
mod monomial;
mod weight;

pub use algebra::{contingency_tables, to_sparse, SchurAlgebra, SparseElem};
pub use monomial::{
    binomial, divided_power_dim, exponent_vectors, DividedPowerSpace, Monomial,
};
pub use weight::{
    grosshans_height, grosshans_height_linear, grosshans_height_pairwise, Weight, WeightTag,
};
