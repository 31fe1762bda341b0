//! Exact computations with strict polynomial functors over prime fields.
//!
//! Functors of degree `d` are realized as weight-graded modules over the
//! Schur algebra `S(n, d)` with `n >= d`. On top of that sit complexes,
//! injective coresolutions built from summands of `S^d_V`, Ext groups,
//! hyper-Ext spectral sequences and the characteristic-two formality checks.

pub mod complex;
pub mod error;
pub mod expr;
pub mod field;
pub mod formality;
pub mod injective;
pub mod linalg;
pub mod module;
pub mod ring;
pub mod schur;
pub mod spectral;
pub mod suites;

pub use error::{Error, Result};
pub use field::{Field, FpScalar};
pub use linalg::{quotient_basis, BlockMatrix, Echelon, FpMatrix};
