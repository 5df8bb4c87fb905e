//! Exact and numeric computer algebra for the quantum group `U_q(sl2)` and its
//! h-adic counterpart.

pub mod audit;
pub mod error;
pub mod expr;
pub mod linalg;
pub mod numerics;
pub mod pbw;
pub mod repkit;
pub mod witness;
pub mod scalars;
pub mod verma;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use scalars::{ExtendedWeight, Field, NumericScalar, QPoly, QScalar};
