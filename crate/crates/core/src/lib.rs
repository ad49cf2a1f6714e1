//! Exact classification of the number of real solutions of parametric
//! polynomial systems `f = 0, g > 0` through parametric Hermite matrices.

pub mod classify;
pub mod error;
pub mod files;
pub mod gcd;
pub mod groebner;
pub mod hermite;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod quotient;
pub mod ratfn;
pub mod samplepoints;
pub mod signdet;
pub mod upoly;

pub use classify::{
    classify, classify_practical, hermite_determinants, verify_region, Classification, ClassifyOptions, Region, Variant,
};
pub use error::{Error, Result};
pub use files::{gen_random_system, ResultFile, System, SystemFile};
pub use hermite::{first_hermite_matrix, HermiteData, ParametricSymMatrix};
pub use parse::parse_poly;
pub use poly::{compare, Monomial, Ordering, Poly, VarSpace};
pub use samplepoints::{Backend, Completeness};
