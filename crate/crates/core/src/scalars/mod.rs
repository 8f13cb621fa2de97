//! Exact scalars: cyclotomic numbers, rational functions in formal parameters,
//! and the multiplicative eigenvalue group.

mod cyclotomic;
mod eigenvalue;
mod parse;
mod poly;
mod scalar;

pub use cyclotomic::{cyclotomic_poly, euler_phi, Cyclotomic};
pub use eigenvalue::Eigenvalue;
pub use parse::{parse_cyclotomic, parse_eigenvalue, parse_scalar};
pub use poly::{cyclo_cmp, Monomial, Poly, Sym};
pub use scalar::Scalar;

#[allow(unused_imports)]
pub(crate) use cyclotomic::{fmt_rational, solve_columns};


use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("no exact {degree}-th root of {radicand}")]
    IrrationalRoot { radicand: String, degree: u32 },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
