//! Finite-dimensional Hopf algebras, comodule algebras and their Serre functors,
//! computed with exact arithmetic over cyclotomic fields.

pub mod field;
pub mod cyclo;
pub mod linalg;
pub mod algebra;
pub mod hopf;
pub mod module;
pub mod comodule;
pub mod presentation;
pub mod catalog;
pub mod report;
pub mod ihom;
pub mod scf;
pub mod explicit;

pub use cyclo::Cyclo;
pub use field::{CyclotomicField, Field};
pub use linalg::{Matrix, Subspace};

pub type Rational = num_rational::BigRational;
pub type Q = Cyclo<1>;
pub type Q3 = Cyclo<3>;
pub type Q4 = Cyclo<4>;
pub type Q5 = Cyclo<5>;
pub type Q6 = Cyclo<6>;
pub type Q8 = Cyclo<8>;
pub type Q12 = Cyclo<12>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("axiom failure: {0}")]
    Axiom(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular matrix")]
    Singular,
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("search undecided after {0} trials")]
    Undecided(usize),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
