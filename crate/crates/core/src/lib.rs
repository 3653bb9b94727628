//! Kolchin polynomials and the small symbolic toolkit around them.
//!
//! The crate is organised bottom-up:
//!
//! * [`binomial_poly`] exact integer-valued polynomials in the binomial basis,
//! * [`lattice`] derivative monomials, orderly rankings and leader-set counting,
//! * [`invariants`] differential type / typical differential dimension calculus,
//! * [`poly`] and [`ratfun`] the rational-function coefficient field,
//! * [`operator`] linear differential operators and factorization checks,
//! * [`parse`] the operator expression grammar,
//! * [`unipotent`] upper-unitriangular groups with coordinate constraints,
//! * [`cli`] command dispatch and JSON reporting for the `kolchin` binary.

pub mod binomial_poly;
pub mod cli;
pub mod error;
pub mod invariants;
pub mod lattice;
pub mod operator;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod unipotent;

pub use binomial_poly::{EventualOrder, NumericalPolynomial};
pub use error::{Error, Result};
pub use invariants::InvariantPair;
pub use lattice::{ExponentVector, LeaderSet, OmegaE};
pub use operator::{DiffOperator, FactorizationReport};
pub use ratfun::RatFun;
pub use unipotent::{Mode, UnipotentGroupSpec};
