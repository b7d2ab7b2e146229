//! Exact computations on two-dimensional local fields attached to flags of
//! the surfaces `P^2` and `P^1 x P^1` over finite fields: iterated Laurent
//! series, residues of rational 2-forms and their reciprocity laws, tame
//! symbols and intersection numbers, line-bundle cohomology, and the
//! measure-theoretic replay of the Riemann-Roch theorem.

pub mod cohomology;
pub mod error;
pub mod fields;
pub mod linalg;
pub mod measures;
pub mod poly;
pub mod residues;
pub mod series;
pub mod suites;
pub mod surface;
pub mod symbols;

pub use error::{Error, Result};
