//! Exact symbolic engine for the Rothstein–Poisson bracket on polynomial
//! sections of `Λ•τ♯(L ⊕ L*)`.
//!
//! The crate assembles generating elements `Θ = ψ + μ + γ + φ` of Courant
//! algebroids on `E = L ⊕ L*`, checks the master equation `{Θ, Θ} = 0`,
//! exposes the derived Courant bracket, anchor and Lie algebroid
//! differentials, computes truncated Lie algebroid cohomology with exact
//! rational linear algebra, and solves the cubic Maurer–Cartan equation for
//! formal deformations of the Dirac structure `L` order by order.

#![allow(clippy::needless_range_loop)]

pub mod courant;
pub mod deform;
pub mod error;
pub mod liealgebroid;
pub mod linalg;
pub mod report;
pub mod rothstein;
pub mod sample;
pub mod specfile;
pub mod superalg;

pub use error::{Error, Result};
pub use superalg::{
    int, parse_element, q_monomials, rat, Bidegree, Element, EvenGen, GeneratorSet, Monomial, MomentumBasis, OddGen, Rational,
};
