//! Exact symbolic kernel for ℤ-graded Lie conformal algebras.
//!
//! Algebras are presented by index-independent λ-bracket structure
//! polynomials. On top of exact polynomial arithmetic and rational linear
//! algebra the crate checks the conformal axioms over a finite index window,
//! classifies degree-`c` conformal derivations, computes per-index-sum
//! second cohomology, and runs the module extension solvers for the loop
//! Schrödinger–Virasoro conformal algebras.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cohomology;
pub mod conformal;
pub mod derivation;
pub mod error;
pub mod linalg;
pub mod module;
pub mod poly;
pub mod rational;

pub use error::{Error, Result};
pub use poly::{LinearForm, Monomial, MultiPoly, ParamPoly, Poly, Unknown, Unknowns, Var};
pub use rational::Rational;
