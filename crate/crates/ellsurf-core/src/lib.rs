//! Exact-arithmetic engine for elliptic surfaces fibered over the projective
//! line: Kodaira fiber classification, point counting over finite field
//! extensions, Frobenius characteristic polynomials, Picard-number bounds,
//! and Mordell-Weil lattice arithmetic.
//!
//! Everything in this crate is exact: rationals, number fields and finite
//! fields only, no floating point. The crate is `no_std` (with `alloc`);
//! IO, CLI and file formats live in the companion `ellsurf-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod field;
pub mod poly;
pub mod ratfunc;
pub mod numfield;
pub mod squarefree;
pub mod qfactor;
pub mod finite;
pub mod zech;
pub mod weierstrass;
pub mod localring;
pub mod kodaira;
pub mod counting;
pub mod spectra;
pub mod mordell_weil;
pub mod pythagorean;

pub use field::{Field, Rationals};
pub use poly::Poly;
pub use ratfunc::RatFunc;
