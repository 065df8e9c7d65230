//! canforge: an exact-arithmetic laboratory for compound-A threefold
//! hypersurface singularities `R = K[[u,v,x,y]]/(uv - f1...fn)`.
//!
//! The crate builds the flag modules T_I = (u, f_I) as explicit matrix
//! factorizations, computes Hom/Ext dimensions and Gabriel quivers by exact
//! linear algebra over m-adic truncations, constructs the symbolic blowup
//! chart towers attached to flags, and classifies the base singularity and
//! every chart by order/associate criteria. Everything is exact: big-rational
//! coefficients, optionally in a small extension field of the rationals.
//!
//! Entry points:
//! - [`field::Field`], [`poly::Poly`], [`parse::parse_poly`] — coefficients and polynomials;
//! - [`factor`] — Weierstrass preparation and formal quadratic factorization;
//! - [`mf`] — matrix factorizations, factor systems, flag ideals;
//! - [`trunc`], [`homology`] — truncated rings and the Hom/Ext/quiver engine;
//! - [`flags`], [`can`] — flag combinatorics, chart towers, classification;
//! - [`job`], [`report`] — the TOML job runner behind the `canforge` binary.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod can;
pub mod charts;
pub mod error;
pub mod factor;
pub mod field;
pub mod flags;
pub mod homology;
pub mod job;
pub mod linalg;
pub mod mf;
pub mod parse;
pub mod poly;
pub mod report;
pub mod trunc;

pub use error::Error;
