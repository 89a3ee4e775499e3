//! Exact-arithmetic toolkit for almost toric base diagrams (ATBDs) of
//! monotone del Pezzo surfaces.
//!
//! Everything is computed over arbitrary-precision integers and reduced
//! rationals; there is no floating point in any geometric or arithmetic
//! path. The crate provides:
//!
//! - [`lattice`]: exact 2D lattice linear algebra (wedge products, primitive
//!   vectors, node monodromy matrices, affine lengths),
//! - [`markov`]: Markov type I/II Diophantine equations, Vieta mutations,
//!   tree enumeration, descent and the sum-12 classification,
//! - [`atbd`]: the diagram data model, validation and all diagram operations
//!   (nodal trade/slide, transferring the cut, mutation, toric and almost
//!   toric blowups, canonical forms, triangular construction),
//! - [`orbifold`]: limit orbifolds, divisor intersection matrices,
//!   anticanonical degrees and predicted boundary Maslov-2 hulls,
//! - [`catalog`]: machine-readable replays of the construction scripts with
//!   golden-file verification,
//! - [`render`]: deterministic SVG output,
//! - [`suites`]: seeded property suites used by the CLI.

pub mod atbd;
pub mod catalog;
pub mod io;
pub mod lattice;
pub mod markov;
pub mod num;
pub mod orbifold;
pub mod render;
pub mod suites;

mod error;

pub use error::{Error, Result};
