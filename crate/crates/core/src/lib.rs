//! Ribbon-graph polynomial invariants of Heegaard graphs.
//!
//! The crate is organised around four pieces:
//!
//! * [`ribbon`]: signed rotation systems, boundary tracing, medial graphs
//!   and partial Petrials.
//! * [`poly`] and [`invariants`]: exact multivariate polynomials and the
//!   Bollobás–Riordan, Tutte and Penrose state sums.
//! * [`lens`]: circulant Heegaard graphs of lens spaces, exact spanning-tree
//!   counts and the classification predicates.
//! * [`graphfile`], [`poincare`] and [`verify`]: the text format, the shipped
//!   Poincaré-sphere diagrams and the invariant batteries behind the CLI.

pub mod error;
pub mod graphfile;
pub mod invariants;
pub mod lens;
pub mod matrix;
pub mod poincare;
pub mod poly;
pub mod ribbon;
pub mod verify;

pub use error::{Error, Result};
pub use invariants::Limits;
pub use lens::{LensParams, QOrbit};
pub use poly::{MultiPoly, Var};
pub use ribbon::{AbstractGraph, Edge, RibbonGraph, SubgraphMetrics};
