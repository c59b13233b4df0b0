//! In/out Laplacians of weighted multidigraphs.
//!
//! A digraph with positive vertex and arc weights carries two first-order
//! maps (evaluation at heads and at tails) whose compositions produce a
//! pair of generally non-selfadjoint Laplacians. This crate assembles those
//! operators as dense matrices in the canonical orthonormal bases, computes
//! their complex spectra and kernels, relates the zero eigenvalue to the
//! source and sink components of the digraph, and evaluates the
//! circulation, flow, cut-capacity, and flow-value identities.
//!
//! Entry points:
//! - [`graph::WeightedDigraph`] for the data model and its JSON format,
//! - [`operators::assemble`] for the twelve operator matrices,
//! - [`numerics::spectral_report`] for eigenvalues and kernels,
//! - [`structure`] for components, chains, and the zero-multiplicity
//!   theorem checks,
//! - [`flows`] for circulations, flows, cuts, and values.

pub mod error;
pub mod flows;
pub mod functions;
pub mod generate;
pub mod graph;
pub mod numerics;
pub mod operators;
pub mod structure;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use functions::{ArcFunction, RestrictedVertexFunction, VertexFunction};
pub use graph::{Arc, GraphId, Orientation, Vertex, VertexSubset, WeightedDigraph};
pub use operators::{assemble, assemble_composed, OperatorKind, OperatorMatrix};
