//! Exact invariant-form models of contact and Sasakian nilmanifolds.
//!
//! A nilpotent Lie algebra given by structure constants determines the
//! complex of invariant forms on any compact quotient of its simply connected
//! group. This crate builds that complex with exact rational arithmetic,
//! attaches a contact form, metric and `φ`, verifies the Sasakian axioms and
//! the operator identities of Sasakian geometry, and decides whether the
//! contact Hard Lefschetz relation is the graph of an isomorphism.

pub mod cli;
pub mod complex;
pub mod error;
pub mod exterior;
pub mod fixture;
pub mod hodge;
pub mod identities;
pub mod ladder;
pub mod lefschetz;
pub mod linalg;
pub mod report;
pub mod sasakian;

pub use complex::{build_complex, InvariantComplex, LieAlgebraSpec};
pub use error::{Error, Result};
pub use exterior::{Endomorphism, Form, Frame, GradedOperator, MultiIndex, VectorField};
pub use hodge::{HodgePackage, MetricStructure};
pub use linalg::{Matrix, Scalar};
pub use sasakian::{ContactStructure, OperatorName, SasakianModel};
