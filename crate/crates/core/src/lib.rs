//! Exact multiplier groups of algebraic quasiperiodic flows on the n-torus.
//!
//! A constant-vector-field flow on `T^n` whose frequencies form a basis of a
//! real number field `F` is described by a [`flow::TorusFlowSpec`]. Its
//! multipliers are the units of the multiplier ring of the frequency
//! lattice; [`semiconj`] transports symmetries and multiplier groups along
//! torus maps with integer matrices.

pub mod error;
pub mod field;
pub mod flow;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod semiconj;
pub mod sim;

pub use error::{Error, Result};
pub use field::{FieldElement, Irreducibility, NumberField};
pub use flow::{NontrivialMultiplier, Symmetry, TorusFlowSpec};
pub use lattice::{Completeness, Lattice, Order, UnitGroup};
pub use linalg::{IntMatrix, RatMatrix, Rational};
pub use semiconj::{full_pipeline, PipelineReport, SemiconjugacyMap};
