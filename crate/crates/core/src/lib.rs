//! Exploratory relation views for tabular software-project data.
//!
//! The pipeline runs in four stages, each usable on its own:
//!
//! - [`ingest`] reads ARFF or CSV-plus-schema files into a typed [`ProjectTable`].
//! - [`relate`] computes the mixed-type project dissimilarity matrix
//!   (range-normalised numeric, rank-scaled ordinal, matching nominal/binary) and
//!   the Spearman rank-correlation matrix between attributes.
//! - [`chord`] turns a [`RelationMatrix`] into a circular layout: filtered edges,
//!   colour bins, segment angles proportional to row totals and ribbon sub-arcs.
//! - [`style`] and [`render`] apply condition/action rules and emit a
//!   byte-stable SVG.
//!
//! The `chordlens` binary wires these together (see [`cli`]).

pub mod chord;
pub mod cli;
mod error;
pub mod ingest;
pub mod relate;
pub mod render;
pub mod style;
mod util;

pub use chord::{ChordLayout, Edge, Ribbon, Segment};
pub use error::{Error, Result};
pub use ingest::{Cell, ColumnKind, ColumnSchema, ProjectTable, Role};
pub use relate::{MatrixKind, RelationMatrix};
pub use style::StyleSheet;
