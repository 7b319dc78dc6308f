//! Peisert-type graphs over F_{q²}: constructions, clique classification,
//! strict-EKR decisions, isomorphism census and spectral checks.
//!
//! A Peisert-type graph of type (m, q) is the Cayley graph on the additive
//! group of F_{q²} whose connection set is a union of m ≤ q cosets of F_q*.
//! This crate builds such graphs from direction sets on the projective line
//! PG(1, q), enumerates and classifies their maximum cliques, decides the
//! strict-EKR property (every maximum clique is a canonical one, i.e. a
//! translate of a line c·F_q), and counts the graphs up to isomorphism.

pub mod error;
mod bk;
mod gf;

pub mod bitgraph;
pub mod canon;
pub mod classify;
pub mod cliques;
pub mod constructions;
pub mod descriptor;
pub mod fields;
pub mod graph;
pub mod plane;
pub mod spectral;

pub use classify::{CensusRow, Certificate};
pub use cliques::{Clique, CliqueKind};
pub use error::{Error, Result};
pub use fields::{make_tower, Element, FieldTower, SmallField, TowerDescriptor};
pub use graph::{build_graph, eigenvalues_of_type, PeisertGraph, SrgParams};
pub use plane::{AffinePoint, DirectionSet, ProjectivePoint, TowerBasis};
pub use spectral::Eigenfunction;
