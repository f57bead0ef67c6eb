//! Alcoved Minkowski sums of alcoved simplices.
//!
//! Simplices are named by ordered set partitions ([`osp`]). Compatibility
//! of a pair, i.e. alcovedness of their Minkowski sum, is decided
//! combinatorially in [`compat`] on top of the graphs in [`pdgraph`], and
//! can be cross-checked against the exact geometry in [`geom`].

pub mod compat;
pub mod families;
pub mod geom;
pub mod osp;
pub mod pdgraph;

pub use compat::{check_collection, check_pair, CompatError, Method, Verdict, Witness};
pub use families::{verify_family, FamilyName, FamilyReport, FamilySpec, VerifyMode};
pub use geom::{is_alcoved, AlcovedHRep, FacetWitness, GeomError, RationalPoint, VPolytope};
pub use osp::{InterlacingKind, InterlacingWitness, OrderedSetPartition, OspError};
pub use pdgraph::{CycleWitness, GraphError, PartiallyDirectedGraph, RootCone};
