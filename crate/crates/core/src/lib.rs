//! Exact arithmetic for finite diversities and their tight spans.
//!
//! A diversity generalizes a metric from pairs to arbitrary finite subsets.
//! This crate represents diversities on small ground sets with exact
//! rational values and provides:
//!
//! - the axiom checker and the standard constructions (diameter, L1,
//!   subtree-length on weighted trees, Steiner length, truncation);
//! - the tight span: membership tests for the feasible cone `P_X` and its
//!   minimal elements `T_X`, coordinate minimization onto tight points,
//!   Kuratowski embeddings, the induced tight-span diversity `delta_T`,
//!   the closed-form three-point cell complex, and the constructive
//!   hyperconvex extension;
//! - phylogenetics on finite weighted trees: subtree-length diversities,
//!   the four-point condition, and exact tree reconstruction from a
//!   diversity (all subset values verified, not just pairs);
//! - Steiner machinery: an exact Dreyfus-Wagner solver, enumeration of
//!   tree topologies with unlabeled internal nodes, the pairwise and
//!   full-diversity Steiner linear programs over those topologies, and
//!   the truncation lower-bound ladder, backed by an exact rational
//!   simplex.
//!
//! Everything is deterministic and every comparison is exact; there is no
//! floating point on any result path.

pub mod diversity;
pub mod error;
pub mod ground;
pub mod io;
pub mod phylo;
pub mod rat;
pub mod steiner;
pub mod tightspan;

pub use diversity::{
    check_axioms, diameter_diversity, induced_metric, l1_diversity, truncate, AxiomReport,
    AxiomViolation, CheckMode, FiniteDiversity, FiniteMetric, PointSet,
};
pub use error::{Error, Result};
pub use ground::{GroundSet, SubsetMask};
pub use rat::Rat;
