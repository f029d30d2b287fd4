//! Computational toolkit for simplicial trees and group actions on them:
//! tree automorphism classification (elliptic/hyperbolic/inversion), amplitudes
//! and characteristic subtrees, amalgamated free products with their Bass-Serre
//! trees, quotient graphs and fundamental domains, and trees of groups with
//! edge orientation.
//!
//! All values are immutable after construction and every operation is pure, so
//! the whole API is safe to drive from multiple threads. Operations on lazily
//! expanded (infinite) trees take explicit radius budgets and distinguish a
//! definite "no" from "unknown at this horizon".

pub mod amalgam;
pub mod constructions;
pub mod corpus;
pub mod dot;
pub mod graph;
pub mod group;
pub mod isometry;
pub mod quotient;
pub mod specfile;
pub mod tree;
pub mod verify;

pub use amalgam::{AmalgamSpec, ElementClass, NormalFormWord, Side};
pub use graph::{FiniteGraph, GraphValidation};
pub use group::{FiniteGroup, GroupHom, Transversal};
pub use isometry::{Confidence, IsometryClass, IsometryReport, TreeAutomorphism};
pub use tree::{ExploredBall, FiniteTree, Geodesic, HalfLine, LazyTree, Subtree, TreeHost};
