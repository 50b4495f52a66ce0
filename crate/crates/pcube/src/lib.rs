//! Structure theory of two-dimensional partial cubes.
//!
//! A partial cube is a graph that embeds isometrically into a hypercube, so
//! every vertex can be addressed by a subset of a coordinate universe and the
//! graph distance equals the Hamming distance of the addresses. This crate
//! provides:
//!
//! * recognition of partial cubes from abstract graphs ([`graph`]),
//! * Θ-class contractions, restrictions, shattering and VC-dimension
//!   machinery ([`minors`]),
//! * hyperplanes and the split-tree witness for VC-dimension 1 families
//!   ([`hyperplane`]),
//! * isometric covers and expansions ([`expansion`]),
//! * convex/isometric cycles, full subdivisions, disks, and wiring-diagram
//!   generators ([`cells`]),
//! * completion of graphs of VC-dimension 2 to rank-2 COMs and ample partial
//!   cubes ([`completion`]),
//! * the convex-cycle cell complex, carriers, and amalgam decompositions
//!   ([`complex`]),
//! * brute-force enumeration and definition-level oracles for differential
//!   testing ([`oracle`]),
//! * file formats used by the `pcube` command-line tool ([`doc`]).
//!
//! All types are immutable after construction and all operations are pure
//! functions, so values can be shared freely across threads.

pub mod cells;
pub mod complex;
pub mod completion;
pub mod doc;
pub mod expansion;
pub mod graph;
pub mod hyperplane;
pub mod minors;
pub mod oracle;

pub use graph::{AbstractGraph, CubeGraph, GraphError, Label, Region, Sign, ThetaClass};
pub use minors::SetFamily;
