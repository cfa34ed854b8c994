//! Multilayer language network construction and analysis.
//!
//! The crate builds weighted directed networks from corpora at several
//! linguistic levels — word co-occurrence, syntactic dependencies, shuffled
//! co-occurrence, syllables and graphemes — assembles them into a multilayer
//! container, and computes the measurement battery used to compare layers:
//! standard network statistics, selectivity distributions, power-law fits,
//! multiplex overlap measures, inter-layer correlation matrices and triad
//! significance profiles against a degree-preserving null model.

pub mod corpus;
pub mod graph;
pub mod layers;
pub mod measures;
pub mod motifs;
pub mod overlap;
pub mod stats;

pub(crate) mod seed;

pub use graph::{PathMode, VertexStats, WeightedDigraph};
pub use layers::{AspectCoord, Construction, Layer, MultilayerNetwork, Subsystem};
