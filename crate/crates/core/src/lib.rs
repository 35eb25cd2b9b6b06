//! Combinatorial embeddings of bridgeless cubic graphs with few singular
//! edges.
//!
//! A partial cycle double cover built from perfect matchings, postman sets
//! or packed spanning trees is extended to a rotation system with a
//! signature; every edge the partial cover touches is then regular, so the
//! singular edges are confined to the uncovered remainder.

pub mod embedding;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod partial_cdc;
pub mod pipelines;
pub mod postman;
pub mod tree_packing;
