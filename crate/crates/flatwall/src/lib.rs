//! Constructive flat wall pipeline.
//!
//! Given a host graph with a large wall, either extract a clique minor grasped
//! by the wall or produce a small apex set and a flat wall certificate. Every
//! certificate has an independent verifier in this crate.

#![allow(clippy::needless_range_loop)]

pub mod chain;
pub mod classify;
pub mod forge;
pub mod genverify;
pub mod graph;
pub mod linkage;
pub mod mesh;
pub mod pipeline;
pub mod planar;
pub mod tdp;
pub mod wall;

pub use graph::{Graph, GraphError, MinorModel};
