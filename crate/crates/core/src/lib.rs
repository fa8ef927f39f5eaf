//! Exact rational symmetric matrices with a prescribed off-diagonal pattern
//! and prescribed inertia, for graphs whose complement is a partial k-tree.

pub mod cli;
pub mod engine;
pub mod graph;
pub mod linalg;
pub mod repr;
pub mod selftest;
