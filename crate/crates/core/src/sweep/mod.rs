//! Plane-sweep machinery shared by the union and trimming steps.

pub mod curve;
pub mod kernel;
mod treap;
