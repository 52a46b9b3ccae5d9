//! Exact simulation and analysis of Kitaev quantum double models D(G) on a torus.

pub mod error;
pub mod group;
pub mod lattice;
pub mod operators;
pub mod channels;
pub mod diagnostics;
pub mod states;

pub use error::QdError;
