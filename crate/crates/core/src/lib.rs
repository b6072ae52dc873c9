//! Singular-point analysis of maximal surfaces and constant mean curvature
//! surfaces with harmonic Gauss map.

pub mod classify;
pub mod cmc;
pub mod error;
pub mod exprlang;
pub mod invariants;
pub mod maxface;
pub mod quadrature;
pub mod surface_core;
pub mod wirtinger;

pub use error::{Error, Result};
