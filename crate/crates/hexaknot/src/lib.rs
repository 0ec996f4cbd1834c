//! Inscribed hexagonal trefoils on periodic space curves.
//!
//! Six points on a closed curve, joined cyclically, form a hexagon that may
//! be knotted. This crate classifies such hexagons, searches curves for
//! trefoil hexagons, solves for prism configurations (six points whose three
//! diagonals concur) and follows them along one-parameter families, and
//! checks the planar crossing rules that lift a flat hexagon to a trefoil.

pub mod cli;
pub mod config_geometry;
pub mod curves;
pub mod diagram;
pub mod error;
pub mod invariants;
pub mod poly;
pub mod render;
pub mod search;

pub use error::{Error, Result};
