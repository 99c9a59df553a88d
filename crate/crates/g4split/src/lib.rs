//! Exact constructions of genus-4 curves whose Jacobians split as squares
//! or products of genus-2 Jacobians, driven by the polar geometry of the
//! Igusa quartic.

pub mod error;
pub mod exactmath;
pub mod genus2;
pub mod glue;
pub mod igusa;
pub mod kummer;
pub mod locus;
pub mod octad;
pub mod par;
pub mod projgeom;
pub mod squares;

pub use error::{Error, Result};
