//! Exact Hurwitz numbers by three independent routes (monodromy counting,
//! closed formulas, and the ELSV intersection formula), plus extraction of
//! Hodge integrals by inverting ELSV against the counting oracle.

pub mod cache;
pub mod elsv;
pub mod error;
pub mod extract;
pub mod intersection;
pub mod numeric;
pub mod oracle;
pub mod verify;

pub use error::{Error, Result};
