//! Integral homology, torsion and K-theory of canonical projection tilings
//! of codimension 1, 2 and 3, computed in exact arithmetic.
//!
//! The pipeline is [`scheme::ProjectionScheme`] → [`singular::generate`] →
//! [`homology::compute`].

pub mod error;
pub mod homology;
pub mod linalg;
pub mod scheme;
pub mod singular;

pub use error::{Error, Result};
pub use linalg::FgAbelianGroup;
