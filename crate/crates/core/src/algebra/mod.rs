//! Scalars, univariate roots and projective-plane primitives.

pub mod poly;
pub mod proj;
pub mod scalar;

pub use poly::roots_cubic;
pub use proj::{apply_map, line_through, ProjLine, ProjMap, ProjPoint};
pub use scalar::{set_tolerance, tolerance, Scalar};
