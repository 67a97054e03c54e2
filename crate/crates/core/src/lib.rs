//! Plane cubic curves: flexes, the Hesse pencil, standard forms, the group law,
//! lattices and real classification.

pub mod algebra;
pub mod contour;
pub mod cubic_form;
pub mod error;
pub mod group_law;
pub mod hesse;
pub mod lattice;
pub mod real;
pub mod standard;

pub use algebra::{apply_map, line_through, roots_cubic, set_tolerance, tolerance, ProjLine, ProjMap, ProjPoint, Scalar};
pub use cubic_form::{evaluate, exact_flex, find_flexes, flex_lines, hessian, singular_points, transform, CubicForm, Family, Flex, FlexSet};
pub use error::{Error, Result};
pub use group_law::{chord_tangent, BasedGroup, CurvePoint};
pub use hesse::{hesse_form, j_of_k, symmetry_group, to_hesse, HesseParam, MobiusMap};
pub use lattice::{eisenstein, lattice_to_curve, voronoi_cell, Lattice, VoronoiCell};
pub use real::{canonical_picture, classify_real, count_components, cross_ratio_chi, real_automorphisms, real_flexes, CanonicalPicture, RealClassification};
pub use standard::{to_standard, StandardCurve};
