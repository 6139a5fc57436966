//! Exact lattice algorithms for K3 surfaces with finitely many `(-2)`-curves:
//! `(-2)`-curve enumeration, nef cones, compact fundamental chambers, generating
//! series of big and nef classes, discriminant forms and the intersection-matrix
//! classification searches.

pub mod classification;
pub mod cone;
pub mod discriminant;
pub mod enumeration;
pub mod error;
pub mod input;
pub mod isometry;
pub mod lattice;
pub mod linalg;
pub mod presets;
pub mod series;

pub use cone::{chamber_vertices, hyperbolic_ell, is_ample, is_nef, vinberg_sieve, ChamberDescription, CurveSystem};
pub use error::{Error, Result};
pub use lattice::{is_primitive, DivisorClass, GramLattice, Signature};
