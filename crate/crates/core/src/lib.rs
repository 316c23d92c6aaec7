//! Homogeneous geodesics on Lie groups with left-invariant metrics.
//!
//! Everything is generic over [`Scalar`], with an exact rational backend
//! ([`Rational`]) and `f64`.

pub mod algebra;
pub mod closure;
pub mod curvature;
pub mod error;
pub mod flow;
pub mod geodesy;
pub mod homspace;
pub mod input;
pub mod lattice;
pub mod linalg;
pub mod metric;
pub mod poly;
pub mod realization;
pub mod sampling;
pub mod scalar;

pub use algebra::{LieAlgebra, Subalgebra};
pub use closure::{ClosureKind, ClosureReport};
pub use curvature::ConnectionTable;
pub use error::{Error, Result};
pub use flow::Trajectory;
pub use geodesy::AffineFamily;
pub use homspace::ReductiveSpace;
pub use linalg::Matrix;
pub use metric::{InnerProduct, MetricLieAlgebra};
pub use realization::MatrixRealization;
pub use scalar::{Rational, Scalar};
