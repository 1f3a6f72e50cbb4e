//! Numerical certification of geometric sharp real-part inequalities.
//!
//! The crate evaluates both sides of derivative, Bohr-type and increment
//! estimates for concrete holomorphic functions whose images lie in a
//! planar domain, and reproduces the extremal constructions that show the
//! constants cannot be improved.
//!
//! Layout:
//!
//! * [`series`]: truncated power series, Cauchy-integral differentiation,
//!   reciprocal and recentering.
//! * [`geometry`]: image domains, convex hulls, boundary distances and
//!   support half-planes.
//! * [`bounds`]: the sharp coefficients, scale functionals and the
//!   [`BoundReport`] check combinator.
//! * [`extremal`]: extremal families, the crescent conformal map and the
//!   sharpness sweeps.
//! * [`harness`]: builtin corpus and config-driven experiment runner.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod complex;
pub mod error;
pub mod extremal;
pub mod geometry;
pub mod harness;
pub mod series;
pub mod summation;

pub use num_complex::Complex64;

pub use bounds::{BoundReport, QValue, QVariant, SupSchedule};
pub use error::{Error, Result};
pub use extremal::{AffineTransform, CrescentMapParams, GxiParams, Placement, SweepRow};
pub use geometry::{CrescentDomain, Disc, Domain, HalfPlane, PolygonHull, Strip};
pub use harness::{CorpusEntry, ExperimentConfig, RunOutcome, RunStatus};
pub use series::{AnalyticFunction, PowerSeries, Tail};
