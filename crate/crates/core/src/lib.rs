//! Optimal layouts of transshipment facilities on infinite homogeneous
//! planes.
//!
//! - [`analytic`]: shape coefficients, angle equations and density relations.
//! - [`bounds`]: upper/lower bounds, the L1 optimum, comparisons and sweeps.
//! - [`tessellation`]: explicit finite windows of the optimal layouts and
//!   their numerical verification.
//! - [`discrete`]: the grid location-routing problem, an exact small-instance
//!   oracle, simulated annealing, model export and angle measurement.

// Domain checks are written `!(x > 0.0)` on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod bounds;
pub mod discrete;
pub mod error;
pub mod geometry;
pub mod numfmt;
pub mod roots;
pub mod tessellation;

pub use analytic::{CostBreakdown, DensityResult, InventoryParams, ShapeConfig, Sides, SystemParams};
pub use error::{Error, Result};
pub use geometry::{Metric, Point, Rect};
