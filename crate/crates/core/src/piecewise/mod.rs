//! Step functions, piecewise-linear functions and the distances between
//! them.

mod linear;
mod norm;
mod quadrature;
mod step;
mod weight;

pub use linear::PiecewiseLinear;
pub use norm::{lp_diff, lp_diff_on, sup_diff, sup_diff_on, sup_diff_points, Domain};
pub use quadrature::{GaussLegendre, DEFAULT_ORDER};
pub use step::{affine_combine, ecdf, weighted_ecdf, StepFunction};
pub use weight::WeightSpec;

pub(crate) use norm::check_order;
pub(crate) use step::{distinct_with_counts, weighted_ecdf_unchecked};
