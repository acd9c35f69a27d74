//! Graphs `(x, y, u(x, y))`: fields with derivative access, induced metric,
//! curvature, touch curves and mollification.

pub mod field;
pub mod geometry;
pub mod mollify;
pub mod touch;

pub use field::{Field2D, Grid2D, Oracle2, Rect, DEFAULT_GRID};
pub use geometry::{
    directional_square, gauss_curvature, hessian_det, induced_metric, mixed_third_recovery, MetricField,
};
pub use mollify::{bump, check_mollified_bound, kernel_weights, mollifier_constant, mollify, Axis};
pub use touch::{check_lsc, touch_curve, TouchCurve, TouchFlag};
