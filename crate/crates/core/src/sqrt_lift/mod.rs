//! Square-root lifts `u_x = ±sqrt(f)` of nonnegative functions and the
//! one-dimensional estimates on `u_xx` and `u_xxx`.

pub mod checks;
pub mod interpolation;
pub mod lift;
pub mod quotient;
pub mod taylor;

pub use checks::{
    certify_c21_1d, check_derivative_ladder, check_gradient_bound, dispatch_branch, extend_uxx_across_zero,
    extend_uxx_at, scaled_bound_check, third_derivative_constant, Branch, PositivityMode, ZeroExtension,
};
pub use interpolation::{
    check_interpolation_random, interpolation_constants, random_admissible_quartic, InterpolationConstants,
};
pub use lift::{lift, lift_with, SignConvention, SqrtLift, ZeroRun};
pub use quotient::{quotient_fields, QuotientFields};
pub use taylor::{nondegenerate_taylor, taylor_finite_differences, taylor_report, TaylorJet};

use crate::certify::GridParams;
use crate::func_core::{Tolerances, DEFAULT_NORM_SAMPLES};

/// Sampling and tolerance settings shared by the one-dimensional checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckConfig {
    /// Samples of the interval where an inequality is checked.
    pub samples: usize,
    /// Samples used for `C^k` norms.
    pub norm_samples: usize,
    pub tol: Tolerances,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { samples: DEFAULT_NORM_SAMPLES, norm_samples: DEFAULT_NORM_SAMPLES, tol: Tolerances::default() }
    }
}

impl CheckConfig {
    /// Coarser sampling for inner loops and unit tests.
    pub fn fast() -> Self {
        CheckConfig { samples: 1025, norm_samples: 1025, tol: Tolerances::default() }
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        self.samples = n;
        self.norm_samples = n;
        self
    }

    pub fn grid_params(&self) -> GridParams {
        GridParams::line(self.samples, self.norm_samples, self.tol)
    }
}
