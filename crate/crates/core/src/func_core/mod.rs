//! Function representations, sampled grids, norms, rescaling and rate fits.

pub mod fit;
pub mod grid;
pub mod interval;
pub mod jet;
pub mod quadrature;
pub mod smooth;

pub use fit::{fit_power_law, PowerFit};
pub use grid::{ck_norm, finite_diff, lipschitz_seminorm, Grid1D};
pub use interval::Interval;
pub use jet::{Jet1, Jet2, JET_ORDER};
pub use quadrature::adaptive_simpson;
pub use smooth::{rescale, Derivs, SmoothFn1D, MAX_ORDER};

/// Default sample count for sup norms.
pub const DEFAULT_NORM_SAMPLES: usize = 8193;

/// Verification tolerances; every report carries the values it used.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { abs: 1e-8, rel: 1e-6 }
    }
}

impl Tolerances {
    /// `a <= b` up to the configured slack.
    pub fn le(&self, a: f64, b: f64) -> bool {
        a <= b + self.abs + self.rel * b.abs()
    }
}
