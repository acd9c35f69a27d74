//! Verification reports and the two-dimensional `C^{2,1}` certification.

pub mod directional;
pub mod report;
pub mod seminorm;
pub mod strip;

pub use directional::{
    directional_certify, directional_certify_with, grid_thirds, mollified_third_bounds, recover_at,
    recover_from_thirds, sample_for_mollification, ThirdBounds, TAUS, TAU_SPREAD,
};
pub use report::{CertReport, GridParams, Witness, NORM_CONVENTION};
pub use seminorm::{c21_seminorm_2d, c21_seminorm_2d_on, touch_cell_fraction};
pub use strip::{
    convexity_gate, strip_cover, strip_cover_dir, Direction, LineBranch, LinePlan, StripCoverPlan, GATE_GRID,
    LINES_PER_STRIP, LINE_SAMPLES, ZERO_SCAN,
};

#[cfg(test)]
mod tests;
