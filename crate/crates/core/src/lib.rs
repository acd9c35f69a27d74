//! Numerical toolkit for degenerate Monge-Ampere problems and graph isometric
//! embeddings: square-root lifts of nonnegative functions, radial solutions of
//! `det D^2 u = k`, and grid-level certificates of `C^{2,1}` regularity.

// `!(a <= b)` is deliberate: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod error;
pub mod func_core;
pub mod gallery;
pub mod graph_surface;
pub mod ingest;
pub mod radial_ma;
pub mod sqrt_lift;

pub use error::{Error, Result};

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
pub(crate) fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
