use super::lift::zero_threshold;
use super::CheckConfig;
use crate::error::{Error, Result};
use crate::func_core::{adaptive_simpson, ck_norm, SmoothFn1D};

/// Below this fraction of the domain radius the integral representation is used.
const SWITCH_FRACTION: f64 = 0.05;
const QUAD_TOL: f64 = 1e-12;

/// `g = f / x^2` and `h = f' / x` with their first two derivatives.
#[derive(Clone, Debug)]
pub struct QuotientFields {
    f: SmoothFn1D,
    switch: f64,
    pub c2_norm_g: f64,
    pub c2_norm_h: f64,
}

/// Builds the quotient fields of `f`, which must vanish to second order at 0.
pub fn quotient_fields(f: &SmoothFn1D, cfg: &CheckConfig) -> Result<QuotientFields> {
    let d = f.domain();
    if !d.contains(0.0) {
        return Err(Error::NotAZero { x: 0.0, f: f64::NAN, fp: f64::NAN });
    }
    let [f0, f1, ..] = f.derivs(0.0);
    let c1 = ck_norm(f, 1, d, cfg.norm_samples)?;
    if f0.abs() > zero_threshold(c1) || f1.abs() > cfg.tol.abs * (1.0 + c1) {
        return Err(Error::NotAZero { x: 0.0, f: f0, fp: f1 });
    }
    let switch = SWITCH_FRACTION * d.lo().abs().max(d.hi().abs());
    let mut q = QuotientFields { f: f.clone(), switch, c2_norm_g: 0.0, c2_norm_h: 0.0 };
    let xs = d.linspace(cfg.norm_samples);
    let sups = crate::par_map(&xs, |&x| {
        let g = q.g(x);
        let h = q.h(x);
        (g.iter().fold(0.0f64, |m, v| m.max(v.abs())), h.iter().fold(0.0f64, |m, v| m.max(v.abs())))
    });
    for (g, h) in sups {
        q.c2_norm_g = q.c2_norm_g.max(g);
        q.c2_norm_h = q.c2_norm_h.max(h);
    }
    Ok(q)
}

impl QuotientFields {
    /// `g, g', g''` at `x`.
    pub fn g(&self, x: f64) -> [f64; 3] {
        g_derivs(&self.f, x, self.switch)
    }

    /// `h, h', h''` at `x`.
    pub fn h(&self, x: f64) -> [f64; 3] {
        h_derivs(&self.f, x, self.switch)
    }
}

pub(crate) fn g_derivs(f: &SmoothFn1D, x: f64, switch: f64) -> [f64; 3] {
    if x.abs() >= switch && x != 0.0 {
        let [f0, f1, f2, ..] = f.derivs(x);
        let x2 = x * x;
        [f0 / x2, (x * f1 - 2.0 * f0) / (x2 * x), (x2 * f2 - 4.0 * x * f1 + 6.0 * f0) / (x2 * x2)]
    } else {
        std::array::from_fn(|k| {
            adaptive_simpson(|t| (1.0 - t) * t.powi(k as i32) * f.deriv(t * x, 2 + k), 0.0, 1.0, QUAD_TOL)
        })
    }
}

pub(crate) fn h_derivs(f: &SmoothFn1D, x: f64, switch: f64) -> [f64; 3] {
    if x.abs() >= switch && x != 0.0 {
        let [_, f1, f2, f3, _] = f.derivs(x);
        let x2 = x * x;
        [f1 / x, (x * f2 - f1) / x2, (x2 * f3 - 2.0 * x * f2 + 2.0 * f1) / (x2 * x)]
    } else {
        std::array::from_fn(|k| adaptive_simpson(|t| t.powi(k as i32) * f.deriv(t * x, 2 + k), 0.0, 1.0, QUAD_TOL))
    }
}
