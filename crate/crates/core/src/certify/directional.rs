use serde::{Deserialize, Serialize};

use super::report::{CertReport, GridParams};
use super::strip::{strip_cover_dir, Direction, StripCoverPlan, LINE_SAMPLES};
use crate::error::{Error, Result};
use crate::func_core::Tolerances;
use crate::graph_surface::{mixed_third_recovery, mollify, Field2D, Grid2D, Rect, DEFAULT_GRID};
use crate::sqrt_lift::CheckConfig;

/// Mollifier radii of the uniformity check.
pub const TAUS: [f64; 3] = [0.04, 0.02, 0.01];
/// Allowed relative spread of a directional sup across `TAUS`.
pub const TAU_SPREAD: f64 = 0.1;
/// Finite-difference step of the third differences, as a fraction of `tau`.
const STEP_FRACTION: f64 = 0.1;

/// Suprema over `B(delta/2)` of third derivatives of `u_tau`. `zzz` and `www` are
/// along the unit diagonals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ThirdBounds {
    pub tau: f64,
    pub xxx: f64,
    pub yyy: f64,
    pub zzz: f64,
    pub www: f64,
    pub xxy: f64,
    pub xyy: f64,
}

impl ThirdBounds {
    pub fn directional(&self) -> [f64; 4] {
        [self.xxx, self.yyy, self.zzz, self.www]
    }

    pub fn mixed(&self) -> f64 {
        self.xxy.max(self.xyy)
    }
}

/// `(u_xxx, u_yyy, u_zzz, u_www)` at node `(i, j)` from five-point third differences
/// with step `k` nodes; `zzz` and `www` are along `dx + dy` and `dx - dy`.
pub fn grid_thirds(g: &Grid2D, i: usize, j: usize, k: usize) -> Option<[f64; 4]> {
    let (i, j, k) = (i as i64, j as i64, k as i64);
    let reach = 2 * k;
    if i < reach || j < reach || i + reach >= g.nx as i64 || j + reach >= g.ny as i64 {
        return None;
    }
    let h = g.hx();
    let denom = 2.0 * (k as f64 * h).powi(3);
    let at = |p: i64, q: i64| g.at(p as usize, q as usize);
    let third = |di: i64, dj: i64| {
        let v = |t: i64| at(i + t * k * di, j + t * k * dj);
        (v(2) - 2.0 * v(1) + 2.0 * v(-1) - v(-2)) / denom
    };
    Some([third(1, 0), third(0, 1), third(1, 1), third(1, -1)])
}

/// `(u_xxy, u_xyy)` from the four directional thirds of [`grid_thirds`].
pub fn recover_from_thirds(t: [f64; 4]) -> (f64, f64) {
    mixed_third_recovery(t[2], t[3], t[0], t[1])
}

/// `(u_xxy, u_xyy)` at a point, recovered from analytic directional thirds.
pub fn recover_at(u: &Field2D, x: f64, y: f64) -> Result<(f64, f64)> {
    let p = |i, j| u.partial(x, y, i, j);
    let (xxx, xxy, xyy, yyy) = (p(3, 0)?, p(2, 1)?, p(1, 2)?, p(0, 3)?);
    let zzz = xxx + 3.0 * xxy + 3.0 * xyy + yyy;
    let www = xxx - 3.0 * xxy + 3.0 * xyy - yyy;
    Ok(mixed_third_recovery(zzz, www, xxx, yyy))
}

/// Half-width of the sampled square for radius `r`.
fn sample_half_width(r: f64) -> f64 {
    let delta = r / 9.0;
    delta / 2.0 + TAUS[0] + 0.25 * delta
}

/// Samples `u` on the square used by [`mollified_third_bounds`].
pub fn sample_for_mollification(u: &Field2D, r: f64, n: usize) -> Result<Grid2D> {
    let rect = Rect::square(sample_half_width(r))?;
    if !u.rect().contains_rect(&rect) {
        let d = u.rect();
        return Err(Error::DomainViolation { lo: rect.x.lo(), hi: rect.x.hi(), dlo: d.x.lo(), dhi: d.x.hi() });
    }
    match u.with_rect(rect) {
        Ok(v) => v.to_grid(n, n),
        Err(_) => Grid2D::sample(rect, n, n, |x, y| u.eval(x, y)),
    }
}

/// Third-derivative suprema of `g * rho_tau` on `B(delta/2)`, `delta = r / 9`.
pub fn mollified_third_bounds(g: &Grid2D, r: f64, tau: f64) -> Result<ThirdBounds> {
    let wt = mollify(&Field2D::sampled(g.clone(), "u"), tau)?;
    let gt = wt.grid().expect("mollified fields are sampled");
    let k = ((STEP_FRACTION * tau / gt.hx()).round() as usize).max(1);
    let rad = r / 18.0;
    let mut b = ThirdBounds { tau, xxx: 0.0, yyy: 0.0, zzz: 0.0, www: 0.0, xxy: 0.0, xyy: 0.0 };
    let mut nodes = 0usize;
    let unit = 2.0f64.powf(1.5);
    for j in 0..gt.ny {
        for i in 0..gt.nx {
            let (x, y) = (gt.x(i), gt.y(j));
            if x * x + y * y > rad * rad {
                continue;
            }
            let Some(t) = grid_thirds(gt, i, j, k) else { continue };
            let (xxy, xyy) = recover_from_thirds(t);
            b.xxx = b.xxx.max(t[0].abs());
            b.yyy = b.yyy.max(t[1].abs());
            b.zzz = b.zzz.max(t[2].abs() / unit);
            b.www = b.www.max(t[3].abs() / unit);
            b.xxy = b.xxy.max(xxy.abs());
            b.xyy = b.xyy.max(xyy.abs());
            nodes += 1;
        }
    }
    if nodes == 0 {
        return Err(Error::TauTooLarge { tau });
    }
    Ok(b)
}

/// Strip cover in all four directions, then `tau`-uniform third-derivative bounds of
/// the mollified field with the mixed thirds recovered from the directional ones.
pub fn directional_certify(u: &Field2D, r: f64) -> Result<CertReport> {
    directional_certify_with(u, r, DEFAULT_GRID, &CheckConfig::default().with_samples(LINE_SAMPLES)).map(|(rep, _)| rep)
}

/// [`directional_certify`] on an `n x n` mollification grid, also returning the four strip plans.
pub fn directional_certify_with(
    u: &Field2D,
    r: f64,
    n: usize,
    cfg: &CheckConfig,
) -> Result<(CertReport, Vec<StripCoverPlan>)> {
    let mut report = CertReport::new("directional", GridParams::plane(n, n, Tolerances::default()));
    let mut strip_sup = 0.0f64;
    let mut plans = Vec::new();
    for dir in Direction::ALL {
        let (plan, rep) = strip_cover_dir(u, r, dir, cfg)?;
        plans.push(plan);
        strip_sup = strip_sup.max(rep.empirical_constant);
        report.absorb(&rep);
    }
    let g = sample_for_mollification(u, r, n)?;
    let bounds: Vec<ThirdBounds> = TAUS.iter().map(|&t| mollified_third_bounds(&g, r, t)).collect::<Result<_>>()?;
    let names = ["xxx", "yyy", "zzz", "www"];
    for (c, name) in names.iter().enumerate() {
        let vals: Vec<f64> = bounds.iter().map(|b| b.directional()[c]).collect();
        let hi = vals.iter().fold(0.0f64, |a, v| a.max(*v));
        let lo = vals.iter().fold(f64::INFINITY, |a, v| a.min(*v));
        let spread = (hi - lo) / hi.max(1e-6);
        report.metric(format!("spread.{name}"), spread);
        if spread > TAU_SPREAD {
            let trend: Vec<String> = bounds.iter().map(|b| format!("tau={}: {}", b.tau, b.directional()[c])).collect();
            report.fail(0.0, Some(0.0), spread, format!("u_{name} sup depends on tau: {}", trend.join(" -> ")));
        }
    }
    for b in &bounds {
        let key = format!("tau{}", b.tau);
        for (name, v) in names.iter().zip(b.directional()) {
            report.metric(format!("{key}.{name}"), v);
        }
        report.metric(format!("{key}.xxy"), b.xxy);
        report.metric(format!("{key}.xyy"), b.xyy);
    }
    let mixed = bounds.iter().fold(0.0f64, |a, b| a.max(b.mixed()));
    let sup = bounds.iter().flat_map(|b| b.directional()).fold(0.0f64, f64::max);
    report.metric("mixedSup", mixed);
    report.metric("directionalSup", sup);
    report.metric("stripSup", strip_sup);
    report.constant(sup.max(mixed));
    Ok((report, plans))
}
