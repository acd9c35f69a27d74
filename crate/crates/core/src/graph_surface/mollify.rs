use serde::{Deserialize, Serialize};

use super::field::{Field2D, Grid2D, Rect, DEFAULT_GRID};
use crate::certify::{CertReport, GridParams};
use crate::error::{Error, Result};
use crate::func_core::{adaptive_simpson, Interval, Tolerances};

/// Coordinate direction of a derivative check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

/// Unnormalised bump `exp(1 / (t^2 - 1))` on `(-1, 1)`.
pub fn bump(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (1.0 / (t * t - 1.0)).exp()
    } else {
        0.0
    }
}

/// `c` with `c * int_{-1}^{1} bump = 1`.
pub fn mollifier_constant() -> f64 {
    1.0 / adaptive_simpson(bump, -1.0, 1.0, 1e-15)
}

/// Kernel weights at offsets `k h`, `|k| <= m`, for radius `tau`; the second value is
/// the discrete mass before renormalisation.
pub fn kernel_weights(h: f64, tau: f64) -> (Vec<f64>, f64) {
    let m = stencil_radius(h, tau);
    let c = mollifier_constant();
    let raw: Vec<f64> = (-(m as i64)..=m as i64).map(|k| c * bump(k as f64 * h / tau) * h / tau).collect();
    let mass: f64 = raw.iter().sum();
    (raw.iter().map(|w| w / mass).collect(), mass)
}

fn stencil_radius(h: f64, tau: f64) -> usize {
    (tau / h - 1e-9).ceil().max(0.0) as usize
}

/// Convolution with the tensor-product kernel `rho_tau(x) rho_tau(y)`; the output grid is
/// the set of nodes whose full stencil lies in the input grid.
pub fn mollify(w: &Field2D, tau: f64) -> Result<Field2D> {
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter { name: "tau", value: tau, reason: "must be positive" });
    }
    let g = match w.grid() {
        Some(g) => g.clone(),
        None => w.to_grid(DEFAULT_GRID, DEFAULT_GRID)?,
    };
    let (wx, _) = kernel_weights(g.hx(), tau);
    let (wy, _) = kernel_weights(g.hy(), tau);
    let mx = wx.len() / 2;
    let my = wy.len() / 2;
    if g.nx < 2 * mx + 3 || g.ny < 2 * my + 3 {
        return Err(Error::TauTooLarge { tau });
    }
    let ox = g.nx - 2 * mx;
    let oy = g.ny - 2 * my;
    let rows: Vec<usize> = (0..g.ny).collect();
    let xpass: Vec<Vec<f64>> = crate::par_map(&rows, |&j| {
        (0..ox).map(|i| wx.iter().enumerate().map(|(k, c)| c * g.at(i + k, j)).sum()).collect()
    });
    let out_rows: Vec<usize> = (0..oy).collect();
    let ypass: Vec<Vec<f64>> = crate::par_map(&out_rows, |&j| {
        (0..ox).map(|i| wy.iter().enumerate().map(|(k, c)| c * xpass[j + k][i]).sum()).collect()
    });
    let rect = Rect::new(Interval::new(g.x(mx), g.x(g.nx - 1 - mx))?, Interval::new(g.y(my), g.y(g.ny - 1 - my))?);
    let grid = Grid2D::new(rect, ox, oy, ypass.concat())?;
    Ok(Field2D::sampled(grid, format!("{} * rho_{tau}", w.label())))
}

/// Largest difference quotient along `axis` and where it occurs.
pub fn sup_difference_quotient(g: &Grid2D, axis: Axis) -> (f64, f64, f64) {
    let mut best = (0.0, g.x(0), g.y(0));
    for j in 0..g.ny {
        for i in 0..g.nx {
            let (a, b, h) = match axis {
                Axis::X if i + 1 < g.nx => (g.at(i, j), g.at(i + 1, j), g.hx()),
                Axis::Y if j + 1 < g.ny => (g.at(i, j), g.at(i, j + 1), g.hy()),
                _ => continue,
            };
            let q = (b - a).abs() / h;
            if q > best.0 {
                best = (q, g.x(i), g.y(j));
            }
        }
    }
    best
}

/// Checks `sup |d w_tau| <= C (1 + 1e-6)` where `C` bounds the difference quotients of `w`.
pub fn check_mollified_bound(w: &Field2D, tau: f64, axis: Axis) -> Result<CertReport> {
    let g = match w.grid() {
        Some(g) => g.clone(),
        None => w.to_grid(DEFAULT_GRID, DEFAULT_GRID)?,
    };
    let (c, _, _) = sup_difference_quotient(&g, axis);
    let sampled = Field2D::sampled(g.clone(), w.label());
    let wt = mollify(&sampled, tau)?;
    let gt = wt.grid().expect("mollified fields are sampled");
    let (ct, x, y) = sup_difference_quotient(gt, axis);
    let mut report = CertReport::new("mollified_bound", GridParams::plane(g.nx, g.ny, Tolerances::default()));
    report.constant(ct);
    report.witness(x, Some(y), ct);
    report.metric("supSlope", c);
    report.metric("supMollified", ct);
    report.metric("tau", tau);
    if ct > c * (1.0 + 1e-6) + 1e-12 {
        report.fail(x, Some(y), ct, format!("mollified slope {ct} exceeds {c}"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func_core::fit_power_law;

    fn sampled<F: Fn(f64, f64) -> f64 + Sync + Send>(n: usize, f: F) -> Field2D {
        Field2D::sampled(Grid2D::sample(Rect::square(1.0).unwrap(), n, n, f).unwrap(), "w")
    }

    #[test]
    fn normalisation_constant() {
        let c = mollifier_constant();
        assert!((c - 2.25228362104358).abs() < 1e-10);
        assert!((1.0 / c - 0.443993816168079).abs() < 1e-12);
        let (w, mass) = kernel_weights(0.01, 0.2);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!((mass - 1.0).abs() < 1e-5);
        let (_, mass) = kernel_weights(0.0025, 0.1);
        assert!((mass - 1.0).abs() < 1e-8);
    }

    #[test]
    fn constants_and_affine_preserved() {
        let one = mollify(&sampled(101, |_, _| 1.0), 0.1).unwrap();
        assert!(one.grid().unwrap().values.iter().all(|v| (v - 1.0).abs() < 1e-8));
        let lin = mollify(&sampled(101, |x, y| x + 2.0 * y), 0.1).unwrap();
        let g = lin.grid().unwrap();
        assert!((g.rect.x.lo() - -0.9).abs() < 1e-12);
        for j in 0..g.ny {
            for i in 0..g.nx {
                assert!((g.at(i, j) - (g.x(i) + 2.0 * g.y(j))).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn tau_too_large() {
        assert!(matches!(mollify(&sampled(11, |x, _| x), 0.95), Err(Error::TauTooLarge { .. })));
    }

    #[test]
    fn abs_bound_preserved() {
        let r = check_mollified_bound(&sampled(201, |x, _| x.abs()), 0.1, Axis::X).unwrap();
        assert!(r.passed);
        assert!(r.metrics["supMollified"] <= 1.0 + 1e-6);
        let r = check_mollified_bound(&sampled(101, |x, y| 3.0 * x - y), 0.1, Axis::Y).unwrap();
        assert!(r.passed && (r.metrics["supMollified"] - r.metrics["supSlope"]).abs() < 1e-9);
    }

    #[test]
    fn error_decays_linearly_in_tau() {
        let w = sampled(801, |x, y| x.abs() + 0.5 * y.abs());
        let g = w.grid().unwrap();
        let pts: Vec<(f64, f64)> = [0.2, 0.1, 0.05, 0.025]
            .iter()
            .map(|&tau| {
                let m = mollify(&w, tau).unwrap();
                let mg = m.grid().unwrap();
                let off = (g.nx - mg.nx) / 2;
                let err = (0..mg.ny)
                    .flat_map(|j| (0..mg.nx).map(move |i| (i, j)))
                    .map(|(i, j)| (mg.at(i, j) - g.at(i + off, j + off)).abs())
                    .fold(0.0, f64::max);
                (tau, err)
            })
            .collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!(fit.exponent >= 0.9, "{fit:?}");
    }
}
