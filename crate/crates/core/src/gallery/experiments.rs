//! Sweeps over gallery families that exhibit uniformity, sharpness and the counterexamples.

use serde::Serialize;

use super::families::{
    cantor_window, make_cantor, make_us_family, oscillatory_fn, oscillatory_node, us_fourth_at_zero,
};
use crate::certify::{CertReport, GridParams};
use crate::error::Result;
use crate::func_core::{fit_power_law, Interval, Tolerances};
use crate::graph_surface::{check_mollified_bound, Axis, Rect};
use crate::sqrt_lift::{lift::third, third_derivative_constant, CheckConfig};

/// Allowed relative variation of the uniform third-derivative constant across `s`.
pub const US_UNIFORMITY: f64 = 0.2;
/// Target and tolerance of the fitted exponent of `u_s''''(0)` in `s`.
pub const US_EXPONENT: (f64, f64) = (-1.0, 0.05);
/// Accepted range of the blow-up exponent of `(sqrt f)''` at the oscillatory nodes.
pub const OSCILLATORY_EXPONENT: (f64, f64) = (3.5, 4.5);
/// Bound on `x^4 |(sqrt f)''|` at the oscillatory nodes.
pub const OSCILLATORY_X4_BOUND: f64 = 2.0;
/// Mollifier radius relative to the depth-12 window `[0, 3^-12]`.
pub const CANTOR_TAU_FRACTION: f64 = 0.25;
/// Deepest level whose window hosts the Cantor sweep.
pub const CANTOR_LEVEL: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct UsRow {
    pub s: f64,
    pub sup_uxxx: f64,
    pub constant: f64,
    pub fourth_at_zero: f64,
}

/// Uniform constant `sup|u_xxx| / ||f||^{1/2}_{C^4}` against the `C^3` probe `u_s''''(0)`.
pub fn us_sweep(ss: &[f64], cfg: &CheckConfig) -> Result<(CertReport, Vec<UsRow>)> {
    let i = Interval::unit();
    let mut rows = Vec::new();
    let mut report = CertReport::new("us_sweep", cfg.grid_params());
    for &s in ss {
        let f = make_us_family(s)?.fn1d.expect("us has a 1D function");
        let r = third_derivative_constant(&f, i, cfg)?;
        if !r.passed {
            report.absorb(&r);
        }
        rows.push(UsRow {
            s,
            sup_uxxx: r.metrics["supUxxx"],
            constant: r.empirical_constant,
            fourth_at_zero: us_fourth_at_zero(s),
        });
    }
    let hi = rows.iter().map(|r| r.constant).fold(0.0, f64::max);
    let lo = rows.iter().map(|r| r.constant).fold(f64::INFINITY, f64::min);
    let variation = (hi - lo) / hi;
    let fit = fit_power_law(&rows.iter().map(|r| (r.s, r.fourth_at_zero)).collect::<Vec<_>>())?;
    report.constant(hi);
    report.metric("variation", variation);
    report.metric("probeExponent", fit.exponent);
    report.metric("probeRSquared", fit.r_squared);
    for r in &rows {
        report.metric(format!("s{}.constant", r.s), r.constant);
        report.metric(format!("s{}.fourthAtZero", r.s), r.fourth_at_zero);
    }
    if variation >= US_UNIFORMITY {
        report.fail(lo, None, variation, format!("constant varies by {variation} across s"));
    }
    if (fit.exponent - US_EXPONENT.0).abs() > US_EXPONENT.1 {
        report.fail(0.0, None, fit.exponent, format!("probe exponent {} is not -1", fit.exponent));
    }
    Ok((report, rows))
}

/// `(sqrt f)''` at the nodes `x_k = 1/(k pi)`, `k = 1..=kmax`, of the oscillatory family.
pub fn oscillatory_blowup(kmax: usize) -> Result<(CertReport, Vec<(f64, f64)>)> {
    let pts: Vec<(f64, f64)> = (1..=kmax).map(oscillatory_node).collect();
    let fit = fit_power_law(&pts)?;
    let exponent = -fit.exponent;
    let x4 = pts.iter().map(|&(x, v)| x.powi(4) * v.abs()).fold(0.0, f64::max);
    let f = oscillatory_fn();
    // Only the first nodes survive the rounding of sin(1/x_k) in a direct evaluation.
    let direct = (1..=2)
        .map(|k| {
            let (x, exact) = oscillatory_node(k);
            let [v, d1, d2, ..] = f.derivs(x);
            ((third(v, d1, d2) - exact) / exact).abs()
        })
        .fold(0.0, f64::max);
    let mut report = CertReport::new("oscillatory_blowup", GridParams::line(kmax, kmax, Tolerances::default()));
    report.constant(exponent);
    report.metric("exponent", exponent);
    report.metric("rSquared", fit.r_squared);
    report.metric("maxX4Second", x4);
    report.metric("directRelError", direct);
    let (x_last, v_last) = pts[kmax - 1];
    report.witness(x_last, None, v_last);
    if !(OSCILLATORY_EXPONENT.0..=OSCILLATORY_EXPONENT.1).contains(&exponent) {
        report.fail(x_last, None, exponent, format!("blow-up exponent {exponent} outside [3.5, 4.5]"));
    }
    if x4 > OSCILLATORY_X4_BOUND {
        report.fail(x_last, None, x4, format!("x^4 |(sqrt f)''| reaches {x4}"));
    }
    if direct > 1e-6 {
        report.fail(pts[0].0, None, direct, "closed form disagrees with the jet evaluation");
    }
    Ok((report, pts))
}

/// Mollified slope of the depth-`d` Cantor iterate on `[0, 3^-12]^2`, where it is linear.
pub fn cantor_growth(depths: &[u32], n: usize) -> Result<(CertReport, Vec<(u32, f64)>)> {
    let win = cantor_window(CANTOR_LEVEL);
    let tau = CANTOR_TAU_FRACTION * win.width();
    let mut report = CertReport::new("cantor_growth", GridParams::plane(n, n, Tolerances::default()));
    let mut rows = Vec::new();
    for &d in depths {
        let w = make_cantor(d)?.fn2d.expect("cantor has a 2D field").with_rect(Rect::new(win, win))?.with_grid(n, n)?;
        let r = check_mollified_bound(&w, tau, Axis::X)?;
        if !r.passed {
            report.absorb(&r);
        }
        let sup = r.metrics["supMollified"];
        let ratio = sup / 1.5f64.powi(d as i32);
        report.metric(format!("depth{d}.supMollified"), sup);
        report.metric(format!("depth{d}.ratio"), ratio);
        if !(0.5..=2.0).contains(&ratio) {
            report.fail(win.lo(), None, ratio, format!("depth {d}: slope {sup} is not within 2x of (3/2)^{d}"));
        }
        rows.push((d, sup));
    }
    for w in rows.windows(2) {
        if !(w[1].1 > w[0].1) {
            report.fail(win.lo(), None, w[1].1, format!("slope does not grow from depth {} to {}", w[0].0, w[1].0));
        }
    }
    report.metric("tau", tau);
    report.constant(rows.iter().map(|r| r.1).fold(0.0, f64::max));
    Ok((report, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn us_sweep_is_uniform_and_probe_diverges() {
        let (r, rows) = us_sweep(&[1.0, 0.1, 0.01, 0.001], &CheckConfig::fast()).unwrap();
        assert!(r.passed, "{:?}", r.notes);
        assert!((r.metrics["probeExponent"] + 1.0).abs() < 1e-9);
        assert!((rows[3].fourth_at_zero - 9000.0).abs() < 1e-6);
    }

    #[test]
    fn oscillatory_exponent_is_four() {
        let (r, pts) = oscillatory_blowup(15).unwrap();
        assert!(r.passed, "{:?}", r.notes);
        assert!((r.metrics["exponent"] - 4.0).abs() < 0.05);
        assert_eq!(pts.len(), 15);
    }

    #[test]
    fn cantor_slopes_follow_three_halves() {
        let (r, rows) = cantor_growth(&[6, 9, 12], 129).unwrap();
        assert!(r.passed, "{:?}", r.notes);
        for (d, s) in rows {
            assert!((s / 1.5f64.powi(d as i32) - 1.0).abs() < 1e-6);
        }
    }
}
