use serde::{Deserialize, Serialize};

use super::field::Field2D;
use crate::certify::{CertReport, GridParams};
use crate::error::{Error, Result};
use crate::func_core::{Grid1D, Interval, Tolerances};

/// Bisection steps for a root of `u_x` on a line.
pub const BISECTION_STEPS: usize = 60;
/// Width at which bisection stops.
pub const ROOT_TOL: f64 = 1e-12;
/// Samples per line for the monotonicity precheck.
pub const MONOTONE_SAMPLES: usize = 257;

/// How the touch value on a line was determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TouchFlag {
    /// First zero of `u_x` inside the interval.
    InteriorRoot,
    /// `u_x >= 0` on the whole line; the value is the left end.
    AllNonneg,
    /// `u_x < 0` on the whole line; the value is the right end.
    AllNeg,
}

/// Left touch function `y -> first zero of u_x(., y)` on a sampled set of lines.
#[derive(Clone, Debug)]
pub struct TouchCurve {
    pub y_grid: Grid1D,
    pub a: Vec<f64>,
    pub flags: Vec<TouchFlag>,
}

impl TouchCurve {
    pub fn ys(&self) -> Vec<f64> {
        (0..self.y_grid.n()).map(|k| self.y_grid.x(k)).collect()
    }
}

/// Traces the left touch function of `u` for `y` in `y_i` (`ny` lines) and `x` in `x_i`.
pub fn touch_curve(u: &Field2D, y_i: Interval, x_i: Interval, ny: usize) -> Result<TouchCurve> {
    let ys = y_i.linspace(ny);
    let xs = x_i.linspace(MONOTONE_SAMPLES);
    let ux = |x: f64, y: f64| u.partial(x, y, 1, 0);
    let lines: Vec<Result<(f64, TouchFlag)>> = crate::par_map(&ys, |&y| {
        let vals = xs.iter().map(|&x| ux(x, y)).collect::<Result<Vec<f64>>>()?;
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (k, w) in vals.windows(2).enumerate() {
            if w[1] < w[0] - 1e-12 * (1.0 + scale) {
                return Err(Error::NotMonotone { x: xs[k + 1], y });
            }
        }
        if vals[0] >= 0.0 {
            return Ok((x_i.lo(), TouchFlag::AllNonneg));
        }
        if vals[vals.len() - 1] < 0.0 {
            return Ok((x_i.hi(), TouchFlag::AllNeg));
        }
        let k = vals.iter().position(|&v| v >= 0.0).expect("sign change exists");
        let (mut lo, mut hi) = (xs[k - 1], xs[k]);
        for _ in 0..BISECTION_STEPS {
            if hi - lo <= ROOT_TOL {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if ux(mid, y)? >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok((hi, TouchFlag::InteriorRoot))
    });
    let mut a = Vec::with_capacity(ny);
    let mut flags = Vec::with_capacity(ny);
    for line in lines {
        let (v, f) = line?;
        a.push(v);
        flags.push(f);
    }
    let y_grid = Grid1D::from_values(y_i, a.clone())?;
    Ok(TouchCurve { y_grid, a, flags })
}

/// Discrete lower semicontinuity: no sample may sit above both neighbours by more than
/// the modulus `omega(h) = 2 median |Delta A|`.
pub fn check_lsc(t: &TouchCurve) -> CertReport {
    let n = t.a.len();
    let mut report = CertReport::new("touch_lsc", GridParams::line(n, n, Tolerances::default()));
    let mut steps: Vec<f64> = t.a.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    steps.sort_by(f64::total_cmp);
    let omega = if steps.is_empty() { 0.0 } else { 2.0 * steps[steps.len() / 2] } + 1e-12;
    let mut worst = (f64::NAN, 0.0f64);
    let mut jumps = 0usize;
    for k in 1..n.saturating_sub(1) {
        let excess = t.a[k] - t.a[k - 1].max(t.a[k + 1]);
        if excess > worst.1 {
            worst = (t.y_grid.x(k), excess);
        }
        if excess > omega {
            report.fail(t.y_grid.x(k), Some(t.a[k]), excess, format!("isolated upward jump of {excess}"));
        }
    }
    for w in t.a.windows(2) {
        if (w[1] - w[0]).abs() > omega {
            jumps += 1;
        }
    }
    report.constant(worst.1);
    report.metric("omega", omega);
    report.metric("jumps", jumps as f64);
    report
}

#[cfg(test)]
mod tests {
    use super::super::field::Rect;
    use super::*;

    fn rect() -> Rect {
        Rect::square(1.0).unwrap()
    }

    #[test]
    fn parabola_touch_curve() {
        let u = Field2D::from_jet(rect(), "p", |x, y| {
            let d = x - y * y;
            d * d * 0.5
        });
        let t = touch_curve(&u, Interval::centered(0.0, 0.8).unwrap(), Interval::unit(), 33).unwrap();
        for (y, (a, f)) in t.ys().iter().zip(t.a.iter().zip(&t.flags)) {
            assert_eq!(*f, TouchFlag::InteriorRoot);
            assert!((a - y * y).abs() < 1e-11);
            assert!(u.partial(*a, *y, 1, 0).unwrap().abs() < 1e-10);
        }
        assert!(check_lsc(&t).passed);
    }

    #[test]
    fn constant_touch_and_quartic_lift() {
        let u = Field2D::from_jet(rect(), "x^2/2", |x, _| x * x * 0.5);
        let t = touch_curve(&u, Interval::unit(), Interval::unit(), 17).unwrap();
        assert!(t.a.iter().all(|a| a.abs() < 1e-12));
        let r = check_lsc(&t);
        assert!(r.passed && r.empirical_constant == 0.0);
        let cusp = Field2D::from_jet(rect(), "|x|^3", |x, _| x.abs().powi(3));
        let t = touch_curve(&cusp, Interval::unit(), Interval::unit(), 9).unwrap();
        assert!(t.flags.iter().all(|f| *f == TouchFlag::InteriorRoot));
        assert!(t.a.iter().all(|a| a.abs() < 1e-12));
    }

    #[test]
    fn boundary_conventions_and_downward_jump() {
        let d = 0.5;
        let u = Field2D::from_jet(rect(), "shift", move |x, y| {
            let s = x - y - 0.2;
            s * s * 0.5
        });
        let t = touch_curve(&u, Interval::unit(), Interval::centered(0.0, d).unwrap(), 41).unwrap();
        assert_eq!(t.flags[0], TouchFlag::AllNonneg);
        assert_eq!(t.a[0], -d);
        assert_eq!(*t.flags.last().unwrap(), TouchFlag::AllNeg);
        assert!(check_lsc(&t).passed);
    }

    #[test]
    fn upward_spike_fails() {
        let y = Interval::unit();
        let mut a = vec![0.0; 11];
        a[5] = 0.7;
        let t = TouchCurve {
            y_grid: Grid1D::from_values(y, a.clone()).unwrap(),
            a,
            flags: vec![TouchFlag::InteriorRoot; 11],
        };
        let r = check_lsc(&t);
        assert!(!r.passed && !r.witnesses.is_empty());
    }

    #[test]
    fn decreasing_ux_rejected() {
        let u = Field2D::from_jet(rect(), "-x^2", |x, _| x * x * -1.0);
        assert!(matches!(touch_curve(&u, Interval::unit(), Interval::unit(), 5), Err(Error::NotMonotone { .. })));
    }
}
