use std::ops::Range;

use super::interval::Interval;
use super::smooth::{SmoothFn1D, MAX_ORDER};
use crate::error::{Error, Result};

/// Uniform samples of a function on an interval.
///
/// `valid` marks the index range carrying meaningful values; finite-difference
/// outputs shrink it by the stencil radius at both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid1D {
    interval: Interval,
    values: Vec<f64>,
    valid: Range<usize>,
}

impl Grid1D {
    pub fn from_values(interval: Interval, values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::GridTooSmall { n: values.len(), need: 3 });
        }
        let n = values.len();
        Ok(Grid1D { interval, values, valid: 0..n })
    }

    pub fn sample<F: Fn(f64) -> f64>(interval: Interval, n: usize, f: F) -> Result<Self> {
        if n < 3 {
            return Err(Error::GridTooSmall { n, need: 3 });
        }
        let values = interval.linspace(n).into_iter().map(f).collect();
        Self::from_values(interval, values)
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Spacing `(hi - lo) / (n - 1)`.
    pub fn h(&self) -> f64 {
        self.interval.width() / (self.n() - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.n() - 1 {
            self.interval.hi()
        } else {
            self.interval.lo() + self.h() * i as f64
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn valid(&self) -> Range<usize> {
        self.valid.clone()
    }

    /// `(x, value)` pairs over the valid range.
    pub fn valid_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.valid.clone().map(move |i| (self.x(i), self.values[i]))
    }
}

/// Central, second-order accurate derivative of order 1, 2 or 3.
pub fn finite_diff(g: &Grid1D, order: usize) -> Result<Grid1D> {
    let radius = match order {
        1 | 2 => 1,
        3 => 2,
        other => return Err(Error::OrderTooHigh(other)),
    };
    let n = g.n();
    if n < 2 * radius + 1 {
        return Err(Error::GridTooSmall { n, need: 2 * radius + 1 });
    }
    let h = g.h();
    let v = &g.values;
    let mut out = vec![f64::NAN; n];
    for i in radius..n - radius {
        out[i] = match order {
            1 => (v[i + 1] - v[i - 1]) / (2.0 * h),
            2 => (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h),
            _ => (v[i + 2] - 2.0 * v[i + 1] + 2.0 * v[i - 1] - v[i - 2]) / (2.0 * h * h * h),
        };
    }
    let lo = g.valid.start.max(radius);
    let hi = g.valid.end.min(n - radius);
    Ok(Grid1D { interval: g.interval, values: out, valid: lo..hi.max(lo) })
}

/// Largest adjacent difference quotient `|dv| / h` over the valid range.
pub fn lipschitz_seminorm(g: &Grid1D) -> Result<f64> {
    let r = g.valid();
    if r.len() < 2 {
        return Err(Error::GridTooSmall { n: r.len(), need: 2 });
    }
    let h = g.h();
    Ok(g.values[r]
        .windows(2)
        .filter(|w| w[0].is_finite() && w[1].is_finite())
        .map(|w| (w[1] - w[0]).abs() / h)
        .fold(0.0, f64::max))
}

/// `max_{j <= k} sup_I |f^{(j)}|`, sampled on `n` uniform points of `I`.
pub fn ck_norm(f: &SmoothFn1D, k: usize, interval: Interval, n: usize) -> Result<f64> {
    if k > MAX_ORDER {
        return Err(Error::OrderTooHigh(k));
    }
    interval.require_within(&f.domain())?;
    if n < 2 {
        return Err(Error::GridTooSmall { n, need: 2 });
    }
    let pts = interval.linspace(n);
    let sup = crate::par_map(&pts, |&x| {
        let d = f.derivs(x);
        d[..=k].iter().map(|v| v.abs()).fold(0.0, f64::max)
    });
    Ok(sup.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ck_norm_of_square() {
        let f = SmoothFn1D::polynomial(Interval::new(-2.0, 2.0).unwrap(), "x^2", &[0.0, 0.0, 1.0]);
        let v = ck_norm(&f, 2, Interval::new(-2.0, 2.0).unwrap(), 1001).unwrap();
        assert_eq!(v, 4.0);
    }

    #[test]
    fn ck_norm_of_zero_and_errors() {
        let z = SmoothFn1D::constant(Interval::unit(), 0.0);
        assert_eq!(ck_norm(&z, 4, Interval::unit(), 101).unwrap(), 0.0);
        assert_eq!(ck_norm(&z, 5, Interval::unit(), 101), Err(Error::OrderTooHigh(5)));
        let outside = Interval::new(-2.0, 0.0).unwrap();
        assert!(matches!(ck_norm(&z, 1, outside, 101), Err(Error::DomainViolation { .. })));
    }

    #[test]
    fn ck_norm_quartic_brute_force() {
        // Independent brute force over the five closed-form derivative magnitudes.
        let dom = Interval::new(-2.0, 2.0).unwrap();
        let f = SmoothFn1D::polynomial(dom, "9x^4", &[0.0, 0.0, 0.0, 0.0, 9.0]);
        let mut brute: f64 = 0.0;
        for i in 0..=4000 {
            let x = -2.0 + 4.0 * i as f64 / 4000.0;
            for v in [9.0 * x.powi(4), 36.0 * x.powi(3), 108.0 * x * x, 216.0 * x, 216.0] {
                brute = brute.max(f64::abs(v));
            }
        }
        assert_eq!(brute, 432.0);
        assert_eq!(ck_norm(&f, 4, dom, 8193).unwrap(), brute);
    }

    #[test]
    fn ck_norm_monotone_in_order() {
        let f = SmoothFn1D::from_jet(Interval::new(-3.0, 3.0).unwrap(), "sin 2x", |x| (x * 2.0).sin());
        let i = Interval::unit();
        let norms: Vec<f64> = (0..=4).map(|k| ck_norm(&f, k, i, 513).unwrap()).collect();
        assert!(norms.windows(2).all(|w| w[0] <= w[1]));
        let wider = ck_norm(&f, 2, Interval::new(-2.0, 2.0).unwrap(), 1025).unwrap();
        assert!(wider >= norms[2]);
    }

    #[test]
    fn cubic_third_difference_is_exact() {
        let g = Grid1D::sample(Interval::unit(), 201, |x| x * x * x).unwrap();
        let d3 = finite_diff(&g, 3).unwrap();
        assert_eq!(d3.valid(), 2..199);
        for (_, v) in d3.valid_points() {
            assert!((v - 6.0).abs() < 1e-6);
        }
        assert!(d3.values()[0].is_nan());
    }

    #[test]
    fn constant_first_difference() {
        let g = Grid1D::sample(Interval::unit(), 11, |_| 5.0).unwrap();
        let d = finite_diff(&g, 1).unwrap();
        assert!(d.valid_points().all(|(_, v)| v == 0.0));
    }

    #[test]
    fn sine_second_difference() {
        let g = Grid1D::sample(Interval::new(0.0, 1.0).unwrap(), 1001, f64::sin).unwrap();
        let d = finite_diff(&g, 2).unwrap();
        let err = d.valid_points().map(|(x, v)| (v + x.sin()).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-5, "{err}");
    }

    #[test]
    fn grid_too_small() {
        let g = Grid1D::sample(Interval::unit(), 3, |x| x).unwrap();
        assert!(matches!(finite_diff(&g, 3), Err(Error::GridTooSmall { .. })));
        assert!(Grid1D::sample(Interval::unit(), 2, |x| x).is_err());
    }

    #[test]
    fn lipschitz_examples() {
        let g = Grid1D::sample(Interval::unit(), 101, f64::abs).unwrap();
        assert!((lipschitz_seminorm(&g).unwrap() - 1.0).abs() < 1e-12);
        let c = Grid1D::sample(Interval::unit(), 101, |_| 2.0).unwrap();
        assert_eq!(lipschitz_seminorm(&c).unwrap(), 0.0);
        let uxx = Grid1D::sample(Interval::unit(), 1001, |x| 6.0 * x.abs()).unwrap();
        assert!((lipschitz_seminorm(&uxx).unwrap() - 6.0).abs() < 1e-8);
    }
}
