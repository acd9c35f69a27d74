use std::fmt;
use std::sync::Arc;

use super::interval::Interval;
use super::jet::Jet1;
use crate::error::{Error, Result};

/// Highest derivative order carried by [`SmoothFn1D`].
pub const MAX_ORDER: usize = 4;

/// Value and derivatives `f, f', f'', f''', f''''` at a point.
pub type Derivs = [f64; MAX_ORDER + 1];

type Oracle = Arc<dyn Fn(f64) -> Derivs + Send + Sync>;

/// A real function on an interval with exact derivative oracles up to order 4.
#[derive(Clone)]
pub struct SmoothFn1D {
    domain: Interval,
    label: String,
    oracle: Oracle,
}

impl fmt::Debug for SmoothFn1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothFn1D").field("label", &self.label).field("domain", &self.domain).finish()
    }
}

impl SmoothFn1D {
    pub fn new<F>(domain: Interval, label: impl Into<String>, oracle: F) -> Self
    where
        F: Fn(f64) -> Derivs + Send + Sync + 'static,
    {
        SmoothFn1D { domain, label: label.into(), oracle: Arc::new(oracle) }
    }

    /// Builds the oracle from a jet expression.
    pub fn from_jet<F>(domain: Interval, label: impl Into<String>, expr: F) -> Self
    where
        F: Fn(Jet1) -> Jet1 + Send + Sync + 'static,
    {
        Self::new(domain, label, move |x| {
            let j = expr(Jet1::var(x, MAX_ORDER));
            std::array::from_fn(|k| j.deriv(k))
        })
    }

    /// Polynomial `sum c_k x^k`.
    pub fn polynomial(domain: Interval, label: impl Into<String>, coeffs: &[f64]) -> Self {
        let coeffs = coeffs.to_vec();
        Self::new(domain, label, move |x| {
            let mut out = [0.0; MAX_ORDER + 1];
            for (j, slot) in out.iter_mut().enumerate() {
                let mut s = 0.0;
                for (k, c) in coeffs.iter().enumerate().skip(j) {
                    let falling: f64 = (0..j).map(|i| (k - i) as f64).product();
                    s += c * falling * x.powi((k - j) as i32);
                }
                *slot = s;
            }
            out
        })
    }

    pub fn constant(domain: Interval, c: f64) -> Self {
        Self::new(domain, format!("const {c}"), move |_| [c, 0.0, 0.0, 0.0, 0.0])
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.oracle)(x)[0]
    }

    /// Derivative of order `j <= 4` (order 0 is the value).
    pub fn deriv(&self, x: f64, j: usize) -> f64 {
        assert!(j <= MAX_ORDER, "derivative order {j} > {MAX_ORDER}");
        (self.oracle)(x)[j]
    }

    pub fn derivs(&self, x: f64) -> Derivs {
        (self.oracle)(x)
    }

    pub fn jet(&self, x: f64) -> Jet1 {
        Jet1::from_derivs(&self.derivs(x), MAX_ORDER)
    }

    pub fn with_domain(&self, domain: Interval) -> Self {
        SmoothFn1D { domain, ..self.clone() }
    }

    pub fn with_label(&self, label: impl Into<String>) -> Self {
        SmoothFn1D { label: label.into(), ..self.clone() }
    }

    /// `c * f`.
    pub fn scaled(&self, c: f64) -> Self {
        let inner = self.oracle.clone();
        Self::new(self.domain, format!("{c}*{}", self.label), move |x| inner(x).map(|v| c * v))
    }

    /// `x -> f(x + shift)` on the shifted domain.
    pub fn translated(&self, shift: f64) -> Self {
        let inner = self.oracle.clone();
        let domain = Interval::new(self.domain.lo() - shift, self.domain.hi() - shift)
            .expect("translation keeps the interval non-empty");
        Self::new(domain, format!("{}(x+{shift})", self.label), move |x| inner(x + shift))
    }
}

/// `u(x / s)` with derivatives scaled by `s^{-j}`; the domain is stretched by `s`.
pub fn rescale(u: &SmoothFn1D, s: f64) -> Result<SmoothFn1D> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::InvalidParameter { name: "s", value: s, reason: "must be positive" });
    }
    let inner = u.oracle.clone();
    let domain = Interval::new(u.domain.lo() * s, u.domain.hi() * s)?;
    let inv = 1.0 / s;
    Ok(SmoothFn1D::new(domain, format!("{}(x/{s})", u.label), move |x| {
        let d = inner(x * inv);
        let mut out = [0.0; MAX_ORDER + 1];
        let mut p = 1.0;
        for j in 0..=MAX_ORDER {
            out[j] = d[j] * p;
            p *= inv;
        }
        out
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> SmoothFn1D {
        SmoothFn1D::polynomial(Interval::new(-2.0, 2.0).unwrap(), "x^2", &[0.0, 0.0, 1.0])
    }

    #[test]
    fn polynomial_oracle() {
        let f = quad();
        assert_eq!(f.derivs(3.0), [9.0, 6.0, 2.0, 0.0, 0.0]);
    }

    #[test]
    fn rescale_quadratic() {
        let u = rescale(&quad(), 2.0).unwrap();
        assert!((u.eval(1.0) - 0.25).abs() < 1e-15);
        assert!((u.deriv(0.3, 2) - 0.5).abs() < 1e-15);
        assert_eq!(u.domain(), Interval::new(-4.0, 4.0).unwrap());
    }

    #[test]
    fn rescale_identity() {
        let id = SmoothFn1D::polynomial(Interval::unit(), "x", &[0.0, 1.0]);
        let same = rescale(&id, 1.0).unwrap();
        for x in [-0.7, 0.0, 0.4] {
            assert_eq!(same.derivs(x), id.derivs(x));
        }
    }

    #[test]
    fn rescale_cusp_third_derivative() {
        let cusp = SmoothFn1D::new(Interval::unit(), "|x|^3", |x| {
            let s = x.signum();
            [x.abs().powi(3), 3.0 * s * x * x, 6.0 * x.abs(), 6.0 * s, 0.0]
        });
        let half = rescale(&cusp, 0.5).unwrap();
        assert!((half.deriv(0.2, 3) - 48.0).abs() < 1e-12);
        assert!((half.deriv(-0.2, 3) + 48.0).abs() < 1e-12);
    }

    #[test]
    fn rescale_rejects_nonpositive() {
        assert!(rescale(&quad(), 0.0).is_err());
        assert!(rescale(&quad(), -1.0).is_err());
    }
}
