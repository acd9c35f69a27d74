use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo < hi && lo.is_finite() && hi.is_finite() {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::InvalidInterval { lo, hi })
        }
    }

    /// `[c - r, c + r]`.
    pub fn centered(c: f64, r: f64) -> Result<Self> {
        Self::new(c - r, c + r)
    }

    /// The reference interval `[-1, 1]`.
    pub fn unit() -> Self {
        Interval { lo: -1.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn radius(&self) -> f64 {
        0.5 * self.width()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        other.lo >= self.lo && other.hi <= self.hi
    }

    /// Dilation about the midpoint: `k I`, e.g. `2I = [-2, 2]` for `I = [-1, 1]`.
    pub fn dilate(&self, k: f64) -> Interval {
        let c = self.center();
        let r = self.radius() * k;
        Interval { lo: c - r, hi: c + r }
    }

    pub fn require_within(&self, domain: &Interval) -> Result<()> {
        // Endpoints that differ only by rounding are accepted.
        let slack = 1e-12 * (1.0 + domain.width());
        if self.lo >= domain.lo - slack && self.hi <= domain.hi + slack {
            Ok(())
        } else {
            Err(Error::DomainViolation { lo: self.lo, hi: self.hi, dlo: domain.lo, dhi: domain.hi })
        }
    }

    /// `n` equally spaced points including both endpoints.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        let n = n.max(2);
        let h = self.width() / (n - 1) as f64;
        (0..n).map(|i| if i == n - 1 { self.hi } else { self.lo + h * i as f64 }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn dilation_and_linspace() {
        let i = Interval::unit().dilate(2.0);
        assert_eq!((i.lo(), i.hi()), (-2.0, 2.0));
        let pts = Interval::unit().linspace(5);
        assert_eq!(pts, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }
}
