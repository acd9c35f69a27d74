use crate::error::{Error, Result};
use crate::func_core::{adaptive_simpson, ck_norm, Interval, SmoothFn1D, DEFAULT_NORM_SAMPLES};

/// Relative factor of the zero threshold `1e-13 (1 + ||f||_C0)`.
pub const ZERO_REL: f64 = 1e-13;

/// Absolute tolerance of the quadrature that recovers `u` from `u_x`.
pub const QUAD_TOL: f64 = 1e-10;

pub fn zero_threshold(c0: f64) -> f64 {
    ZERO_REL * (1.0 + c0)
}

/// Which branch of `±sqrt(f)` is taken for `u_x`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum SignConvention {
    /// `u_x = sign(x - c) sqrt(f)`.
    OddAbout(f64),
    Nonnegative,
    Nonpositive,
}

impl Default for SignConvention {
    fn default() -> Self {
        SignConvention::OddAbout(0.0)
    }
}

impl SignConvention {
    pub fn sign(&self, x: f64) -> f64 {
        match *self {
            SignConvention::OddAbout(c) => {
                if x < c {
                    -1.0
                } else {
                    1.0
                }
            }
            SignConvention::Nonnegative => 1.0,
            SignConvention::Nonpositive => -1.0,
        }
    }
}

/// A maximal run of samples where `f` is below the zero threshold.
/// `lo == hi` for an isolated zero sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroRun {
    pub lo: f64,
    pub hi: f64,
}

/// `u` with `u_x^2 = f`, built from the derivative oracle of `f`.
#[derive(Clone, Debug)]
pub struct SqrtLift {
    f: SmoothFn1D,
    convention: SignConvention,
    threshold: f64,
    zero_set: Vec<ZeroRun>,
    anchor: f64,
}

/// Lifts `f` on its whole domain.
pub fn lift(f: &SmoothFn1D, convention: SignConvention) -> Result<SqrtLift> {
    lift_with(f, convention, DEFAULT_NORM_SAMPLES)
}

/// [`lift`] with an explicit sample count for the zero-set scan.
pub fn lift_with(f: &SmoothFn1D, convention: SignConvention, n: usize) -> Result<SqrtLift> {
    let domain = f.domain();
    let threshold = zero_threshold(ck_norm(f, 0, domain, n)?);
    let xs = domain.linspace(n);
    let values: Vec<f64> = crate::par_map(&xs, |&x| f.eval(x));
    let mut zero_set: Vec<ZeroRun> = Vec::new();
    let mut open: Option<ZeroRun> = None;
    for (&x, &v) in xs.iter().zip(&values) {
        if v < -threshold {
            return Err(Error::NegativeFunction { x, value: v });
        }
        if v < threshold {
            open = Some(match open {
                Some(run) => ZeroRun { lo: run.lo, hi: x },
                None => ZeroRun { lo: x, hi: x },
            });
        } else if let Some(run) = open.take() {
            zero_set.push(run);
        }
    }
    zero_set.extend(open);
    let anchor = if domain.contains(0.0) { 0.0 } else { domain.lo() };
    Ok(SqrtLift { f: f.clone(), convention, threshold, zero_set, anchor })
}

impl SqrtLift {
    pub fn f(&self) -> &SmoothFn1D {
        &self.f
    }

    pub fn convention(&self) -> SignConvention {
        self.convention
    }

    pub fn zero_threshold(&self) -> f64 {
        self.threshold
    }

    pub fn zero_set(&self) -> &[ZeroRun] {
        &self.zero_set
    }

    pub fn domain(&self) -> Interval {
        self.f.domain()
    }

    pub fn is_zero(&self, x: f64) -> bool {
        self.f.eval(x) < self.threshold
    }

    pub fn u_x(&self, x: f64) -> f64 {
        self.convention.sign(x) * self.f.eval(x).max(0.0).sqrt()
    }

    /// Antiderivative of `u_x` with `u(0) = 0` (or `u(lo) = 0` when 0 is outside the domain).
    pub fn u(&self, x: f64) -> f64 {
        adaptive_simpson(|t| self.u_x(t), self.anchor, x, QUAD_TOL)
    }

    pub fn u_xx(&self, x: f64) -> Option<f64> {
        let [f, f1, ..] = self.f.derivs(x);
        (f >= self.threshold).then(|| self.convention.sign(x) * f1 / (2.0 * f.sqrt()))
    }

    pub fn u_xxx(&self, x: f64) -> Option<f64> {
        let [f, f1, f2, ..] = self.f.derivs(x);
        (f >= self.threshold).then(|| self.convention.sign(x) * third(f, f1, f2))
    }

    pub fn u_xxxx(&self, x: f64) -> Option<f64> {
        let [f, f1, f2, f3, _] = self.f.derivs(x);
        (f >= self.threshold).then(|| {
            let num = 4.0 * f * f * f3 - 6.0 * f * f1 * f2 + 3.0 * f1 * f1 * f1;
            self.convention.sign(x) * num / (8.0 * f * f * f.sqrt())
        })
    }

    /// `u_xx` continued through the zero set: the quotient formula wherever `f > 0`
    /// and `sqrt(f''/2)` at exact zeros.
    pub fn u_xx_extended(&self, x: f64) -> f64 {
        let [f, f1, f2, ..] = self.f.derivs(x);
        if f > 0.0 {
            self.convention.sign(x) * f1 / (2.0 * f.sqrt())
        } else {
            (f2.max(0.0) / 2.0).sqrt()
        }
    }
}

/// `(2 f f'' - f'^2) / (4 f^{3/2})`, the second derivative of `sqrt(f)`.
pub fn third(f: f64, f1: f64, f2: f64) -> f64 {
    (2.0 * f * f2 - f1 * f1) / (4.0 * f * f.sqrt())
}
