use super::lift::{lift_with, SignConvention};
use super::CheckConfig;
use crate::certify::CertReport;
use crate::error::{Error, Result};
use crate::func_core::SmoothFn1D;

/// `u_xx(0), u_xxx(0), u_xxxx(0)` for the lift of `M x^2 + x^3 R(x)`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct TaylorJet {
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
}

fn check_m(m: f64) -> Result<()> {
    if m > 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "M", value: m, reason: "must be positive" })
    }
}

/// Closed form from the expansion of `x sqrt(M + R x)`.
pub fn nondegenerate_taylor(m: f64, r: &SmoothFn1D) -> Result<TaylorJet> {
    check_m(m)?;
    let [r0, r1, ..] = r.derivs(0.0);
    let sm = m.sqrt();
    Ok(TaylorJet { d2: sm, d3: r0 / sm, d4: (12.0 * r1 * m - 3.0 * r0 * r0) / (4.0 * m * sm) })
}

/// `f = M x^2 + x^3 R` with its derivative oracle.
pub fn taylor_product(m: f64, r: &SmoothFn1D) -> SmoothFn1D {
    let r = r.clone();
    SmoothFn1D::new(r.domain(), format!("{m}x^2+x^3 R"), move |x| {
        let [a, b, c, d, e] = r.derivs(x);
        let x2 = x * x;
        let x3 = x2 * x;
        [
            m * x2 + x3 * a,
            2.0 * m * x + 3.0 * x2 * a + x3 * b,
            2.0 * m + 6.0 * x * a + 6.0 * x2 * b + x3 * c,
            6.0 * a + 18.0 * x * b + 9.0 * x2 * c + x3 * d,
            24.0 * b + 36.0 * x * c + 12.0 * x2 * d + x3 * e,
        ]
    })
}

/// Richardson-extrapolated central differences of the lifted `u_x` at 0.
pub fn taylor_finite_differences(m: f64, r: &SmoothFn1D) -> Result<TaylorJet> {
    check_m(m)?;
    let [r0, r1, r2, ..] = r.derivs(0.0);
    let h = 4e-3 / (1.0 + (r0.abs() + r1.abs() + r2.abs()) / m);
    let dom = r.domain();
    if dom.lo() > -2.0 * h || dom.hi() < 2.0 * h {
        return Err(Error::DomainViolation { lo: -2.0 * h, hi: 2.0 * h, dlo: dom.lo(), dhi: dom.hi() });
    }
    let f = taylor_product(m, r).with_domain(crate::func_core::Interval::centered(0.0, 2.0 * h)?);
    let lifted = lift_with(&f, SignConvention::OddAbout(0.0), 65)?;
    let q = |x: f64| lifted.u_x(x);
    let stencil = |h: f64| {
        let (p1, m1, p2, m2) = (q(h), q(-h), q(2.0 * h), q(-2.0 * h));
        [(p1 - m1) / (2.0 * h), (p1 - 2.0 * q(0.0) + m1) / (h * h), (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h)]
    };
    let a = stencil(h);
    let b = stencil(h / 2.0);
    let rich = |k: usize| b[k] + (b[k] - a[k]) / 3.0;
    Ok(TaylorJet { d2: rich(0), d3: rich(1), d4: rich(2) })
}

/// Compares the closed form with finite differences to `1e-6 (1 + |d|)`.
pub fn taylor_report(m: f64, r: &SmoothFn1D, cfg: &CheckConfig) -> Result<CertReport> {
    let exact = nondegenerate_taylor(m, r)?;
    let fd = taylor_finite_differences(m, r)?;
    let mut report = CertReport::new("taylor", cfg.grid_params());
    let mut worst = 0.0f64;
    for (name, e, n) in [("d2", exact.d2, fd.d2), ("d3", exact.d3, fd.d3), ("d4", exact.d4, fd.d4)] {
        report.metric(name, e);
        report.metric(format!("{name}FiniteDiff"), n);
        let err = (e - n).abs() / (1.0 + e.abs());
        worst = worst.max(err);
        if err > 1e-6 {
            report.fail(0.0, None, n, format!("{name}: closed form {e} vs finite differences {n}"));
        }
    }
    report.constant(worst);
    Ok(report)
}
