use super::interpolation::interpolation_constants;
use super::lift::{lift_with, third, zero_threshold, SignConvention};
use super::quotient::{g_derivs, h_derivs};
use super::CheckConfig;
use crate::certify::CertReport;
use crate::error::{Error, Result};
use crate::func_core::{ck_norm, lipschitz_seminorm, rescale, Grid1D, Interval, SmoothFn1D};

/// Relative size of `f'` below which a sign is treated as roundoff.
const SIGN_REL: f64 = 1e-12;
/// Agreement required between successive refinements of a supremum.
const REFINE_REL: f64 = 0.05;
/// Agreement required between an extension value and its one-sided limits.
const LIMIT_TOL: f64 = 1e-4;
/// Samples used for the local fourth-derivative bound of the ladder check.
const LADDER_SAMPLES: usize = 257;

/// Which half of the third-derivative argument applies at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Branch {
    /// `f(x) >= x^4`: quotient-field estimates.
    Case1,
    /// `f(x) <= x^4`: interpolation at scale `f(x)^{1/4}`.
    Case2,
}

/// Ties `f(x) = x^4` go to [`Branch::Case2`].
pub fn dispatch_branch(f: &SmoothFn1D, x: f64) -> Branch {
    if f.eval(x) <= x.powi(4) {
        Branch::Case2
    } else {
        Branch::Case1
    }
}

/// Hypothesis set for [`certify_c21_1d`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PositivityMode {
    /// `f >= 0`, `(x - c) f' >= 0` about the interval center `c`.
    ZeroAllowed,
    /// `f > 0` and monotone; `u_x` keeps one sign.
    StrictlyPositive,
}

/// Value of `u_xx` at a zero of `f` with the numerical one-sided limits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroExtension {
    pub x: f64,
    pub value: f64,
    pub left: f64,
    pub right: f64,
}

struct Scan {
    threshold: f64,
    min: (f64, f64),
}

/// Rejects samples below `-threshold` and returns the threshold and the minimum.
fn scan_nonneg(f: &SmoothFn1D, dom: Interval, n: usize) -> Result<Scan> {
    let threshold = zero_threshold(ck_norm(f, 0, dom, n)?);
    let mut min = (f64::NAN, f64::INFINITY);
    for x in dom.linspace(n) {
        let v = f.eval(x);
        if v < -threshold {
            return Err(Error::NegativeFunction { x, value: v });
        }
        if v < min.1 {
            min = (x, v);
        }
    }
    Ok(Scan { threshold, min })
}

fn check_monotone_about(f: &SmoothFn1D, dom: Interval, c: f64, n: usize) -> Result<()> {
    let slack = SIGN_REL * (1.0 + ck_norm(f, 1, dom, n)?);
    for x in dom.linspace(n) {
        let v = (x - c) * f.deriv(x, 1);
        if v < -slack * (x - c).abs() {
            return Err(Error::MonotonicityViolation { x, value: v });
        }
    }
    Ok(())
}

/// Sign of `u_x` that makes `u_xx >= 0` for monotone positive `f`.
fn constant_sign(f: &SmoothFn1D, dom: Interval, n: usize) -> Result<SignConvention> {
    let slack = SIGN_REL * (1.0 + ck_norm(f, 1, dom, n)?);
    let mut up = None;
    let mut down = None;
    for x in dom.linspace(n) {
        let d = f.deriv(x, 1);
        if d < -slack && down.is_none() {
            down = Some((x, d));
        }
        if d > slack && up.is_none() {
            up = Some((x, d));
        }
    }
    match (up, down) {
        (_, None) => Ok(SignConvention::Nonnegative),
        (None, Some(_)) => Ok(SignConvention::Nonpositive),
        (Some(_), Some((x, d))) => Err(Error::MonotonicityViolation { x, value: d }),
    }
}

fn argmax(pairs: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    pairs.fold((f64::NAN, 0.0), |best, p| if p.1 > best.1 { p } else { best })
}

/// Sampled `|f'| <= (3/2) ||f||_{C^2(2I)}^{1/2} f^{1/2}` on `I`.
pub fn check_gradient_bound(f: &SmoothFn1D, i: Interval, cfg: &CheckConfig) -> Result<CertReport> {
    let i2 = i.dilate(2.0);
    i2.require_within(&f.domain())?;
    let scan = scan_nonneg(f, i2, cfg.norm_samples)?;
    let c2 = ck_norm(f, 2, i2, cfg.norm_samples)?;
    let root = c2.sqrt();
    let xs = i.linspace(cfg.samples);
    let rows = crate::par_map(&xs, |&x| {
        let [f0, f1, ..] = f.derivs(x);
        (x, f1.abs(), 1.5 * root * f0.max(0.0).sqrt())
    });
    let mut report = CertReport::new("gradient_bound", cfg.grid_params());
    let mut violations = 0usize;
    let mut worst = (f64::NAN, 0.0);
    for &(x, lhs, rhs) in &rows {
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs > cfg.tol.abs {
            f64::INFINITY
        } else {
            0.0
        };
        if ratio > worst.1 || worst.0.is_nan() {
            worst = (x, ratio);
        }
        if !cfg.tol.le(lhs, rhs) {
            violations += 1;
            if violations == 1 {
                report.fail(x, None, ratio, format!("|f'| exceeds the bound at x = {x}"));
            }
        }
    }
    report.constant(worst.1);
    report.witness(worst.0, None, worst.1);
    report.metric("c2Norm", c2);
    report.metric("violations", violations as f64);
    report.metric("zeroThreshold", scan.threshold);
    Ok(report)
}

fn sup_uxxx(f: &SmoothFn1D, i: Interval, n: usize, threshold: f64) -> (f64, f64) {
    let xs = i.linspace(n);
    let vals = crate::par_map(&xs, |&x| {
        let [f0, f1, f2, ..] = f.derivs(x);
        if f0 >= threshold {
            third(f0, f1, f2).abs()
        } else {
            0.0
        }
    });
    argmax(xs.into_iter().zip(vals))
}

/// `sup_I |u_xxx| / ||f||_{C^4(2I)}^{1/2}`, stabilised over three refinements.
pub fn third_derivative_constant(f: &SmoothFn1D, i: Interval, cfg: &CheckConfig) -> Result<CertReport> {
    let i2 = i.dilate(2.0);
    i2.require_within(&f.domain())?;
    let scan = scan_nonneg(f, i2, cfg.norm_samples)?;
    check_monotone_about(f, i2, i.center(), cfg.norm_samples)?;
    let n4 = ck_norm(f, 4, i2, cfg.norm_samples)?;
    let n = cfg.samples;
    let sups: Vec<(f64, f64)> = [n, 2 * n - 1, 4 * n - 3].iter().map(|&m| sup_uxxx(f, i, m, scan.threshold)).collect();
    let mut report = CertReport::new("third_derivative_constant", cfg.grid_params());
    let (x, sup) = sups[2];
    for w in sups.windows(2) {
        let (a, b) = (w[0].1, w[1].1);
        if (b - a).abs() > REFINE_REL * b.max(a) + cfg.tol.abs {
            report.fail(w[1].0, None, b, format!("sup |u_xxx| moved from {a} to {b} under refinement"));
        }
    }
    let constant = if n4 > 0.0 { sup / n4.sqrt() } else { 0.0 };
    report.constant(constant);
    report.witness(x, None, sup);
    report.metric("supUxxx", sup);
    report.metric("normC4", n4);
    for (k, s) in sups.iter().enumerate() {
        report.metric(format!("supRefine{k}"), s.1);
    }
    Ok(report)
}

/// Case 2 interpolation ratios or Case 1 quotient-field ratios at `x`.
pub fn check_derivative_ladder(f: &SmoothFn1D, x: f64, branch: Branch, cfg: &CheckConfig) -> Result<CertReport> {
    let [f0, f1, f2, f3, _] = f.derivs(x);
    if !(f0 > 0.0) {
        return Err(Error::PositivityViolation { x, value: f0 });
    }
    let x4 = x.powi(4);
    let mut report = CertReport::new("derivative_ladder", cfg.grid_params());
    match branch {
        Branch::Case2 => {
            if f0 > x4 * (1.0 + 1e-12) {
                return Err(Error::BranchPrecondition { x, f: f0, x4 });
            }
            let eps = f0.powf(0.25);
            let seg = if x > 0.0 { Interval::new(x - eps, x)? } else { Interval::new(x, x + eps)? };
            seg.require_within(&f.domain())?;
            let m4 = seg.linspace(LADDER_SAMPLES).into_iter().map(|t| f.deriv(t, 4).abs()).fold(0.0, f64::max);
            let r1 = f1.abs() / f0.powf(0.75);
            let r2 = f2.abs() / f0.sqrt();
            let r3 = f3.abs() / f0.powf(0.25);
            let c = interpolation_constants();
            let lhs = r1 + r2 + r3;
            let rhs = c.a + c.b * m4;
            report.constant(r1.max(r2).max(r3));
            report.witness(x, None, lhs);
            for (k, v) in [("r1", r1), ("r2", r2), ("r3", r3), ("lhs", lhs), ("rhs", rhs), ("eps", eps), ("max4", m4)] {
                report.metric(k, v);
            }
            if !cfg.tol.le(lhs, rhs) {
                report.fail(x, None, lhs, format!("interpolation inequality fails: {lhs} > {rhs}"));
            }
        }
        Branch::Case1 => {
            if f0 < x4 * (1.0 - 1e-12) {
                return Err(Error::BranchPrecondition { x, f: f0, x4 });
            }
            let d = f.domain();
            let [z0, z1, ..] = f.derivs(0.0);
            let c1 = ck_norm(f, 1, d, cfg.norm_samples)?;
            if x == 0.0 || !d.contains(0.0) || z0.abs() > zero_threshold(c1) || z1.abs() > cfg.tol.abs * (1.0 + c1) {
                return Err(Error::NotAZero { x: 0.0, f: z0, fp: z1 });
            }
            let switch = 0.05 * d.lo().abs().max(d.hi().abs());
            let g1 = g_derivs(f, x, switch)[1];
            let h1 = h_derivs(f, x, switch)[1];
            let combo = 2.0 * f0 * x * h1 - x4 * g1 * g1 - 2.0 * x * f0 * g1;
            let direct = 2.0 * f0 * f2 - f1 * f1;
            let scale = (2.0 * f0 * f2).abs() + f1 * f1;
            let ratio = direct.abs() / f0.powf(1.5);
            report.constant(ratio);
            report.witness(x, None, ratio);
            report.metric("xg1OverSqrtF", (x * g1).abs() / f0.sqrt());
            report.metric("x2g1OverF34", (x * x * g1).abs() / f0.powf(0.75));
            report.metric("xh1OverSqrtF", (x * h1).abs() / f0.sqrt());
            report.metric("identityResidual", (combo - direct).abs());
            if (combo - direct).abs() > cfg.tol.abs * (1.0 + scale) || !ratio.is_finite() {
                report.fail(x, None, combo - direct, "quotient-field identity for 2ff''-f'^2 fails");
            }
        }
    }
    Ok(report)
}

fn one_sided_uxx(f: &SmoothFn1D, x0: f64, side: f64, h0: f64) -> f64 {
    let v = |h: f64| {
        let [f0, f1, ..] = f.derivs(x0 + side * h);
        if f0 > 0.0 {
            side * f1 / (2.0 * f0.sqrt())
        } else {
            0.0
        }
    };
    // Shrink the step until successive Richardson estimates settle.
    let est = |h: f64| 2.0 * v(h / 2.0) - v(h);
    let mut prev = est(h0);
    for k in 1..=8 {
        let next = est(h0 * 0.25f64.powi(k));
        if (next - prev).abs() <= 0.1 * LIMIT_TOL * next.abs().max(1.0) {
            return next;
        }
        prev = next;
    }
    prev
}

/// `u_xx(0)` for `f` vanishing at 0: `sqrt(f''(0)/2)`, or 0 when `f = O(x^4)`.
pub fn extend_uxx_across_zero(f: &SmoothFn1D, cfg: &CheckConfig) -> Result<f64> {
    extend_uxx_at(f, 0.0, cfg).map(|e| e.value)
}

/// [`extend_uxx_across_zero`] at `x0` with `u_x` odd about `x0`; checks both one-sided limits.
pub fn extend_uxx_at(f: &SmoothFn1D, x0: f64, cfg: &CheckConfig) -> Result<ZeroExtension> {
    let d = f.domain();
    if !d.contains(x0) {
        return Err(Error::DomainViolation { lo: x0, hi: x0, dlo: d.lo(), dhi: d.hi() });
    }
    let c2 = ck_norm(f, 2, d, cfg.norm_samples)?;
    let [f0, f1, f2, ..] = f.derivs(x0);
    let threshold = zero_threshold(c2);
    if f0 < -threshold || f2 < -cfg.tol.abs * (1.0 + c2) {
        return Err(Error::NegativeFunction { x: x0, value: f0.min(f2) });
    }
    if f0 > threshold || f1.abs() > cfg.tol.abs * (1.0 + c2) {
        return Err(Error::NotAZero { x: x0, f: f0, fp: f1 });
    }
    let value = (f2.max(0.0) / 2.0).sqrt();
    let h0 = 1e-3 * d.radius().min(1.0);
    let left = if x0 - h0 >= d.lo() { one_sided_uxx(f, x0, -1.0, h0) } else { value };
    let right = if x0 + h0 <= d.hi() { one_sided_uxx(f, x0, 1.0, h0) } else { value };
    let tol = LIMIT_TOL * value.max(1.0);
    if (left - value).abs() > tol || (right - value).abs() > tol {
        return Err(Error::LimitMismatch { x: x0, left, right, ext: value });
    }
    Ok(ZeroExtension { x: x0, value, left, right })
}

fn bisect<P: Fn(f64) -> bool>(mut inside: f64, mut outside: f64, is_outside: P) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if is_outside(mid) {
            outside = mid;
        } else {
            inside = mid;
        }
    }
    inside
}

fn ternary_min(f: &SmoothFn1D, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if m1 >= m2 {
            break;
        }
        if f.eval(m1) <= f.eval(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    0.5 * (a + b)
}

/// Edges of the zero set of `f` inside `i`, refined below the grid spacing.
fn zero_boundaries(f: &SmoothFn1D, i: Interval, threshold: f64, n: usize) -> Vec<f64> {
    let xs = i.linspace(n);
    let vals: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    let Some(lo) = vals.iter().position(|&v| v < threshold) else {
        return Vec::new();
    };
    let hi = vals.iter().rposition(|&v| v < threshold).unwrap_or(lo);
    let exact: Vec<usize> = (lo..=hi).filter(|&k| vals[k] <= 0.0).collect();
    let mut out = Vec::new();
    if let (Some(&e_lo), Some(&e_hi)) = (exact.first(), exact.last()) {
        if lo > 0 {
            out.push(bisect(xs[e_lo], xs[lo - 1], |x| f.eval(x) > 0.0));
        }
        if hi + 1 < n {
            out.push(bisect(xs[e_hi], xs[hi + 1], |x| f.eval(x) > 0.0));
        }
    } else {
        let a = xs[lo.saturating_sub(1)];
        let b = xs[(hi + 1).min(n - 1)];
        out.push(ternary_min(f, a, b));
    }
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    out
}

/// Lipschitz constant of the extended `u_xx` on `I`, with zero-set edge values.
pub fn certify_c21_1d(f: &SmoothFn1D, i: Interval, mode: PositivityMode, cfg: &CheckConfig) -> Result<CertReport> {
    let i2 = i.dilate(2.0);
    i2.require_within(&f.domain())?;
    let ns = cfg.norm_samples;
    let scan = scan_nonneg(f, i2, ns)?;
    let convention = match mode {
        PositivityMode::ZeroAllowed => {
            check_monotone_about(f, i2, i.center(), ns)?;
            if scan.min.1 < scan.threshold {
                SignConvention::OddAbout(i.center())
            } else {
                constant_sign(f, i2, ns)?
            }
        }
        PositivityMode::StrictlyPositive => {
            if !(scan.min.1 > scan.threshold) {
                return Err(Error::PositivityViolation { x: scan.min.0, value: scan.min.1 });
            }
            constant_sign(f, i2, ns)?
        }
    };
    let local = f.with_domain(i2);
    let lifted = lift_with(&local, convention, ns)?;
    let mut report = CertReport::new("c21_1d", cfg.grid_params());
    report.note(format!("sign convention {convention:?}"));

    let edges = zero_boundaries(f, i, scan.threshold, cfg.samples);
    for (k, &x) in edges.iter().enumerate() {
        match extend_uxx_at(&local, x, cfg) {
            Ok(e) => {
                report.witness(x, None, e.value);
                report.metric(format!("edge{k}.x"), x);
                report.metric(format!("edge{k}.uxx"), e.value);
                report.metric(format!("edge{k}.left"), e.left);
                report.metric(format!("edge{k}.right"), e.right);
            }
            Err(Error::LimitMismatch { left, right, ext, .. }) => {
                report.fail(x, None, ext, format!("u_xx limits {left}, {right} differ from {ext}"));
            }
            Err(e) => return Err(e),
        }
    }

    let n = cfg.samples | 1;
    let fine = Grid1D::sample(i, n, |x| lifted.u_xx_extended(x))?;
    let coarse = Grid1D::sample(i, n / 2 + 1, |x| lifted.u_xx_extended(x))?;
    let l_fine = lipschitz_seminorm(&fine)?;
    let l_coarse = lipschitz_seminorm(&coarse)?;
    let max_uxx = fine.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some((x, v)) = fine.valid_points().find(|&(_, v)| v < -(cfg.tol.abs + cfg.tol.rel * max_uxx)) {
        report.fail(x, None, v, "u_xx is negative off the zero set");
    }
    // Growth under refinement is benign while the pointwise u_xxx bound explains it.
    let (xs, sup3) = sup_uxxx(f, i, n, scan.threshold);
    let explained = l_fine <= (1.0 + REFINE_REL) * sup3 + cfg.tol.abs;
    if l_fine > (1.0 + REFINE_REL) * l_coarse + cfg.tol.abs && !explained {
        report.fail(
            i.center(),
            None,
            l_fine,
            format!("Lipschitz estimate grows under refinement: {l_coarse} -> {l_fine}"),
        );
    }
    report.constant(l_fine);
    report.metric("lipschitzCoarse", l_coarse);
    report.metric("supUxxx", sup3);
    report.metric("supUxxxAt", xs);
    Ok(report)
}

/// Checks `|u_xxx| <= C s^{-3} ||f||^{1/2}_{C^4(2sI)}` on `sI`, computing the
/// supremum directly and through the rescaled lift `u(s x)` on `I`.
pub fn scaled_bound_check(f: &SmoothFn1D, s: f64, cfg: &CheckConfig) -> Result<CertReport> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidParameter { name: "s", value: s, reason: "must lie in (0, 1)" });
    }
    let si = Interval::centered(0.0, s)?;
    let s2i = si.dilate(2.0);
    s2i.require_within(&f.domain())?;
    let direct = third_derivative_constant(f, si, cfg)?;
    let fbar = rescale(&f.with_domain(s2i), 1.0 / s)?.scaled(s * s);
    let unit = third_derivative_constant(&fbar, Interval::unit(), cfg)?;
    let sup1 = direct.metrics["supUxxx"];
    let sup2 = unit.metrics["supUxxx"] / s.powi(3);
    let c = unit.empirical_constant;
    let bound = c * s.powi(-3) * direct.metrics["normC4"].sqrt();
    let mut report = CertReport::new("scaled_bound", cfg.grid_params());
    report.absorb(&direct);
    report.absorb(&unit);
    report.constant(c);
    report.metric("supDirect", sup1);
    report.metric("supRescaled", sup2);
    report.metric("bound", bound);
    report.metric("slack", bound - sup1);
    if (sup1 - sup2).abs() > 1e-8 * (1.0 + sup1) {
        report.fail(s, None, sup1 - sup2, "direct and rescaled suprema disagree");
    }
    if !cfg.tol.le(sup1, bound) {
        report.fail(s, None, sup1, format!("scaled bound fails: {sup1} > {bound}"));
    }
    Ok(report)
}
