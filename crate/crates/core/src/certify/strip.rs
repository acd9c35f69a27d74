use serde::{Deserialize, Serialize};

use super::report::{CertReport, GridParams};
use crate::error::{Error, Result};
use crate::func_core::{ck_norm, Derivs, Interval, SmoothFn1D, Tolerances, MAX_ORDER};
use crate::graph_surface::{directional_square, Field2D};
use crate::sqrt_lift::{certify_c21_1d, lift::zero_threshold, CheckConfig, PositivityMode};

/// Lines per strip.
pub const LINES_PER_STRIP: usize = 257;
/// Samples of `u_d` on `[-2 delta, 2 delta]` for zero detection.
pub const ZERO_SCAN: usize = 257;
/// Nodes per side of the convexity gate grid.
pub const GATE_GRID: usize = 257;
/// Samples of each per-line one-dimensional certificate.
pub const LINE_SAMPLES: usize = 513;

const BISECTION_STEPS: usize = 60;

/// Certification direction; `Z` and `W` are the diagonals `(1, 1)` and `(1, -1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    X,
    Y,
    Z,
    W,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::X, Direction::Y, Direction::Z, Direction::W];

    /// Unit vector `(l, m)`.
    pub fn unit(self) -> (f64, f64) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Direction::X => (1.0, 0.0),
            Direction::Y => (0.0, 1.0),
            Direction::Z => (s, s),
            Direction::W => (s, -s),
        }
    }

    /// Integer stencil step `(di, dj)`; its length is 1 or `sqrt 2`.
    pub fn step(self) -> (i64, i64) {
        match self {
            Direction::X => (1, 0),
            Direction::Y => (0, 1),
            Direction::Z => (1, 1),
            Direction::W => (1, -1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::X => "x",
            Direction::Y => "y",
            Direction::Z => "z",
            Direction::W => "w",
        }
    }

    /// Point at parameter `t` on the line at signed distance `offset` from the origin.
    pub fn point(self, t: f64, offset: f64) -> (f64, f64) {
        let (l, m) = self.unit();
        (t * l - offset * m, t * m + offset * l)
    }
}

/// Route taken on one line of a strip.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "camelCase")]
pub enum LineBranch {
    /// `f > 0` on `[-2 delta, 2 delta]`: certificate on `[-delta, delta]` with `s = delta`.
    NoZero,
    /// Zero at `x0`: certificate on `[x0 - r0/2, x0 + r0/2]` with `s = r0/2`.
    ZeroAt { x0: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LinePlan {
    pub offset: f64,
    #[serde(flatten)]
    pub branch: LineBranch,
    pub s: f64,
    pub sup_uxxx: f64,
    pub lipschitz_uxx: f64,
    /// `sup |u_ddd| s^3 / ||f||^{1/2}_{C^4(2sI)}`.
    pub scaled_constant: f64,
    pub passed: bool,
}

/// Strip geometry for one direction with the route chosen on every line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StripCoverPlan {
    pub direction: Direction,
    pub r: f64,
    pub delta: f64,
    pub r0: f64,
    pub r1: f64,
    /// Half the smallest `|u_d|` on the strip ends `t = +-2 delta`.
    pub eta: f64,
    /// `eta / ||u||_{C^{1,1}}`.
    pub delta_eta: f64,
    pub lines: Vec<LinePlan>,
}

impl StripCoverPlan {
    pub fn new(direction: Direction, r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter { name: "r", value: r, reason: "must be positive" });
        }
        let delta = r / 9.0;
        Ok(StripCoverPlan {
            direction,
            r,
            delta,
            r0: 6.0 * delta,
            r1: (r * r - delta * delta).sqrt(),
            eta: 0.0,
            delta_eta: 0.0,
            lines: Vec::new(),
        })
    }

    /// `-r1 < x0 - r0 < x0 + r0 < r1`, `x0 + r0/2 >= delta`, `x0 - r0/2 <= -delta`.
    pub fn inclusions_hold(&self, x0: f64) -> bool {
        let slack = 1e-12 * self.r;
        -self.r1 < x0 - self.r0
            && x0 + self.r0 < self.r1
            && x0 + self.r0 / 2.0 >= self.delta - slack
            && x0 - self.r0 / 2.0 <= -self.delta + slack
    }
}

/// Derivatives of `t -> g(p + t e)` for unit `e = (l, m)`.
fn directional_derivs(g: &Field2D, x: f64, y: f64, l: f64, m: f64) -> Derivs {
    let binom = [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0, 0.0],
        [1.0, 3.0, 3.0, 1.0, 0.0],
        [1.0, 4.0, 6.0, 4.0, 1.0],
    ];
    let jet = g.jet(x, y, MAX_ORDER);
    let partial = |i: usize, j: usize| match &jet {
        Some(jt) => jt.partial(i, j),
        None => g.partial(x, y, i, j).unwrap_or(f64::NAN),
    };
    std::array::from_fn(|k| {
        (0..=k)
            .filter(|&a| binom[k][a] != 0.0 && (a == 0 || m != 0.0) && (a == k || l != 0.0))
            .map(|a| binom[k][a] * l.powi((k - a) as i32) * m.powi(a as i32) * partial(k - a, a))
            .sum()
    })
}

fn directional_first(u: &Field2D, x: f64, y: f64, l: f64, m: f64) -> f64 {
    let mut s = 0.0;
    if l != 0.0 {
        s += l * u.partial(x, y, 1, 0).unwrap_or(f64::NAN);
    }
    if m != 0.0 {
        s += m * u.partial(x, y, 0, 1).unwrap_or(f64::NAN);
    }
    s
}

/// Sampled convexity of `u` on the disc of radius `r`: second differences along the
/// four directions must be `>= -tol`. A failure is witnessed where a line crosses
/// from convex to non-convex behaviour, with the largest jump between the two.
pub fn convexity_gate(u: &Field2D, r: f64) -> Result<CertReport> {
    let n = GATE_GRID;
    let xs = Interval::centered(0.0, r)?.linspace(n);
    let h = xs[1] - xs[0];
    let values: Vec<f64> = crate::par_map(&(0..n * n).collect::<Vec<_>>(), |&k| {
        let (x, y) = (xs[k % n], xs[k / n]);
        if x * x + y * y <= r * r * (1.0 + 1e-12) {
            u.eval(x, y)
        } else {
            f64::NAN
        }
    });
    let at = |i: i64, j: i64| -> f64 {
        if i < 0 || j < 0 || i >= n as i64 || j >= n as i64 {
            f64::NAN
        } else {
            values[j as usize * n + i as usize]
        }
    };
    let mut report = CertReport::new("convexity_gate", GridParams::plane(n, n, Tolerances::default()));
    let mut c11 = 0.0f64;
    let mut u_max = 0.0f64;
    for dir in Direction::ALL {
        let (di, dj) = dir.step();
        let len2 = ((di * di + dj * dj) as f64) * h * h;
        // (jump, x, y, value) of the best convex/non-convex boundary, and the worst node.
        let mut boundary: Option<(f64, f64, f64, f64)> = None;
        let mut worst: Option<(f64, f64, f64)> = None;
        for j in 0..n as i64 {
            for i in 0..n as i64 {
                let c = at(i, j);
                let d2 = |i: i64, j: i64| {
                    let c = at(i, j);
                    let raw = at(i + di, j + dj) + at(i - di, j - dj) - 2.0 * c;
                    if raw.abs() <= 1e-12 * (1.0 + c.abs()) {
                        0.0
                    } else {
                        raw / len2
                    }
                };
                let v = d2(i, j);
                if !v.is_finite() {
                    continue;
                }
                u_max = u_max.max(c.abs());
                c11 = c11.max(v.abs());
                if v >= 0.0 {
                    continue;
                }
                let (x, y) = (xs[i as usize], xs[j as usize]);
                if worst.is_none_or(|w| v < w.2) {
                    worst = Some((x, y, v));
                }
                for s in [-1, 1] {
                    let nb = d2(i + s * di, j + s * dj);
                    if nb.is_finite() && nb >= 0.0 {
                        let jump = nb - v;
                        let better = match boundary {
                            None => true,
                            Some((bj, bx, by, _)) => {
                                jump > bj * (1.0 + 1e-9)
                                    || (jump >= bj * (1.0 - 1e-9)
                                        && (x.abs() < bx.abs() - 1e-12 || (x.abs() <= bx.abs() + 1e-12 && y > by)))
                            }
                        };
                        if better {
                            boundary = Some((jump, x, y, v));
                        }
                    }
                }
            }
        }
        if let Some((x, y, v)) = boundary
            .map(|(j, x, y, v)| {
                report.metric(format!("{}.jump", dir.name()), j);
                (x, y, v)
            })
            .or(worst)
        {
            report.fail(x, Some(y), v, format!("second difference along {} is {v} at ({x}, {y})", dir.name()));
            report.metric("direction", Direction::ALL.iter().position(|d| *d == dir).unwrap_or(0) as f64);
            return Ok(report);
        }
    }
    report.constant(c11);
    report.metric("c11Norm", c11.max(u_max));
    Ok(report)
}

fn gate_error(report: &CertReport) -> Error {
    let w =
        report.witnesses.first().cloned().unwrap_or(super::report::Witness { x: f64::NAN, y: None, value: f64::NAN });
    Error::NotConvex { x: w.x, y: w.y.unwrap_or(f64::NAN), value: w.value }
}

/// Strip cover along `x` with the default per-line sampling.
pub fn strip_cover(u: &Field2D, r: f64) -> Result<(StripCoverPlan, CertReport)> {
    strip_cover_dir(u, r, Direction::X, &CheckConfig::default().with_samples(LINE_SAMPLES))
}

/// Certifies `u` in direction `dir` on every line of the strip `|offset| <= delta`.
pub fn strip_cover_dir(u: &Field2D, r: f64, dir: Direction, cfg: &CheckConfig) -> Result<(StripCoverPlan, CertReport)> {
    let mut plan = StripCoverPlan::new(dir, r)?;
    let rect = u.rect();
    if !(rect.contains(-r, -r) && rect.contains(r, r)) {
        return Err(Error::DomainViolation {
            lo: -r,
            hi: r,
            dlo: rect.x.lo().max(rect.y.lo()),
            dhi: rect.x.hi().min(rect.y.hi()),
        });
    }
    let gate = convexity_gate(u, r)?;
    if !gate.passed {
        return Err(gate_error(&gate));
    }
    let (l, m) = dir.unit();
    let f_field = directional_square(u, l, m)?;
    let offsets = Interval::centered(0.0, plan.delta)?.linspace(LINES_PER_STRIP);
    let probe = plan.clone();
    let results = crate::par_map(&offsets, |&offset| certify_line(u, &f_field, &probe, offset, cfg));

    let name = format!("strip_cover_{}", dir.name());
    let mut report = CertReport::new(name, GridParams::line(LINES_PER_STRIP, cfg.norm_samples, cfg.tol));
    let c11 = gate.metrics.get("c11Norm").copied().unwrap_or(0.0);
    let mut eta = f64::INFINITY;
    let (mut zero_lines, mut sup3, mut lip, mut scaled) = (0usize, 0.0f64, 0.0f64, 0.0f64);
    for (offset, res) in offsets.iter().zip(results) {
        let (line, ends, failure) = res;
        eta = eta.min(0.5 * ends);
        if let LineBranch::ZeroAt { .. } = line.branch {
            zero_lines += 1;
        }
        sup3 = sup3.max(line.sup_uxxx);
        lip = lip.max(line.lipschitz_uxx);
        scaled = scaled.max(line.scaled_constant);
        if let Some((t, reason)) = failure {
            let (x, y) = dir.point(t, *offset);
            report.fail(x, Some(y), line.sup_uxxx, format!("line {offset}: {reason}"));
        }
        plan.lines.push(line);
    }
    plan.eta = if eta.is_finite() { eta } else { 0.0 };
    plan.delta_eta = if c11 > 0.0 { plan.eta / c11 } else { f64::INFINITY };
    report.constant(sup3);
    report.metric("delta", plan.delta);
    report.metric("r0", plan.r0);
    report.metric("r1", plan.r1);
    report.metric("eta", plan.eta);
    report.metric("deltaEta", plan.delta_eta);
    report.metric("c11Norm", c11);
    report.metric("zeroLines", zero_lines as f64);
    report.metric("noZeroLines", (plan.lines.len() - zero_lines) as f64);
    report.metric("supUxxx", sup3);
    report.metric("lipschitzUxx", lip);
    report.metric("scaledConstant", scaled);
    Ok((plan, report))
}

/// One line: the plan entry, `min |u_d|` at the strip ends, and a failure (parameter, reason).
fn certify_line(
    u: &Field2D,
    f_field: &Field2D,
    plan: &StripCoverPlan,
    offset: f64,
    cfg: &CheckConfig,
) -> (LinePlan, f64, Option<(f64, String)>) {
    let dir = plan.direction;
    let (l, m) = dir.unit();
    let g = f_field.clone();
    let domain = Interval::centered(0.0, plan.r1).expect("positive radius");
    let f = SmoothFn1D::new(domain, format!("u_{}^2 at offset {offset}", dir.name()), move |t| {
        let (x, y) = dir.point(t, offset);
        directional_derivs(&g, x, y, l, m)
    });
    let ud = |t: f64| {
        let (x, y) = dir.point(t, offset);
        directional_first(u, x, y, l, m)
    };
    let d2 = 2.0 * plan.delta;
    let ts = Interval::centered(0.0, d2).expect("positive").linspace(ZERO_SCAN);
    let vs: Vec<f64> = ts.iter().map(|&t| ud(t)).collect();
    let fs: Vec<f64> = ts.iter().map(|&t| f.eval(t)).collect();
    let ends = vs[0].abs().min(vs[ZERO_SCAN - 1].abs());
    let thr = zero_threshold(fs.iter().fold(0.0f64, |a, v| a.max(v.abs())));

    let x0 = if let Some(k) = (1..ZERO_SCAN).find(|&k| vs[k - 1] < 0.0 && vs[k] >= 0.0) {
        let (mut lo, mut hi) = (ts[k - 1], ts[k]);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if ud(mid) >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    } else if let Some(k) = (0..ZERO_SCAN).find(|&k| fs[k] < thr) {
        let end = (k..ZERO_SCAN).take_while(|&q| fs[q] < thr).last().unwrap_or(k);
        Some(0.5 * (ts[k] + ts[end]))
    } else {
        None
    };

    let (branch, s, interval, mode) = match x0 {
        Some(x0) => {
            let s = plan.r0 / 2.0;
            (LineBranch::ZeroAt { x0 }, s, Interval::centered(x0, s), PositivityMode::ZeroAllowed)
        }
        None => (LineBranch::NoZero, plan.delta, Interval::centered(0.0, plan.delta), PositivityMode::StrictlyPositive),
    };
    let mut line =
        LinePlan { offset, branch, s, sup_uxxx: 0.0, lipschitz_uxx: 0.0, scaled_constant: 0.0, passed: true };
    if let Some(x0) = x0 {
        if !plan.inclusions_hold(x0) {
            line.passed = false;
            return (line, ends, Some((x0, format!("strip inclusions fail at x0 = {x0}"))));
        }
    }
    let outcome = interval.and_then(|i| {
        let rep = certify_c21_1d(&f, i, mode, cfg)?;
        let n4 = ck_norm(&f, 4, i.dilate(2.0), cfg.norm_samples)?;
        Ok((rep, n4))
    });
    match outcome {
        Ok((rep, n4)) => {
            line.sup_uxxx = rep.metrics.get("supUxxx").copied().unwrap_or(0.0);
            line.lipschitz_uxx = rep.empirical_constant;
            line.scaled_constant = if n4 > 0.0 { line.sup_uxxx * s.powi(3) / n4.sqrt() } else { 0.0 };
            line.passed = rep.passed;
            let failure = (!rep.passed).then(|| {
                let w = rep.witnesses.first().map_or(0.0, |w| w.x);
                (w, rep.notes.last().cloned().unwrap_or_else(|| "one-dimensional certificate failed".into()))
            });
            (line, ends, failure)
        }
        Err(e) => {
            line.passed = false;
            let t = match e {
                Error::MonotonicityViolation { x, .. }
                | Error::NegativeFunction { x, .. }
                | Error::PositivityViolation { x, .. } => x,
                _ => 0.0,
            };
            (line, ends, Some((t, e.to_string())))
        }
    }
}
