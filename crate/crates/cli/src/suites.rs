use std::fmt;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use c21_core::certify::{
    c21_seminorm_2d_on, convexity_gate, directional_certify_with, touch_cell_fraction, CertReport, GridParams,
    LineBranch, LINE_SAMPLES,
};
use c21_core::error::Error;
use c21_core::func_core::{ck_norm, Interval, SmoothFn1D, Tolerances, DEFAULT_NORM_SAMPLES};
use c21_core::gallery::{self, cantor_growth, oscillatory_blowup, us_sweep, FamilySpec, Trait};
use c21_core::graph_surface::{check_lsc, check_mollified_bound, touch_curve, Axis, Field2D, DEFAULT_GRID};
use c21_core::ingest::{ingest_field, ingest_profile};
use c21_core::radial_ma::{construct, named_profile, verify_radial_with, RadialProfile, RadialSolution};
use c21_core::sqrt_lift::lift::{lift_with, third, zero_threshold, SignConvention};
use c21_core::sqrt_lift::{
    certify_c21_1d, check_gradient_bound, check_interpolation_random, scaled_bound_check, third_derivative_constant,
    CheckConfig, PositivityMode,
};

/// Default number of random quartics for the interpolation suite.
pub const DEFAULT_TRIALS: usize = 1000;
/// Default disc radius of the strip suite.
pub const DEFAULT_RADIUS: f64 = 0.9;
/// Default grid of the surface suite.
pub const SURFACE_GRID: usize = 257;
/// Samples per plot curve.
pub const PLOT_SAMPLES: usize = 513;
/// The `u_s` parameters of the uniformity sweep.
pub const US_VALUES: [f64; 4] = [1.0, 0.1, 0.01, 0.001];
/// Cantor depths of the mollifier counterexample.
pub const CANTOR_DEPTHS: [u32; 3] = [6, 9, 12];
/// Oscillatory nodes used in the blow-up fit.
pub const OSCILLATORY_NODES: usize = 15;
/// Allowed change of the 2D seminorm when the grid is refined.
pub const SEMINORM_REFINE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Lemma21,
    Lemma22,
    Thm23,
    Thm25,
    Cor26,
    Radial,
    Surface,
    Strip,
    Counterexamples,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `all` runs them.
    pub const EACH: [Suite; 9] = [
        Suite::Lemma21,
        Suite::Lemma22,
        Suite::Thm23,
        Suite::Thm25,
        Suite::Cor26,
        Suite::Radial,
        Suite::Surface,
        Suite::Strip,
        Suite::Counterexamples,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma21 => "lemma21",
            Suite::Lemma22 => "lemma22",
            Suite::Thm23 => "thm23",
            Suite::Thm25 => "thm25",
            Suite::Cor26 => "cor26",
            Suite::Radial => "radial",
            Suite::Surface => "surface",
            Suite::Strip => "strip",
            Suite::Counterexamples => "counterexamples",
            Suite::All => "all",
        }
    }

    /// One-line description for `--help`.
    pub fn summary(self) -> &'static str {
        match self {
            Suite::Lemma21 => "gradient bound |f'| <= 3/2 ||f||_C2^1/2 f^1/2",
            Suite::Lemma22 => "interpolation constants on random admissible quartics",
            Suite::Thm23 => "uniform u_xxx constant and the u_s sharpness sweep",
            Suite::Thm25 => "C^{2,1} certificate across zeros of f",
            Suite::Cor26 => "C^{2,1} certificate for positive f",
            Suite::Radial => "radial Monge-Ampere construction",
            Suite::Surface => "mollifier, touch curve and 2D seminorm checks",
            Suite::Strip => "strip cover in four directions with mollified thirds",
            Suite::Counterexamples => "oscillatory, Cantor and non-convex counterexamples",
            Suite::All => "every suite with default inputs",
        }
    }

    fn default_family(self) -> Option<&'static str> {
        match self {
            Suite::Thm23 | Suite::Thm25 | Suite::Surface | Suite::Strip => Some("cusp:p=3"),
            Suite::Cor26 => Some("exp:lambda=1"),
            _ => None,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, UsageError> {
        Suite::EACH.iter().chain([Suite::All].iter()).find(|x| x.name() == s).copied().ok_or_else(|| {
            let names: Vec<&str> = Suite::EACH.iter().map(|x| x.name()).chain(["all"]).collect();
            UsageError(format!("unknown suite `{s}`; expected one of {}", names.join(", ")))
        })
    }
}

/// Invalid command-line input; maps to exit status 2.
#[derive(Clone, Debug, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuiteConfig {
    pub suite: Option<Suite>,
    /// Gallery selector such as `cusp:p=3`.
    pub family: Option<String>,
    /// Named radial profile or a CSV path.
    pub profile: Option<String>,
    /// CSV of a sampled 2D field.
    pub field: Option<PathBuf>,
    pub grid: Option<usize>,
    /// Absolute tolerance override.
    pub tol: Option<f64>,
    pub radius: Option<f64>,
}

/// Columns of plot data written next to the reports.
#[derive(Clone, Debug, PartialEq)]
pub struct Plot {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOutput {
    pub reports: Vec<(Suite, CertReport)>,
    pub plots: Vec<Plot>,
}

impl SuiteOutput {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|(_, r)| r.passed)
    }
}

type Run<T> = Result<T, UsageError>;

/// Setup errors are usage errors; violated hypotheses become failed reports.
fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::UnknownFamily(_)
            | Error::Malformed(_)
            | Error::Io(_)
            | Error::InvalidParameter { .. }
            | Error::InvalidInterval { .. }
            | Error::GridTooSmall { .. }
            | Error::OrderTooHigh(_)
            | Error::DomainViolation { .. }
            | Error::MissingPartial(..)
            | Error::TraitMismatch { .. }
            | Error::TauTooLarge { .. }
            | Error::NonPositiveFitInput { .. }
            | Error::DegenerateSpan { .. }
            | Error::UnnormalizedDirection { .. }
    )
}

/// A failed report carrying the point named by `e`.
pub fn failed_report(name: &str, e: &Error) -> CertReport {
    let (x, y, v) = match *e {
        Error::NotConvex { x, y, value } => (x, Some(y), value),
        Error::NotMonotone { x, y } => (x, Some(y), 0.0),
        Error::NegativeFunction { x, value }
        | Error::MonotonicityViolation { x, value }
        | Error::PositivityViolation { x, value } => (x, None, value),
        Error::BranchPrecondition { x, f, .. } | Error::NotAZero { x, f, .. } => (x, None, f),
        Error::LimitMismatch { x, ext, .. } => (x, None, ext),
        Error::NotRadial { r, a, .. } => (r, None, a),
        Error::ResidualTooLarge { r, residual, .. } => (r, None, residual),
        _ => (0.0, None, 0.0),
    };
    let mut rep = CertReport::new(name, GridParams::line(1, 1, Tolerances::default()));
    rep.fail(x, y, v, e.to_string());
    rep
}

fn check(name: &str, r: c21_core::Result<CertReport>) -> Run<CertReport> {
    match r {
        Ok(mut rep) => {
            rep.name = name.to_string();
            Ok(rep)
        }
        Err(e) if is_usage(&e) => Err(UsageError(format!("{name}: {e}"))),
        Err(e) => Ok(failed_report(name, &e)),
    }
}

fn usage<T>(r: c21_core::Result<T>) -> Run<T> {
    r.map_err(|e| UsageError(e.to_string()))
}

fn tolerances(cfg: &SuiteConfig) -> Tolerances {
    let mut t = Tolerances::default();
    if let Some(abs) = cfg.tol {
        t.abs = abs;
    }
    t
}

fn line_config(cfg: &SuiteConfig) -> CheckConfig {
    let n = cfg.grid.unwrap_or(DEFAULT_NORM_SAMPLES);
    CheckConfig { samples: n, norm_samples: n, tol: tolerances(cfg) }
}

/// Inner half of a family's domain, so that its double still fits.
fn half(f: &SmoothFn1D) -> Run<Interval> {
    let d = f.domain();
    usage(Interval::centered(d.center(), d.radius() / 2.0))
}

fn family_for(cfg: &SuiteConfig, suite: Suite) -> Run<Option<FamilySpec>> {
    match cfg.family.as_deref().or(suite.default_family()) {
        Some(sel) => usage(gallery::family(sel)).map(Some),
        None => Ok(None),
    }
}

fn fn1d(spec: &FamilySpec) -> Run<SmoothFn1D> {
    spec.fn1d.clone().ok_or_else(|| UsageError(format!("family `{}` has no one-dimensional function", spec.name)))
}

/// The 2D input: `--field` data or the family's field.
fn field_for(cfg: &SuiteConfig, suite: Suite) -> Run<(Field2D, String)> {
    if let Some(path) = &cfg.field {
        let file = File::open(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        let label = path.display().to_string();
        return Ok((usage(ingest_field(file, &label))?, label));
    }
    let spec = family_for(cfg, suite)?.expect("2D suites have a default family");
    let u =
        spec.fn2d.clone().ok_or_else(|| UsageError(format!("family `{}` has no two-dimensional field", spec.name)))?;
    Ok((u, spec.selector()))
}

/// A named profile or a CSV file, with the interpolation note for files.
pub fn load_profile(arg: &str) -> Run<(RadialProfile, Option<String>)> {
    if let Ok(p) = named_profile(arg) {
        return Ok((p, None));
    }
    let path = Path::new(arg);
    if !path.exists() {
        let names: Vec<&str> = c21_core::radial_ma::PROFILES.iter().map(|p| p.0).collect();
        return Err(UsageError(format!("unknown profile `{arg}`: not one of {} and not a file", names.join(", "))));
    }
    let file = File::open(path).map_err(|e| UsageError(format!("{arg}: {e}")))?;
    let ing = usage(ingest_profile(file, arg))?;
    Ok((ing.profile, Some(ing.note)))
}

/// Constructs the radial solution for `--profile` (default `r3`).
pub fn radial_solution(cfg: &SuiteConfig) -> Run<(RadialSolution, String, Option<String>)> {
    let name = cfg.profile.clone().unwrap_or_else(|| "r3".to_string());
    let (profile, note) = load_profile(&name)?;
    let sol = construct(&profile).map_err(|e| UsageError(format!("profile `{name}`: {e}")))?;
    Ok((sol, name, note))
}

/// Rejects inconsistent options before any computation.
pub fn validate(cfg: &SuiteConfig) -> Run<Suite> {
    let suite = cfg.suite.ok_or_else(|| UsageError("no suite given".into()))?;
    if let Some(g) = cfg.grid {
        if g < 17 {
            return Err(UsageError(format!("--grid {g} is too small (need at least 17)")));
        }
    }
    if let Some(t) = cfg.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(UsageError(format!("--tol {t} must be positive")));
        }
    }
    if let Some(r) = cfg.radius {
        if !(r > 0.0 && r <= 1.0) {
            return Err(UsageError(format!("--radius {r} must lie in (0, 1]")));
        }
    }
    if suite == Suite::All
        && (cfg.family.is_some()
            || cfg.profile.is_some()
            || cfg.field.is_some()
            || cfg.grid.is_some()
            || cfg.radius.is_some())
    {
        return Err(UsageError("suite `all` runs default inputs; only --tol may be given".into()));
    }
    if cfg.profile.is_some() && suite != Suite::Radial {
        return Err(UsageError("--profile applies to the radial suite only".into()));
    }
    if cfg.field.is_some() && !matches!(suite, Suite::Surface | Suite::Strip) {
        return Err(UsageError("--field applies to the surface and strip suites only".into()));
    }
    if cfg.field.is_some() && cfg.family.is_some() {
        return Err(UsageError("give either --family or --field".into()));
    }
    if cfg.radius.is_some() && suite != Suite::Strip {
        return Err(UsageError("--radius applies to the strip suite only".into()));
    }
    if cfg.family.is_some() && matches!(suite, Suite::Lemma22 | Suite::Radial | Suite::Counterexamples) {
        return Err(UsageError(format!("suite `{suite}` does not take --family")));
    }
    if let Some(sel) = &cfg.family {
        let spec = usage(gallery::family(sel))?;
        match suite {
            Suite::Lemma21 | Suite::Thm23 | Suite::Thm25 | Suite::Cor26 => {
                fn1d(&spec)?;
            }
            Suite::Surface | Suite::Strip if spec.fn2d.is_none() => {
                return Err(UsageError(format!("family `{}` has no two-dimensional field", spec.name)));
            }
            _ => {}
        }
    }
    if let Some(p) = &cfg.profile {
        load_profile(p)?;
    }
    if let Some(path) = &cfg.field {
        if !path.exists() {
            return Err(UsageError(format!("{}: no such file", path.display())));
        }
    }
    Ok(suite)
}

/// Runs the configured suite.
pub fn run_suite(cfg: &SuiteConfig) -> Run<SuiteOutput> {
    let suite = validate(cfg)?;
    let mut out = SuiteOutput::default();
    if suite == Suite::All {
        for s in Suite::EACH {
            let sub = SuiteConfig { suite: Some(s), tol: cfg.tol, ..SuiteConfig::default() };
            run_one(s, &sub, &mut out)?;
        }
    } else {
        run_one(suite, cfg, &mut out)?;
    }
    Ok(out)
}

fn run_one(suite: Suite, cfg: &SuiteConfig, out: &mut SuiteOutput) -> Run<()> {
    let mut push = |r: CertReport| out.reports.push((suite, r));
    let mut plots = Vec::new();
    match suite {
        Suite::Lemma21 => lemma21(cfg, &mut push, &mut plots)?,
        Suite::Lemma22 => {
            let trials = cfg.grid.unwrap_or(DEFAULT_TRIALS);
            push(check_interpolation_random(trials, 0));
        }
        Suite::Thm23 => thm23(cfg, &mut push, &mut plots)?,
        Suite::Thm25 => thm25(cfg, &mut push, &mut plots)?,
        Suite::Cor26 => cor26(cfg, &mut push)?,
        Suite::Radial => radial(cfg, &mut push, &mut plots)?,
        Suite::Surface => surface(cfg, &mut push, &mut plots)?,
        Suite::Strip => strip(cfg, &mut push, &mut plots)?,
        Suite::Counterexamples => counterexamples(cfg, &mut push, &mut plots)?,
        Suite::All => unreachable!("expanded by run_suite"),
    }
    out.plots.extend(plots);
    Ok(())
}

fn lemma21(cfg: &SuiteConfig, push: &mut impl FnMut(CertReport), plots: &mut Vec<Plot>) -> Run<()> {
    let specs: Vec<FamilySpec> = match &cfg.family {
        Some(sel) => vec![usage(gallery::family(sel))?],
        None => usage(gallery::all_families())?
            .into_iter()
            .filter(|s| s.has(Trait::XFprimeNonneg) && s.fn1d.is_some())
            .collect(),
    };
    let lc = line_config(cfg);
    for spec in specs {
        let f = fn1d(&spec)?;
        let i = half(&f)?;
        push(check(&format!("gradient_bound:{}", spec.selector()), check_gradient_bound(&f, i, &lc))?);
        let c2 = usage(ck_norm(&f, 2, i.dilate(2.0), lc.norm_samples))?;
        let rows = i
            .linspace(PLOT_SAMPLES)
            .into_iter()
            .map(|x| {
                let [f0, f1, ..] = f.derivs(x);
                vec![x, f1.abs(), 1.5 * c2.sqrt() * f0.max(0.0).sqrt()]
            })
            .collect();
        plots.push(Plot {
            name: format!("lemma21.{}", spec.selector()),
            header: vec!["x", "abs_fprime", "bound"],
            rows,
        });
    }
    Ok(())
}

fn uxxx_plot(name: String, f: &SmoothFn1D, i: Interval, n: usize) -> Run<Plot> {
    let thr = zero_threshold(usage(ck_norm(f, 0, i, n))?);
    let rows = i
        .linspace(PLOT_SAMPLES)
        .into_iter()
        .map(|x| {
            let [f0, f1, f2, ..] = f.derivs(x);
            vec![x, if f0 >= thr { third(f0, f1, f2).abs() } else { 0.0 }]
        })
        .collect();
    Ok(Plot { name, header: vec!["x", "abs_uxxx"], rows })
}

fn thm23(cfg: &SuiteConfig, push: &mut impl FnMut(CertReport), plots: &mut Vec<Plot>) -> Run<()> {
    let spec = family_for(cfg, Suite::Thm23)?.expect("default family");
    let f = fn1d(&spec)?;
    let i = half(&f)?;
    let lc = line_config(cfg);
    let sel = spec.selector();
    push(check(&format!("third_derivative_constant:{sel}"), third_derivative_constant(&f, i, &lc))?);
    if i.center() == 0.0 {
        let s = (0.5 * i.radius()).min(0.5);
        push(check(&format!("scaled_bound:{sel}"), scaled_bound_check(&f, s, &lc))?);
    }
    plots.push(uxxx_plot(format!("thm23.{sel}"), &f, i, lc.norm_samples)?);
    match us_sweep(&US_VALUES, &lc) {
        Ok((rep, rows)) => {
            push(rep);
            plots.push(Plot {
                name: "thm23.us_probe".into(),
                header: vec!["s", "sup_uxxx", "constant", "u_s_fourth_at_0"],
                rows: rows.iter().map(|r| vec![r.s, r.sup_uxxx, r.constant, r.fourth_at_zero]).collect(),
            });
        }
        Err(e) => push(check("us_sweep", Err(e))?),
    }
    Ok(())
}

fn thm25(cfg: &SuiteConfig, push: &mut impl FnMut(CertReport), plots: &mut Vec<Plot>) -> Run<()> {
    let spec = family_for(cfg, Suite::Thm25)?.expect("default family");
    let f = fn1d(&spec)?;
    let i = half(&f)?;
    let lc = line_config(cfg);
    let sel = spec.selector();
    push(check(&format!("c21_1d:{sel}"), certify_c21_1d(&f, i, PositivityMode::ZeroAllowed, &lc))?);
    if let Ok(l) = lift_with(&f.with_domain(i.dilate(2.0)), SignConvention::OddAbout(i.center()), lc.norm_samples) {
        let rows = i.linspace(PLOT_SAMPLES).into_iter().map(|x| vec![x, l.u_x(x), l.u_xx_extended(x)]).collect();
        plots.push(Plot { name: format!("thm25.{sel}"), header: vec!["x", "u_x", "u_xx"], rows });
    }
    Ok(())
}

fn cor26(cfg: &SuiteConfig, push: &mut impl FnMut(CertReport)) -> Run<()> {
    let spec = family_for(cfg, Suite::Cor26)?.expect("default family");
    let f = fn1d(&spec)?;
    let i = half(&f)?;
    let lc = line_config(cfg);
    let mut rep =
        check(&format!("c21_1d:{}", spec.selector()), certify_c21_1d(&f, i, PositivityMode::StrictlyPositive, &lc))?;
    if let Some(&sup) = rep.metrics.get("supUxxx") {
        let n4 = usage(ck_norm(&f, 4, i.dilate(2.0), lc.norm_samples))?;
        let s = i.radius();
        rep.metric("scale", s);
        rep.metric("normC4", n4);
        rep.metric("scaledConstant", if n4 > 0.0 { sup * s.powi(3) / n4.sqrt() } else { 0.0 });
    }
    push(rep);
    Ok(())
}

fn radial(cfg: &SuiteConfig, push: &mut impl FnMut(CertReport), plots: &mut Vec<Plot>) -> Run<()> {
    let (sol, name, note) = radial_solution(cfg)?;
    let lc = CheckConfig { tol: tolerances(cfg), ..CheckConfig::default() }
        .with_samples(cfg.grid.unwrap_or(DEFAULT_NORM_SAMPLES));
    let mut rep = check(&format!("radial:{name}"), verify_radial_with(&sol, &lc))?;
    if let Some(n) = note {
        rep.note(n);
    }
    push(rep);
    plots.push(radial_plot(&sol, &name, 181));
    Ok(())
}

/// Tabulated `r, F, phi_r, phi, residual`.
pub fn radial_plot(sol: &RadialSolution, name: &str, n: usize) -> Plot {
    Plot {
        name: format!("radial.{name}"),
        header: vec!["r", "F", "phi_r", "phi", "residual"],
        rows: sol.table(n).iter().map(|r| vec![r.r, r.f, r.phi_r, r.phi, r.residual]).collect(),
    }
}

fn surface(cfg: &SuiteConfig, push: &mut impl FnMut(CertReport), plots: &mut Vec<Plot>) -> Run<()> {
    let (u, label) = field_for(cfg, Suite::Surface)?;
    let n = cfg.grid.unwrap_or(SURFACE_GRID);
    let rect = u.rect();
    let gridded = if u.is_analytic() { usage(u.with_grid(n, n))? } else { u.clone() };
    let tau = 0.05 * rect.x.radius().min(rect.y.radius());
    for (axis, tag) in [(Axis::X, "x"), (Axis::Y, "y")] {
        push(check(&format!("mollified_bound_{tag}:{label}"), check_mollified_bound(&gridded, tau, axis))?);
    }
    let y_i = usage(Interval::centered(rect.y.center(), 0.5 * rect.y.radius()))?;
    match touch_curve(&u, y_i, rect.x, 65) {
        Ok(t) => {
            let mut rep = check_lsc(&t);
            rep.name = format!("touch_lsc:{label}");
            push(rep);
            plots.push(Plot {
                name: format!("surface.touch.{label}"),
                header: vec!["y", "touch_x"],
                rows: t.ys().into_iter().zip(&t.a).map(|(y, a)| vec![y, *a]).collect(),
            });
        }
        Err(e) => push(check(&format!("touch_lsc:{label}"), Err(e))?),
    }
    let coarse = usage(c21_seminorm_2d_on(&u, rect, n))?;
    let fine = usage(c21_seminorm_2d_on(&u, rect, 2 * n - 1))?;
    let mut rep = CertReport::new(format!("c21_seminorm:{label}"), GridParams::plane(n, n, tolerances(cfg)));
    rep.constant(fine);
    rep.metric("coarse", coarse);
    rep.metric("fine", fine);
    if let Ok(frac) = touch_cell_fraction(&u, rect, n) {
        rep.metric("touchCellFraction", frac);
    }
    let change = (fine - coarse).abs() / fine.abs().max(1e-12);
    rep.metric("refinementChange", change);
    if !fine.is_finite() || change > SEMINORM_REFINE {
        rep.fail(0.0, Some(0.0), fine, format!("seminorm changes from {coarse} to {fine} under refinement"));
    }
    push(rep);
    Ok(())
}

fn strip(cfg: &SuiteConfig, push: &mut impl FnMut(CertReport), plots: &mut Vec<Plot>) -> Run<()> {
    let (u, label) = field_for(cfg, Suite::Strip)?;
    let r = cfg.radius.unwrap_or(DEFAULT_RADIUS);
    let n = cfg.grid.unwrap_or(DEFAULT_GRID);
    let lc = CheckConfig { tol: tolerances(cfg), ..CheckConfig::default() }.with_samples(LINE_SAMPLES);
    let name = format!("directional:{label}");
    match directional_certify_with(&u, r, n, &lc) {
        Ok((mut rep, plans)) => {
            rep.name = name;
            push(rep);
            for plan in plans {
                let rows = plan
                    .lines
                    .iter()
                    .map(|l| {
                        let (zero, x0) = match l.branch {
                            LineBranch::ZeroAt { x0 } => (1.0, x0),
                            LineBranch::NoZero => (0.0, f64::NAN),
                        };
                        vec![l.offset, zero, x0, l.s, l.sup_uxxx, l.lipschitz_uxx]
                    })
                    .collect();
                plots.push(Plot {
                    name: format!("strip.{}.{label}", plan.direction.name()),
                    header: vec!["offset", "zero_branch", "x0", "s", "sup_uxxx", "lipschitz_uxx"],
                    rows,
                });
            }
        }
        Err(e) => push(check(&name, Err(e))?),
    }
    Ok(())
}

fn counterexamples(cfg: &SuiteConfig, push: &mut impl FnMut(CertReport), plots: &mut Vec<Plot>) -> Run<()> {
    let (rep, pts) = usage(oscillatory_blowup(OSCILLATORY_NODES))?;
    push(rep);
    plots.push(Plot {
        name: "counterexamples.oscillatory".into(),
        header: vec!["k", "x", "sqrt_f_second", "x4_times_value"],
        rows: pts.iter().enumerate().map(|(k, &(x, v))| vec![(k + 1) as f64, x, v, x.powi(4) * v]).collect(),
    });
    let (rep, rows) = usage(cantor_growth(&CANTOR_DEPTHS, cfg.grid.unwrap_or(SURFACE_GRID)))?;
    push(rep);
    plots.push(Plot {
        name: "counterexamples.cantor".into(),
        header: vec!["depth", "mollified_slope", "three_halves_power"],
        rows: rows.iter().map(|&(d, s)| vec![d as f64, s, 1.5f64.powi(d as i32)]).collect(),
    });
    let gate = usage(convexity_gate(&gallery::nonconvex_field(), DEFAULT_RADIUS))?;
    let mut rep = CertReport::new("nonconvex_rejection", gate.grid_params.clone());
    match gate.witnesses.first() {
        Some(w) if !gate.passed => {
            rep.witness(w.x, w.y, w.value);
            rep.note(format!("convexity gate rejects the field at ({}, {})", w.x, w.y.unwrap_or(f64::NAN)));
            rep.constant(gate.metrics.get("x.jump").copied().unwrap_or(0.0));
        }
        _ => rep.fail(0.0, Some(0.0), 0.0, "convexity gate accepted a non-convex field"),
    }
    push(rep);
    Ok(())
}
