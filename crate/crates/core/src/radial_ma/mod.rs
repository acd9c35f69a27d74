//! Radial solutions of `det D^2 u = k` built from the profile `Psi(r) = k(r, 0)`.

use std::io::Write;

use serde::Serialize;

use crate::certify::{CertReport, GridParams};
use crate::error::{Error, Result};
use crate::func_core::{Derivs, Interval, SmoothFn1D, Tolerances, MAX_ORDER};
use crate::graph_surface::{hessian_det, Field2D, Grid2D, Rect};
use crate::sqrt_lift::{certify_c21_1d, lift::zero_threshold, CheckConfig, PositivityMode};

/// Factor in `Phi_r^2 = 2 int_0^r Psi(s) s ds` forced by differentiating `Phi_r^2`.
pub const CORRECTION_FACTOR: f64 = 2.0;
/// Cells of the cumulative quadrature table.
pub const CELLS: usize = 2048;
/// Agreement required between the three rays of the radiality test.
pub const RADIAL_TOL: f64 = 1e-10;
/// Sample radii for the radiality test.
pub const RADIAL_SAMPLES: usize = 65;
/// Relative residual tolerance of `Phi_r Phi_rr / r = Psi`.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Residual is sampled on `(EPS_FRACTION rho, 0.9 rho)`.
pub const EPS_FRACTION: f64 = 0.01;
/// Nodes per side of the grid used to recompute `det D^2 u`.
pub const HESSIAN_GRID: usize = 129;
/// Relative tolerance for the grid Hessian determinant.
pub const HESSIAN_TOL: f64 = 1e-3;

const GL_NODES: [f64; 4] = [0.1834346424956498, 0.525_532_409_916_329, 0.7966664774136267, 0.9602898564975363];
const GL_WEIGHTS: [f64; 4] = [0.362_683_783_378_362, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763];

/// Eight-point Gauss-Legendre rule on `[a, b]`.
fn gauss<F: Fn(f64) -> f64>(a: f64, b: f64, f: F) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    h * GL_NODES.iter().zip(GL_WEIGHTS).map(|(t, w)| w * (f(c - h * t) + f(c + h * t))).sum::<f64>()
}

/// Restriction of `k` to a ray, extended evenly to `[-rho, rho]`.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    pub psi: SmoothFn1D,
    pub rho: f64,
}

impl RadialProfile {
    /// Wraps `psi`, which must be defined on `[-rho, rho]`.
    pub fn new(psi: SmoothFn1D, rho: f64) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::InvalidParameter { name: "rho", value: rho, reason: "must be positive" });
        }
        Interval::centered(0.0, rho)?.require_within(&psi.domain())?;
        Ok(RadialProfile { psi, rho })
    }

    /// Even extension of an oracle `g` given for `r >= 0`.
    pub fn from_half<F>(label: impl Into<String>, rho: f64, g: F) -> Result<Self>
    where
        F: Fn(f64) -> Derivs + Send + Sync + 'static,
    {
        let domain = Interval::centered(0.0, rho)?;
        Self::new(SmoothFn1D::new(domain, label, move |r| even(r, &g)), rho)
    }

    pub fn psi(&self, r: f64) -> f64 {
        self.psi.eval(r)
    }

    /// `Psi` replaced by `c Psi`.
    pub fn scaled(&self, c: f64) -> Self {
        RadialProfile { psi: self.psi.scaled(c), rho: self.rho }
    }
}

fn even<F: Fn(f64) -> Derivs>(r: f64, g: &F) -> Derivs {
    let d = g(r.abs());
    if r < 0.0 {
        std::array::from_fn(|j| if j % 2 == 1 { -d[j] } else { d[j] })
    } else {
        d
    }
}

/// `Psi(r) = k(r, 0)` after checking `k(r, 0) = k(0, r) = k(r / sqrt 2, r / sqrt 2)`.
pub fn radial_profile(k: &Field2D, rho: f64) -> Result<RadialProfile> {
    let rect = k.rect();
    let d = rho / 2f64.sqrt();
    if !(rho > 0.0)
        || !rect.contains(rho, 0.0)
        || !rect.contains(0.0, rho)
        || !rect.contains(d, d)
        || !rect.contains(-rho, 0.0)
    {
        return Err(Error::InvalidParameter { name: "rho", value: rho, reason: "disc must lie in the domain of k" });
    }
    for r in Interval::new(0.0, rho)?.linspace(RADIAL_SAMPLES) {
        let a = k.eval(r, 0.0);
        let s = r / 2f64.sqrt();
        for b in [k.eval(0.0, r), k.eval(s, s), k.eval(-r, 0.0)] {
            if !((a - b).abs() <= RADIAL_TOL * (1.0 + a.abs())) {
                return Err(Error::NotRadial { r, a, b });
            }
        }
    }
    let field = k.clone();
    let delta = 1e-4 * rho;
    let raw = move |r: f64| -> Derivs {
        match field.jet(r, 0.0, MAX_ORDER) {
            Some(j) => std::array::from_fn(|i| j.partial(i, 0)),
            None => std::array::from_fn(|i| field.partial(r, 0.0, i, 0).unwrap_or(f64::NAN)),
        }
    };
    // Derivatives the oracle cannot produce (e.g. at the origin of r^p) are replaced by
    // the symmetric average at `r +- delta` of the even extension.
    let oracle = move |r: f64| -> Derivs {
        let mut d = raw(r);
        if d.iter().any(|v| !v.is_finite()) {
            let (p, m) = (even(r + delta, &raw), even(r - delta, &raw));
            for j in 0..=MAX_ORDER {
                if !d[j].is_finite() {
                    d[j] = 0.5 * (p[j] + m[j]);
                }
            }
        }
        d
    };
    RadialProfile::from_half(format!("k({}) on a ray", k.label()), rho, oracle)
}

/// Named profiles on the unit disc.
pub const PROFILES: &[(&str, &str)] = &[
    ("r3", "Psi = 18 r^2, solution r^3"),
    ("r4", "Psi = 48 r^4, solution r^4"),
    ("r5", "Psi = 100 r^6, solution r^5"),
    ("delta1", "Psi = r"),
    ("zero", "Psi = 0"),
    ("oscillating", "Psi = r^8 (2 + sin(1/r))"),
];

pub fn named_profile(name: &str) -> Result<RadialProfile> {
    let poly = |c: f64, p: i32| {
        move |r: f64| -> Derivs {
            let mut out = [0.0; MAX_ORDER + 1];
            let mut coef = c;
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = coef * r.powi(p - j as i32);
                coef *= (p - j as i32) as f64;
                if coef == 0.0 {
                    break;
                }
            }
            out
        }
    };
    match name {
        "r3" => RadialProfile::from_half("18 r^2", 1.0, poly(18.0, 2)),
        "r4" => RadialProfile::from_half("48 r^4", 1.0, poly(48.0, 4)),
        "r5" => RadialProfile::from_half("100 r^6", 1.0, poly(100.0, 6)),
        "delta1" => RadialProfile::from_half("r", 1.0, |r| [r, 1.0, 0.0, 0.0, 0.0]),
        "zero" => RadialProfile::from_half("0", 1.0, |_| [0.0; MAX_ORDER + 1]),
        "oscillating" => RadialProfile::from_half("r^8 (2 + sin(1/r))", 1.0, |r| {
            if r == 0.0 {
                return [0.0; MAX_ORDER + 1];
            }
            let t = crate::func_core::Jet1::var(r, MAX_ORDER);
            let j = t.powi(8) * (t.recip().sin() + 2.0);
            std::array::from_fn(|k| j.deriv(k))
        }),
        _ => Err(Error::UnknownFamily(name.to_string())),
    }
}

/// Tabulated radial solution `u(x, y) = phi(r)` with `phi_r^2 = F`.
#[derive(Clone, Debug)]
pub struct RadialSolution {
    pub profile: RadialProfile,
    pub correction_factor: f64,
    h: f64,
    f_tab: Vec<f64>,
    phi_tab: Vec<f64>,
    phi_rr_tab: Vec<f64>,
    threshold: f64,
}

/// One row of the solution table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolutionRow {
    pub r: f64,
    #[serde(rename = "F")]
    pub f: f64,
    pub phi_r: f64,
    pub phi: f64,
    pub residual: f64,
}

pub fn construct(profile: &RadialProfile) -> Result<RadialSolution> {
    construct_with_factor(profile, CORRECTION_FACTOR)
}

/// [`construct`] with `F = c int_0^r Psi(s) s ds`; `c = 1` is the uncorrected formula.
pub fn construct_with_factor(profile: &RadialProfile, c: f64) -> Result<RadialSolution> {
    let rho = profile.rho;
    let psi = &profile.psi;
    let probe = Interval::new(0.0, rho)?.linspace(4 * CELLS + 1);
    let sup = probe.iter().fold(0.0f64, |m, &r| m.max(psi.eval(r).abs()));
    let thr = zero_threshold(sup);
    if let Some(&r) = probe.iter().find(|&&r| psi.eval(r) < -thr) {
        return Err(Error::NegativeFunction { x: r, value: psi.eval(r) });
    }
    let h = rho / CELLS as f64;
    let mut f_tab = vec![0.0; CELLS + 1];
    for i in 0..CELLS {
        let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
        f_tab[i + 1] = f_tab[i] + c * gauss(a, b, |s| psi.eval(s) * s).max(0.0);
    }
    let mut sol = RadialSolution {
        profile: profile.clone(),
        correction_factor: c,
        h,
        f_tab,
        phi_tab: vec![0.0; CELLS + 1],
        phi_rr_tab: Vec::new(),
        threshold: zero_threshold(0.0),
    };
    sol.threshold = zero_threshold(sol.f_tab[CELLS]);
    for i in 0..CELLS {
        let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
        sol.phi_tab[i + 1] = sol.phi_tab[i] + gauss(a, b, |s| sol.phi_r(s));
    }
    sol.phi_rr_tab = (0..=CELLS).map(|i| sol.phi_rr(i as f64 * h)).collect();
    Ok(sol)
}

impl RadialSolution {
    pub fn rho(&self) -> f64 {
        self.profile.rho
    }

    fn cell(&self, r: f64) -> (usize, f64) {
        let i = ((r / self.h).floor() as usize).min(CELLS - 1);
        (i, i as f64 * self.h)
    }

    /// `F(|r|)`.
    pub fn f(&self, r: f64) -> f64 {
        let r = r.abs().min(self.rho());
        let (i, a) = self.cell(r);
        if r == a {
            return self.f_tab[i];
        }
        self.f_tab[i] + self.correction_factor * gauss(a, r, |s| self.profile.psi(s) * s)
    }

    /// Derivatives of the even function `r -> F(|r|)`.
    pub fn f_derivs(&self, r: f64) -> Derivs {
        let s = r.abs();
        let [p0, p1, p2, p3, _] = self.profile.psi.derivs(s);
        let c = self.correction_factor;
        let d = [self.f(s), c * p0 * s, c * (p0 + s * p1), c * (2.0 * p1 + s * p2), c * (3.0 * p2 + s * p3)];
        if r < 0.0 {
            std::array::from_fn(|j| if j % 2 == 1 { -d[j] } else { d[j] })
        } else {
            d
        }
    }

    /// `F` extended evenly, as the input of the one-dimensional lift.
    pub fn f_even(&self) -> SmoothFn1D {
        let me = self.clone();
        let domain = Interval::centered(0.0, self.rho()).expect("positive radius");
        SmoothFn1D::new(domain, format!("F[{}]", self.profile.psi.label()), move |r| me.f_derivs(r))
    }

    pub fn phi_r(&self, r: f64) -> f64 {
        self.f(r).max(0.0).sqrt()
    }

    /// `c Psi r / (2 phi_r)` where `F > 0`; `sqrt(F''/2)` on the zero set of `F`.
    pub fn phi_rr(&self, r: f64) -> f64 {
        let r = r.abs();
        let f = self.f(r);
        if f > self.threshold {
            self.correction_factor * self.profile.psi(r) * r / (2.0 * f.sqrt())
        } else {
            (self.f_derivs(r)[2].max(0.0) / 2.0).sqrt()
        }
    }

    /// `phi(|r|)` by quintic Hermite interpolation of the tabulated `phi, phi_r, phi_rr`.
    pub fn phi(&self, r: f64) -> f64 {
        let r = r.abs().min(self.rho());
        let (i, a) = self.cell(r);
        let h = self.h;
        let t = (r - a) / h;
        let (p0, p1) = (self.phi_tab[i], self.phi_tab[i + 1]);
        let (d0, d1) = (self.phi_r(a) * h, self.phi_r(a + h) * h);
        let (s0, s1) = (self.phi_rr_tab[i] * h * h, self.phi_rr_tab[i + 1] * h * h);
        let (t2, t3) = (t * t, t * t * t);
        let (t4, t5) = (t3 * t, t3 * t2);
        let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h20 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
        let h21 = 0.5 * t3 - t4 + 0.5 * t5;
        let h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        h00 * p0 + h10 * d0 + h20 * s0 + h21 * s1 + h11 * d1 + h01 * p1
    }

    /// `|phi_r phi_rr / r - Psi|` with `phi_rr` from a Richardson-extrapolated central
    /// difference of `sqrt(F)`, independent of the closed-form `phi_rr`.
    pub fn residual(&self, r: f64) -> f64 {
        let r = r.abs();
        let h = 1e-3 * r;
        let d = |h: f64| (self.phi_r(r + h) - self.phi_r(r - h)) / (2.0 * h);
        let phi_rr = (4.0 * d(h / 2.0) - d(h)) / 3.0;
        (self.phi_r(r) * phi_rr / r - self.profile.psi(r)).abs()
    }

    /// Rows at `n` equally spaced radii in `[0, rho]`; the residual is reported as 0 at the ends.
    pub fn table(&self, n: usize) -> Vec<SolutionRow> {
        let rho = self.rho();
        Interval::new(0.0, rho)
            .expect("positive radius")
            .linspace(n)
            .into_iter()
            .map(|r| SolutionRow {
                r,
                f: self.f(r),
                phi_r: self.phi_r(r),
                phi: self.phi(r),
                residual: if r > 0.0 && r * 1.001 <= rho { self.residual(r) } else { 0.0 },
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, w: W, n: usize) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for row in self.table(n) {
            out.serialize(row)?;
        }
        out.flush()?;
        Ok(())
    }

    /// `u(x, y) = phi(sqrt(x^2 + y^2))` sampled on the square inscribed in the disc of radius `0.9 rho`.
    pub fn surface(&self, n: usize) -> Result<Field2D> {
        let a = 0.9 * self.rho() / 2f64.sqrt();
        let g = Grid2D::sample(Rect::square(a)?, n, n, |x, y| self.phi(x.hypot(y)))?;
        Ok(Field2D::sampled(g, format!("phi(r) for {}", self.profile.psi.label())))
    }
}

/// Residual on `(eps, 0.9 rho)`, grid Hessian determinant against `Psi`, and the
/// one-dimensional `C^{2,1}` certificate of the even extension on `[-rho/2, rho/2]`.
pub fn verify_radial(sol: &RadialSolution) -> Result<CertReport> {
    verify_radial_with(sol, &CheckConfig::default())
}

pub fn verify_radial_with(sol: &RadialSolution, cfg: &CheckConfig) -> Result<CertReport> {
    let rho = sol.rho();
    let tol = Tolerances { abs: RESIDUAL_TOL, rel: RESIDUAL_TOL };
    let mut report = CertReport::new("radial", GridParams::line(cfg.samples, cfg.norm_samples, tol));
    report.metric("correctionFactor", sol.correction_factor);
    if sol.correction_factor == CORRECTION_FACTOR {
        report.note("factor-2 correction applied: Phi_r^2 = 2 int_0^r Psi(s) s ds");
    } else {
        report.note(format!("uncorrected quadrature factor {}", sol.correction_factor));
    }

    let radii = Interval::new(EPS_FRACTION * rho, 0.9 * rho)?.linspace(1025);
    let res = crate::par_map(&radii, |&r| (r, sol.residual(r), sol.profile.psi(r)));
    let mut worst = (0.0, 0.0);
    for &(r, e, p) in &res {
        if e > worst.1 {
            worst = (r, e);
        }
        if e > RESIDUAL_TOL * (1.0 + p.abs()) {
            report.fail(r, None, e, format!("Monge-Ampere residual {e} at r = {r}"));
            break;
        }
    }
    report.metric("residual", worst.1);
    report.metric("residualAt", worst.0);

    let monotone = sol.f_tab.windows(2).all(|w| w[1] >= w[0]);
    let flux = radii.iter().all(|&r| sol.f_derivs(r)[1] * r >= 0.0);
    if !(monotone && flux) {
        report.fail(0.0, None, 0.0, "F is not nondecreasing");
    }

    let u = sol.surface(HESSIAN_GRID)?;
    let k = hessian_det(&u)?;
    let g = k.grid().expect("sampled surface");
    let sup_psi = radii.iter().fold(0.0f64, |m, &r| m.max(sol.profile.psi(r).abs()));
    let mut herr = (0.0, 0.0, 0.0);
    for j in 0..g.ny {
        for i in 0..g.nx {
            let (x, y) = (g.x(i), g.y(j));
            let r = x.hypot(y);
            let v = g.at(i, j);
            if r < 0.1 * rho || !v.is_finite() {
                continue;
            }
            let e = (v - sol.profile.psi(r)).abs();
            if e > herr.2 {
                herr = (x, y, e);
            }
        }
    }
    report.metric("hessianError", herr.2);
    if herr.2 > HESSIAN_TOL * (1.0 + sup_psi) {
        report.fail(herr.0, Some(herr.1), herr.2, "grid Hessian determinant differs from k");
    }

    let c21 = certify_c21_1d(&sol.f_even(), Interval::centered(0.0, rho / 2.0)?, PositivityMode::ZeroAllowed, cfg)?;
    report.constant(c21.empirical_constant);
    report.metric("c21Constant", c21.empirical_constant);
    report.absorb(&c21);
    Ok(report)
}
