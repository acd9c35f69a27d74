//! Closed-form example and counterexample families with exact derivative oracles.

pub mod experiments;
pub mod families;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use experiments::{cantor_growth, oscillatory_blowup, us_sweep, UsRow};
pub use families::{
    cantor_iterate, cantor_window, make_cantor, make_cusp_power, make_exponential, make_nonconvex_2d, make_oscillatory,
    make_plateau, make_quadratic, make_us_family, nonconvex_field, oscillatory_fn, oscillatory_node, us_fourth_at_zero,
    MAX_CANTOR_DEPTH, OSCILLATORY_CUTOFF,
};

use crate::certify::{CertReport, GridParams};
use crate::error::{Error, Result};
use crate::func_core::{ck_norm, SmoothFn1D, Tolerances};
use crate::graph_surface::Field2D;
use crate::sqrt_lift::{lift::zero_threshold, lift_with, SignConvention};

/// Samples used to verify declared traits at construction.
pub const TRAIT_SAMPLES: usize = 4097;
/// Nodes per side for two-dimensional trait checks.
pub const TRAIT_GRID: usize = 65;
/// Nodes per side for [`check_envelope`].
pub const ENVELOPE_GRID: usize = 257;

/// A property a family is expected to have, checked by sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trait {
    Nonneg,
    XFprimeNonneg,
    Convex,
    InfiniteOrderFlat,
    NonC3,
    NonConvex2d,
}

impl fmt::Display for Trait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Trait::Nonneg => "nonneg",
            Trait::XFprimeNonneg => "x-fprime-nonneg",
            Trait::Convex => "convex",
            Trait::InfiniteOrderFlat => "infinite-order-flat",
            Trait::NonC3 => "non-c3",
            Trait::NonConvex2d => "non-convex-2d",
        };
        f.write_str(s)
    }
}

/// A named family: `fn1d` is `f = u_x^2`, `u1d` the primitive `u`, `fn2d` the surface `u(x, y)`.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub name: String,
    pub parameters: BTreeMap<String, f64>,
    pub fn1d: Option<SmoothFn1D>,
    pub u1d: Option<SmoothFn1D>,
    pub fn2d: Option<Field2D>,
    pub traits: BTreeSet<Trait>,
}

impl FamilySpec {
    /// Assembles a family and verifies each declared trait.
    pub fn build(
        name: &str,
        parameters: BTreeMap<String, f64>,
        fn1d: Option<SmoothFn1D>,
        u1d: Option<SmoothFn1D>,
        fn2d: Option<Field2D>,
        traits: &[Trait],
    ) -> Result<Self> {
        let spec = FamilySpec {
            name: name.to_string(),
            parameters,
            fn1d,
            u1d,
            fn2d,
            traits: traits.iter().copied().collect(),
        };
        for &t in &spec.traits {
            if !spec.verify_trait(t)? {
                return Err(Error::TraitMismatch { family: spec.name.clone(), name: t.to_string() });
            }
        }
        Ok(spec)
    }

    pub fn has(&self, t: Trait) -> bool {
        self.traits.contains(&t)
    }

    /// Selector string that reconstructs this family, e.g. `us:s=0.1`.
    pub fn selector(&self) -> String {
        if self.parameters.is_empty() {
            return self.name.clone();
        }
        let args: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}:{}", self.name, args.join(","))
    }

    /// Samples whether the family has trait `t`; `false` when the needed component is absent.
    pub fn verify_trait(&self, t: Trait) -> Result<bool> {
        match t {
            Trait::Nonneg => self.fn1d.as_ref().map_or(Ok(false), nonneg),
            Trait::XFprimeNonneg => self.fn1d.as_ref().map_or(Ok(false), x_fprime_nonneg),
            Trait::Convex => {
                let one = self.u1d.as_ref().is_none_or(convex_1d);
                let two = self.fn2d.as_ref().is_none_or(|u| min_second_difference(u) >= 0.0);
                Ok(one && two && (self.u1d.is_some() || self.fn2d.is_some()))
            }
            Trait::InfiniteOrderFlat => Ok(self.fn1d.as_ref().is_some_and(infinite_order_flat)),
            Trait::NonC3 => self.fn1d.as_ref().map_or(Ok(false), non_c3),
            Trait::NonConvex2d => Ok(self.fn2d.as_ref().is_some_and(|u| min_second_difference(u) < 0.0)),
        }
    }

    pub fn describe(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "parameters": self.parameters,
            "expectedTraits": self.traits.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "fn1d": self.fn1d.as_ref().map(|f| f.label().to_string()),
            "fn2d": self.fn2d.as_ref().map(|u| u.label().to_string()),
        })
    }
}

fn nonneg(f: &SmoothFn1D) -> Result<bool> {
    let d = f.domain();
    let thr = zero_threshold(ck_norm(f, 0, d, TRAIT_SAMPLES)?);
    Ok(d.linspace(TRAIT_SAMPLES).iter().all(|&x| f.eval(x) >= -thr))
}

fn x_fprime_nonneg(f: &SmoothFn1D) -> Result<bool> {
    let d = f.domain();
    let slack = 1e-12 * (1.0 + ck_norm(f, 1, d, TRAIT_SAMPLES)?);
    Ok(d.linspace(TRAIT_SAMPLES).iter().all(|&x| x * f.deriv(x, 1) >= -slack * x.abs()))
}

fn convex_1d(u: &SmoothFn1D) -> bool {
    u.domain().linspace(TRAIT_SAMPLES).iter().all(|&x| u.deriv(x, 2) >= -1e-12)
}

fn infinite_order_flat(f: &SmoothFn1D) -> bool {
    f.domain().contains(0.1) && f.eval(0.1) / 0.1f64.powi(40) < 1.0 && f.derivs(0.0).iter().all(|&d| d == 0.0)
}

/// Largest jump of `u_xxx` (taken as 0 on the zero set) between neighbouring samples must stay
/// comparable to `sup |u_xxx|` under refinement.
fn non_c3(f: &SmoothFn1D) -> Result<bool> {
    let lift = lift_with(f, SignConvention::default(), TRAIT_SAMPLES)?;
    for n in [TRAIT_SAMPLES, 2 * TRAIT_SAMPLES - 1] {
        let v: Vec<f64> = f.domain().linspace(n).iter().map(|&x| lift.u_xxx(x).unwrap_or(0.0)).collect();
        let top = v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        let jump = v.windows(2).fold(0.0f64, |m, w| m.max((w[1] - w[0]).abs()));
        if !(jump > 0.1 * top) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest normalised second difference along the axes and diagonals on a square grid.
fn min_second_difference(u: &Field2D) -> f64 {
    let r = u.rect();
    let (hx, hy) = (r.x.width() / (TRAIT_GRID - 1) as f64, r.y.width() / (TRAIT_GRID - 1) as f64);
    let at = |i: usize, j: usize| u.eval(r.x.lo() + i as f64 * hx, r.y.lo() + j as f64 * hy);
    let mut worst = f64::INFINITY;
    for j in 1..TRAIT_GRID - 1 {
        for i in 1..TRAIT_GRID - 1 {
            let c = at(i, j);
            let scale = 1e-12 * (1.0 + c.abs());
            for (di, dj) in [(1i64, 0i64), (0, 1), (1, 1), (1, -1)] {
                let p = at((i as i64 + di) as usize, (j as i64 + dj) as usize);
                let m = at((i as i64 - di) as usize, (j as i64 - dj) as usize);
                let d2 = p + m - 2.0 * c;
                worst = worst.min(if d2.abs() <= scale { 0.0 } else { d2 });
            }
        }
    }
    worst
}

/// Name, default parameters and description of a family.
pub type CatalogEntry = (&'static str, &'static [(&'static str, f64)], &'static str);

/// Families addressable by name, with their default parameters.
pub const CATALOG: &[CatalogEntry] = &[
    ("cusp", &[("p", 3.0)], "u = |x|^p, f = p^2 |x|^{2p-2}; surface r^p"),
    ("oscillatory", &[], "flat f = e^{-1/x^2} sin^2(1/x) + e^{-2/x^2}; x f' changes sign"),
    ("us", &[("s", 0.1)], "u = (x^2 + s^2)^{3/2}, f = 9 s^2 x^2 + 9 x^4"),
    ("nonconvex2d", &[], "u = x|x| + x y^2"),
    ("plateau", &[("a", 0.3)], "f = (|x| - a)_+^4"),
    ("cantor", &[("depth", 6.0)], "depth-d Cantor iterate on [0, 1]"),
    ("exp", &[("lambda", 1.0)], "f = e^{lambda x}"),
    ("quadratic", &[], "u = (x^2 + y^2)/2, f = x^2"),
];

/// Parses `name`, `name:k=v,...` or `name=NAME,k=v,...` into a name and parameter map.
pub fn parse_selector(selector: &str) -> Result<(String, BTreeMap<String, f64>)> {
    let malformed = || Error::Malformed(format!("family selector `{selector}`"));
    let mut name = None;
    let mut params = BTreeMap::new();
    let body = match selector.split_once(':') {
        Some((n, rest)) => {
            name = Some(n.trim().to_string());
            rest
        }
        None => selector,
    };
    for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match tok.split_once('=') {
            Some(("name", v)) if name.is_none() => name = Some(v.trim().to_string()),
            Some((k, v)) => {
                let v: f64 = v.trim().parse().map_err(|_| malformed())?;
                params.insert(k.trim().to_string(), v);
            }
            None if name.is_none() => name = Some(tok.to_string()),
            None => return Err(malformed()),
        }
    }
    let name = name.filter(|n| !n.is_empty()).ok_or_else(malformed)?;
    Ok((name, params))
}

/// Builds a family from a selector string, filling in default parameters.
pub fn family(selector: &str) -> Result<FamilySpec> {
    let (name, given) = parse_selector(selector)?;
    let (_, defaults, _) =
        CATALOG.iter().find(|(n, _, _)| *n == name).ok_or_else(|| Error::UnknownFamily(name.clone()))?;
    if let Some(k) = given.keys().find(|k| !defaults.iter().any(|(d, _)| d == k)) {
        return Err(Error::Malformed(format!("family `{name}` has no parameter `{k}`")));
    }
    let p = |key: &str| {
        given.get(key).copied().unwrap_or_else(|| defaults.iter().find(|(d, _)| *d == key).expect("default").1)
    };
    match name.as_str() {
        "cusp" => make_cusp_power(p("p")),
        "oscillatory" => make_oscillatory(),
        "us" => make_us_family(p("s")),
        "nonconvex2d" => make_nonconvex_2d(),
        "plateau" => make_plateau(p("a")),
        "cantor" => {
            let d = p("depth");
            if d.fract() != 0.0 || d < 1.0 {
                return Err(Error::InvalidParameter { name: "depth", value: d, reason: "must be a positive integer" });
            }
            make_cantor(d.min(u32::MAX as f64) as u32)
        }
        "exp" => make_exponential(p("lambda")),
        "quadratic" => make_quadratic(),
        _ => unreachable!("catalog and constructors agree"),
    }
}

/// Every catalog family at its default parameters.
pub fn all_families() -> Result<Vec<FamilySpec>> {
    CATALOG.iter().map(|(n, _, _)| family(n)).collect()
}

/// Checks `(x^{2n} + B y^{2m}) / A <= k <= A (x^{2n} + B y^{2m})` on a grid over the domain of `k`.
pub fn check_envelope(k: &Field2D, a: f64, b: f64, n: u32, m: u32) -> Result<CertReport> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter { name: "A", value: a, reason: "must be positive" });
    }
    if !(b >= 0.0) {
        return Err(Error::InvalidParameter { name: "B", value: b, reason: "must be nonnegative" });
    }
    if n < 1 || m < n {
        return Err(Error::InvalidParameter { name: "m", value: m as f64, reason: "need 1 <= n <= m" });
    }
    let tol = Tolerances::default();
    let mut report = CertReport::new("envelope", GridParams::plane(ENVELOPE_GRID, ENVELOPE_GRID, tol));
    let r = k.rect();
    let (xs, ys) = (r.x.linspace(ENVELOPE_GRID), r.y.linspace(ENVELOPE_GRID));
    let mut worst = 0.0f64;
    for &y in &ys {
        for &x in &xs {
            let e = x.powi(2 * n as i32) + b * y.powi(2 * m as i32);
            let v = k.eval(x, y);
            if !tol.le(e / a, v) {
                report.fail(x, Some(y), v, format!("k = {v} below lower envelope {}", e / a));
            }
            if !tol.le(v, a * e) {
                report.fail(x, Some(y), v, format!("k = {v} above upper envelope {}", a * e));
            }
            if e > 0.0 {
                worst = worst.max(v / e).max(e / v.max(f64::MIN_POSITIVE));
            }
        }
    }
    report.constant(worst);
    report.metric("A", a);
    report.metric("B", b);
    Ok(report)
}
