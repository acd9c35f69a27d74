use std::collections::BTreeMap;

use super::{FamilySpec, Trait};
use crate::error::{Error, Result};
use crate::func_core::{Interval, Jet2, SmoothFn1D, MAX_ORDER};
use crate::graph_surface::{Field2D, Rect};

/// Domain of the one-dimensional families, which must contain `2I = [-2, 2]`.
pub const DOMAIN_1D: f64 = 2.0;
/// Half-width of the square domain of the two-dimensional families.
pub const DOMAIN_2D: f64 = 1.0;
/// The oscillatory family is evaluated as exactly 0 for `|x|` below this.
pub const OSCILLATORY_CUTOFF: f64 = 0.02;

fn line() -> Interval {
    Interval::centered(0.0, DOMAIN_1D).expect("fixed domain")
}

fn square() -> Rect {
    Rect::square(DOMAIN_2D).expect("fixed domain")
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn is_even_integer(q: f64) -> bool {
    q.fract() == 0.0 && (q as i64) % 2 == 0
}

/// `c |x|^q` with exact derivatives; at 0 derivatives of order `> q` are infinite
/// unless `q` is an even integer.
fn abs_power(c: f64, q: f64) -> SmoothFn1D {
    let even = is_even_integer(q);
    SmoothFn1D::new(line(), format!("{c}|x|^{q}"), move |x| {
        let s = if x < 0.0 { -1.0 } else { 1.0 };
        let mut out = [0.0; MAX_ORDER + 1];
        let mut falling = c;
        for (j, slot) in out.iter_mut().enumerate() {
            if falling == 0.0 {
                break;
            }
            *slot = if even {
                falling * x.powi(q as i32 - j as i32)
            } else {
                let sign = if j % 2 == 0 { 1.0 } else { s };
                falling * sign * x.abs().powf(q - j as f64)
            };
            falling *= q - j as f64;
        }
        out
    })
}

/// `r^p` as a field; at the origin partials of order `>= p` are `NaN` unless `p` is an even integer.
fn radial_power(p: f64) -> Field2D {
    Field2D::from_oracle(square(), format!("r^{p}"), move |x, y, order| {
        if is_even_integer(p) {
            let r2 = Jet2::var_x(x, order) * Jet2::var_x(x, order) + Jet2::var_y(y, order) * Jet2::var_y(y, order);
            return r2.powi(p as u32 / 2);
        }
        if x == 0.0 && y == 0.0 {
            return Jet2::from_partials(order, |a, b| if ((a + b) as f64) < p { 0.0 } else { f64::NAN });
        }
        let (jx, jy) = (Jet2::var_x(x, order), Jet2::var_y(y, order));
        (jx * jx + jy * jy).powf(p / 2.0)
    })
}

/// `u = |x|^p`, `f = u_x^2 = p^2 |x|^{2p-2}`; in two dimensions `u = r^p`.
pub fn make_cusp_power(p: f64) -> Result<FamilySpec> {
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::InvalidParameter { name: "p", value: p, reason: "must be at least 2" });
    }
    let mut traits = vec![Trait::Nonneg, Trait::XFprimeNonneg, Trait::Convex];
    if p > 2.0 && p <= 3.0 {
        traits.push(Trait::NonC3);
    }
    FamilySpec::build(
        "cusp",
        params(&[("p", p)]),
        Some(abs_power(p * p, 2.0 * p - 2.0)),
        Some(abs_power(1.0, p)),
        Some(radial_power(p)),
        &traits,
    )
}

/// `e^{-1/x^2} sin^2(1/x) + e^{-2/x^2}`, flat at 0, violating `x f' >= 0`.
pub fn oscillatory_fn() -> SmoothFn1D {
    SmoothFn1D::new(line(), "oscillatory", |x| {
        if x.abs() < OSCILLATORY_CUTOFF {
            return [0.0; MAX_ORDER + 1];
        }
        let t = crate::func_core::Jet1::var(x, MAX_ORDER);
        let inv = t.recip();
        let a = (inv * inv * -1.0).exp();
        let s = inv.sin();
        let f = a * s * s + a * a;
        std::array::from_fn(|k| f.deriv(k))
    })
}

/// `k`-th node `x_k = 1/(k pi)` and the exact value of `(sqrt f)''` there,
/// `x^{-4} + e^{-1/x^2} (4 x^{-6} - 6 x^{-4})`.
pub fn oscillatory_node(k: usize) -> (f64, f64) {
    let x = 1.0 / (k as f64 * std::f64::consts::PI);
    let x2 = x * x;
    (x, 1.0 / (x2 * x2) + (-1.0 / x2).exp() * (4.0 / (x2 * x2 * x2) - 6.0 / (x2 * x2)))
}

pub fn make_oscillatory() -> Result<FamilySpec> {
    FamilySpec::build(
        "oscillatory",
        BTreeMap::new(),
        Some(oscillatory_fn()),
        None,
        None,
        &[Trait::Nonneg, Trait::InfiniteOrderFlat, Trait::NonC3],
    )
}

/// `u_s = (x^2 + s^2)^{3/2}`, `f = 9 s^2 x^2 + 9 x^4`; in two dimensions `(x^2 + y^2 + s^2)^{3/2}`.
pub fn make_us_family(s: f64) -> Result<FamilySpec> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::InvalidParameter { name: "s", value: s, reason: "must be positive" });
    }
    let f = SmoothFn1D::polynomial(line(), format!("us f s={s}"), &[0.0, 0.0, 9.0 * s * s, 0.0, 9.0]);
    let u = SmoothFn1D::from_jet(line(), format!("us s={s}"), move |x| (x * x + s * s).powf(1.5));
    let s2 = s * s;
    let u2 = Field2D::from_jet(square(), format!("us2d s={s}"), move |x, y| (x * x + y * y + s2).powf(1.5));
    FamilySpec::build(
        "us",
        params(&[("s", s)]),
        Some(f),
        Some(u),
        Some(u2),
        &[Trait::Nonneg, Trait::XFprimeNonneg, Trait::Convex],
    )
}

/// `u_s^{(4)}(0)` from the jet of `(x^2 + s^2)^{3/2}`.
pub fn us_fourth_at_zero(s: f64) -> f64 {
    let x = crate::func_core::Jet1::var(0.0, 4);
    (x * x + s * s).powf(1.5).deriv(4)
}

/// `u = sign(x) (x^2 + |x| y^2) = x|x| + x y^2`.
pub fn nonconvex_field() -> Field2D {
    Field2D::from_jet(square(), "nonconvex", |x, y| x * x.abs() + x * y * y)
}

pub fn make_nonconvex_2d() -> Result<FamilySpec> {
    FamilySpec::build("nonconvex2d", BTreeMap::new(), None, None, Some(nonconvex_field()), &[Trait::NonConvex2d])
}

/// `f = (|x| - a)_+^4`, zero on `[-a, a]`; `u = (|x| - a)_+^3 / 3`, radially `(r - a)_+^3 / 3`.
pub fn make_plateau(a: f64) -> Result<FamilySpec> {
    if !(a > 0.0 && a < 0.5) {
        return Err(Error::InvalidParameter { name: "a", value: a, reason: "must lie in (0, 1/2)" });
    }
    let f = SmoothFn1D::new(line(), format!("plateau a={a}"), move |x| {
        let d = x.abs() - a;
        if d <= 0.0 {
            return [0.0; MAX_ORDER + 1];
        }
        let s = x.signum();
        [d.powi(4), 4.0 * s * d.powi(3), 12.0 * d * d, 24.0 * s * d, 24.0]
    });
    let u = SmoothFn1D::new(line(), format!("plateau u a={a}"), move |x| {
        let d = x.abs() - a;
        if d <= 0.0 {
            return [0.0; MAX_ORDER + 1];
        }
        let s = x.signum();
        [d.powi(3) / 3.0, s * d * d, 2.0 * d, 2.0 * s, 0.0]
    });
    let u2 = Field2D::from_oracle(square(), format!("radial plateau a={a}"), move |x, y, order| {
        let (jx, jy) = (Jet2::var_x(x, order), Jet2::var_y(y, order));
        if x.hypot(y) <= a {
            return Jet2::constant(0.0, order);
        }
        ((jx * jx + jy * jy).sqrt() - a).powi(3) * (1.0 / 3.0)
    });
    FamilySpec::build(
        "plateau",
        params(&[("a", a)]),
        Some(f),
        Some(u),
        Some(u2),
        &[Trait::Nonneg, Trait::XFprimeNonneg, Trait::Convex, Trait::NonC3],
    )
}

/// Depth-`d` iterate of the Cantor function and its slope.
pub fn cantor_iterate(depth: u32, x: f64) -> (f64, f64) {
    if depth == 0 {
        return (x, 1.0);
    }
    if x < 1.0 / 3.0 {
        let (v, s) = cantor_iterate(depth - 1, 3.0 * x);
        (0.5 * v, 1.5 * s)
    } else if x <= 2.0 / 3.0 {
        (0.5, 0.0)
    } else {
        let (v, s) = cantor_iterate(depth - 1, 3.0 * x - 2.0);
        (0.5 + 0.5 * v, 1.5 * s)
    }
}

/// Leftmost retained interval `[0, 3^{-level}]`, where every iterate of depth `<= level` is linear.
pub fn cantor_window(level: u32) -> Interval {
    Interval::new(0.0, 3f64.powi(-(level as i32))).expect("positive width")
}

pub const MAX_CANTOR_DEPTH: u32 = 25;

pub fn make_cantor(depth: u32) -> Result<FamilySpec> {
    if depth == 0 || depth > MAX_CANTOR_DEPTH {
        return Err(Error::InvalidParameter { name: "depth", value: depth as f64, reason: "must lie in 1..=25" });
    }
    let unit = Interval::new(0.0, 1.0)?;
    let f = SmoothFn1D::new(unit, format!("cantor depth={depth}"), move |x| {
        let (v, s) = cantor_iterate(depth, x.clamp(0.0, 1.0));
        [v, s, 0.0, 0.0, 0.0]
    });
    let w = Field2D::from_oracle(Rect::new(unit, unit), format!("cantor depth={depth}"), move |x, _, order| {
        let (v, s) = cantor_iterate(depth, x.clamp(0.0, 1.0));
        Jet2::affine(v, s, 0.0, order)
    });
    FamilySpec::build("cantor", params(&[("depth", depth as f64)]), Some(f), None, Some(w), &[Trait::Nonneg])
}

/// `f = e^{lambda x}`: positive and monotone, `u = (2/lambda) e^{lambda x / 2}`.
pub fn make_exponential(lambda: f64) -> Result<FamilySpec> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter { name: "lambda", value: lambda, reason: "must be positive" });
    }
    let f = SmoothFn1D::from_jet(line(), format!("exp({lambda}x)"), move |x| (x * lambda).exp());
    let u = SmoothFn1D::from_jet(line(), format!("u exp lambda={lambda}"), move |x| {
        (x * (lambda / 2.0)).exp() * (2.0 / lambda)
    });
    FamilySpec::build("exp", params(&[("lambda", lambda)]), Some(f), Some(u), None, &[Trait::Nonneg, Trait::Convex])
}

/// `u = (x^2 + y^2) / 2`, `f = x^2`.
pub fn make_quadratic() -> Result<FamilySpec> {
    let f = SmoothFn1D::polynomial(line(), "x^2", &[0.0, 0.0, 1.0]);
    let u = SmoothFn1D::polynomial(line(), "x^2/2", &[0.0, 0.0, 0.5]);
    let u2 = Field2D::from_jet(square(), "(x^2+y^2)/2", |x, y| (x * x + y * y) * 0.5);
    FamilySpec::build(
        "quadratic",
        BTreeMap::new(),
        Some(f),
        Some(u),
        Some(u2),
        &[Trait::Nonneg, Trait::XFprimeNonneg, Trait::Convex],
    )
}
