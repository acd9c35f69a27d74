//! Truncated Taylor arithmetic in one and two variables.
//!
//! The closed-form families are written once as expressions over jets, and
//! every partial derivative up to [`JET_ORDER`] falls out of the arithmetic.
//! Coefficients are stored as Taylor coefficients, so the `k`-th derivative
//! is `c[k] * k!`.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Highest total order carried by a jet.
pub const JET_ORDER: usize = 7;

const N: usize = JET_ORDER + 1;

const FACT: [f64; N] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0];

/// Derivatives `g(a), g'(a), ...` of the elementary functions, used by `compose`.
mod elementary {
    use super::N;

    pub fn exp(a: f64) -> [f64; N] {
        [a.exp(); N]
    }

    pub fn sin(a: f64) -> [f64; N] {
        let (s, c) = a.sin_cos();
        let cyc = [s, c, -s, -c];
        std::array::from_fn(|k| cyc[k % 4])
    }

    pub fn cos(a: f64) -> [f64; N] {
        let (s, c) = a.sin_cos();
        let cyc = [c, -s, -c, s];
        std::array::from_fn(|k| cyc[k % 4])
    }

    pub fn powf(a: f64, p: f64) -> [f64; N] {
        let mut out = [0.0; N];
        let mut falling = 1.0;
        for (k, slot) in out.iter_mut().enumerate() {
            // An exactly vanishing falling factorial kills the term even where
            // a^(p-k) is infinite (integer powers at the origin).
            *slot = if falling == 0.0 { 0.0 } else { falling * a.powf(p - k as f64) };
            falling *= p - k as f64;
        }
        out
    }

    pub fn recip(a: f64) -> [f64; N] {
        let mut out = [0.0; N];
        let mut coef = 1.0;
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = coef * a.powi(-(k as i32) - 1);
            coef *= -((k + 1) as f64);
        }
        out
    }

    pub fn ln(a: f64) -> [f64; N] {
        let mut out = [0.0; N];
        out[0] = a.ln();
        let mut coef = 1.0;
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            *slot = coef * a.powi(-(k as i32));
            coef *= -(k as f64);
        }
        out
    }
}

/// Univariate jet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet1 {
    c: [f64; N],
    order: usize,
}

impl Jet1 {
    pub fn constant(v: f64, order: usize) -> Self {
        let mut c = [0.0; N];
        c[0] = v;
        Jet1 { c, order: order.min(JET_ORDER) }
    }

    /// The independent variable at `x0`.
    pub fn var(x0: f64, order: usize) -> Self {
        let mut j = Self::constant(x0, order);
        if j.order >= 1 {
            j.c[1] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `k`-th derivative; `NaN` beyond the carried order.
    pub fn deriv(&self, k: usize) -> f64 {
        if k > self.order {
            f64::NAN
        } else {
            self.c[k] * FACT[k]
        }
    }

    /// Builds a jet from derivative values `d[0..]` of a function at a point.
    pub fn from_derivs(d: &[f64], order: usize) -> Self {
        let order = order.min(d.len().saturating_sub(1)).min(JET_ORDER);
        let mut c = [0.0; N];
        for k in 0..=order {
            c[k] = d[k] / FACT[k];
        }
        Jet1 { c, order }
    }

    /// Applies an outer function given its derivatives at the base value.
    pub fn compose(&self, g: &[f64]) -> Self {
        let order = self.order.min(g.len().saturating_sub(1));
        let mut delta = *self;
        delta.c[0] = 0.0;
        delta.order = order;
        let mut out = Jet1::constant(g[0], order);
        let mut pow = Jet1::constant(1.0, order);
        for k in 1..=order {
            pow = pow * delta;
            let w = g[k] / FACT[k];
            if w != 0.0 {
                for i in 0..=order {
                    out.c[i] += w * pow.c[i];
                }
            }
        }
        out
    }

    pub fn exp(self) -> Self {
        self.compose(&elementary::exp(self.c[0]))
    }
    pub fn sin(self) -> Self {
        self.compose(&elementary::sin(self.c[0]))
    }
    pub fn cos(self) -> Self {
        self.compose(&elementary::cos(self.c[0]))
    }
    pub fn powf(self, p: f64) -> Self {
        self.compose(&elementary::powf(self.c[0], p))
    }
    pub fn sqrt(self) -> Self {
        self.powf(0.5)
    }
    pub fn recip(self) -> Self {
        self.compose(&elementary::recip(self.c[0]))
    }
    pub fn ln(self) -> Self {
        self.compose(&elementary::ln(self.c[0]))
    }
    pub fn powi(self, n: u32) -> Self {
        let mut out = Jet1::constant(1.0, self.order);
        for _ in 0..n {
            out = out * self;
        }
        out
    }
    /// `|x|` away from the kink.
    pub fn abs(self) -> Self {
        if self.c[0] < 0.0 {
            -self
        } else {
            self
        }
    }
    pub fn scale(mut self, s: f64) -> Self {
        for v in &mut self.c[..=self.order] {
            *v *= s;
        }
        self
    }
}

impl Add for Jet1 {
    type Output = Jet1;
    fn add(self, rhs: Jet1) -> Jet1 {
        let order = self.order.min(rhs.order);
        let mut out = Jet1::constant(0.0, order);
        for i in 0..=order {
            out.c[i] = self.c[i] + rhs.c[i];
        }
        out
    }
}

impl Sub for Jet1 {
    type Output = Jet1;
    fn sub(self, rhs: Jet1) -> Jet1 {
        self + (-rhs)
    }
}

impl Neg for Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        self.scale(-1.0)
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, rhs: Jet1) -> Jet1 {
        let order = self.order.min(rhs.order);
        let mut out = Jet1::constant(0.0, order);
        for i in 0..=order {
            let mut s = 0.0;
            for k in 0..=i {
                s += self.c[k] * rhs.c[i - k];
            }
            out.c[i] = s;
        }
        out
    }
}

impl Div for Jet1 {
    type Output = Jet1;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet1) -> Jet1 {
        self * rhs.recip()
    }
}

impl Add<f64> for Jet1 {
    type Output = Jet1;
    fn add(mut self, rhs: f64) -> Jet1 {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet1 {
    type Output = Jet1;
    fn sub(mut self, rhs: f64) -> Jet1 {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet1 {
    type Output = Jet1;
    fn mul(self, rhs: f64) -> Jet1 {
        self.scale(rhs)
    }
}

/// Bivariate jet; `c[i][j]` multiplies `dx^i dy^j`, with `i + j <= order`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    c: [[f64; N]; N],
    order: usize,
}

impl Jet2 {
    pub fn constant(v: f64, order: usize) -> Self {
        let mut c = [[0.0; N]; N];
        c[0][0] = v;
        Jet2 { c, order: order.min(JET_ORDER) }
    }

    pub fn var_x(x0: f64, order: usize) -> Self {
        let mut j = Self::constant(x0, order);
        if j.order >= 1 {
            j.c[1][0] = 1.0;
        }
        j
    }

    pub fn var_y(y0: f64, order: usize) -> Self {
        let mut j = Self::constant(y0, order);
        if j.order >= 1 {
            j.c[0][1] = 1.0;
        }
        j
    }

    /// Affine jet `v + a dx + b dy`.
    pub fn affine(v: f64, a: f64, b: f64, order: usize) -> Self {
        let mut j = Self::constant(v, order);
        if j.order >= 1 {
            j.c[1][0] = a;
            j.c[0][1] = b;
        }
        j
    }

    /// Jet with the given partial derivatives `d^{i+j} / dx^i dy^j`.
    pub fn from_partials<F: Fn(usize, usize) -> f64>(order: usize, partial: F) -> Self {
        let mut j = Self::constant(0.0, order);
        for a in 0..=j.order {
            for b in 0..=(j.order - a) {
                j.c[a][b] = partial(a, b) / (FACT[a] * FACT[b]);
            }
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0][0]
    }

    /// `d^{i+j} / dx^i dy^j`; `NaN` beyond the carried order.
    pub fn partial(&self, i: usize, j: usize) -> f64 {
        if i + j > self.order {
            f64::NAN
        } else {
            self.c[i][j] * FACT[i] * FACT[j]
        }
    }

    /// Derivative with respect to x, one order lower.
    pub fn dx(&self) -> Self {
        let order = self.order.saturating_sub(1);
        let mut out = Jet2::constant(0.0, order);
        if self.order == 0 {
            out.c[0][0] = f64::NAN;
            return out;
        }
        for i in 0..=order {
            for j in 0..=(order - i) {
                out.c[i][j] = (i + 1) as f64 * self.c[i + 1][j];
            }
        }
        out
    }

    /// Derivative with respect to y, one order lower.
    pub fn dy(&self) -> Self {
        let order = self.order.saturating_sub(1);
        let mut out = Jet2::constant(0.0, order);
        if self.order == 0 {
            out.c[0][0] = f64::NAN;
            return out;
        }
        for i in 0..=order {
            for j in 0..=(order - i) {
                out.c[i][j] = (j + 1) as f64 * self.c[i][j + 1];
            }
        }
        out
    }

    /// Restriction to the x-axis direction as a univariate jet.
    pub fn along_x(&self) -> Jet1 {
        let d: Vec<f64> = (0..=self.order).map(|i| self.partial(i, 0)).collect();
        Jet1::from_derivs(&d, self.order)
    }

    /// Re-expresses the jet in new variables `(s, t)` with
    /// `dx = a ds + b dt`, `dy = c ds + d dt`.
    pub fn substitute(&self, a: f64, b: f64, c: f64, d: f64) -> Self {
        let order = self.order;
        let dx = Jet2::affine(0.0, a, b, order);
        let dy = Jet2::affine(0.0, c, d, order);
        let mut px = [Jet2::constant(1.0, order); N];
        let mut py = [Jet2::constant(1.0, order); N];
        for k in 1..=order {
            px[k] = px[k - 1] * dx;
            py[k] = py[k - 1] * dy;
        }
        let mut out = Jet2::constant(0.0, order);
        for i in 0..=order {
            for j in 0..=(order - i) {
                let w = self.c[i][j];
                if w == 0.0 {
                    continue;
                }
                let term = px[i] * py[j];
                for p in 0..=order {
                    for q in 0..=(order - p) {
                        out.c[p][q] += w * term.c[p][q];
                    }
                }
            }
        }
        out
    }

    pub fn compose(&self, g: &[f64]) -> Self {
        let order = self.order.min(g.len().saturating_sub(1));
        let mut delta = *self;
        delta.c[0][0] = 0.0;
        delta.order = order;
        let mut out = Jet2::constant(g[0], order);
        let mut pow = Jet2::constant(1.0, order);
        for k in 1..=order {
            pow = pow * delta;
            let w = g[k] / FACT[k];
            if w != 0.0 {
                for i in 0..=order {
                    for j in 0..=(order - i) {
                        out.c[i][j] += w * pow.c[i][j];
                    }
                }
            }
        }
        out
    }

    pub fn exp(self) -> Self {
        self.compose(&elementary::exp(self.c[0][0]))
    }
    pub fn sin(self) -> Self {
        self.compose(&elementary::sin(self.c[0][0]))
    }
    pub fn cos(self) -> Self {
        self.compose(&elementary::cos(self.c[0][0]))
    }
    pub fn powf(self, p: f64) -> Self {
        self.compose(&elementary::powf(self.c[0][0], p))
    }
    pub fn sqrt(self) -> Self {
        self.powf(0.5)
    }
    pub fn recip(self) -> Self {
        self.compose(&elementary::recip(self.c[0][0]))
    }
    pub fn ln(self) -> Self {
        self.compose(&elementary::ln(self.c[0][0]))
    }
    pub fn powi(self, n: u32) -> Self {
        let mut out = Jet2::constant(1.0, self.order);
        for _ in 0..n {
            out = out * self;
        }
        out
    }
    pub fn abs(self) -> Self {
        if self.c[0][0] < 0.0 {
            -self
        } else {
            self
        }
    }
    pub fn scale(mut self, s: f64) -> Self {
        for i in 0..=self.order {
            for j in 0..=(self.order - i) {
                self.c[i][j] *= s;
            }
        }
        self
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        let order = self.order.min(rhs.order);
        let mut out = Jet2::constant(0.0, order);
        for i in 0..=order {
            for j in 0..=(order - i) {
                out.c[i][j] = self.c[i][j] + rhs.c[i][j];
            }
        }
        out
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        self + (-rhs)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        let order = self.order.min(rhs.order);
        let mut out = Jet2::constant(0.0, order);
        for i in 0..=order {
            for j in 0..=(order - i) {
                let mut s = 0.0;
                for p in 0..=i {
                    for q in 0..=j {
                        s += self.c[p][q] * rhs.c[i - p][j - q];
                    }
                }
                out.c[i][j] = s;
            }
        }
        out
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet2) -> Jet2 {
        self * rhs.recip()
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, rhs: f64) -> Jet2 {
        self.c[0][0] += rhs;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(mut self, rhs: f64) -> Jet2 {
        self.c[0][0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn univariate_exp_sin_product() {
        // d^k/dx^k [e^x sin x] at 0: 0, 1, 2, 2, 0, -4, -8, -8
        let x = Jet1::var(0.0, 7);
        let j = x.exp() * x.sin();
        let want = [0.0, 1.0, 2.0, 2.0, 0.0, -4.0, -8.0, -8.0];
        for (k, w) in want.iter().enumerate() {
            assert!((j.deriv(k) - w).abs() < 1e-12, "k={k}: {} vs {w}", j.deriv(k));
        }
    }

    #[test]
    fn powf_integer_power_at_zero() {
        let x = Jet1::var(0.0, 7);
        let j = x.powf(3.0);
        assert_eq!(j.deriv(3), 6.0);
        assert_eq!(j.deriv(4), 0.0);
        assert_eq!(j.deriv(2), 0.0);
    }

    #[test]
    fn recip_and_ln() {
        let x = Jet1::var(2.0, 4);
        let r = x.recip();
        assert!((r.deriv(3) - (-6.0 / 16.0)).abs() < 1e-14);
        let l = x.ln();
        assert!((l.deriv(2) + 0.25).abs() < 1e-14);
    }

    #[test]
    fn bivariate_partials_of_r_cubed() {
        // u = (x^2 + y^2)^{3/2}; u_xx = 3(2x^2 + y^2)/r, u_xxy = 3y^3/r^3
        let (x0, y0) = (0.3, -0.4);
        let x = Jet2::var_x(x0, 5);
        let y = Jet2::var_y(y0, 5);
        let u = (x * x + y * y).powf(1.5);
        let r = (x0 * x0 + y0 * y0).sqrt();
        assert!((u.partial(2, 0) - 3.0 * (2.0 * x0 * x0 + y0 * y0) / r).abs() < 1e-12);
        assert!((u.partial(2, 1) - 3.0 * y0.powi(3) / r.powi(3)).abs() < 1e-12);
        let ux = u.dx();
        assert!((ux.partial(1, 1) - u.partial(2, 1)).abs() < 1e-12);
    }

    #[test]
    fn substitution_matches_direct_rotation() {
        let (c, s) = (0.6, 0.8);
        let (x0, y0) = (0.2, 0.5);
        let f = |x: Jet2, y: Jet2| (x * x * y).sin() + y.exp() * x;
        let base = f(Jet2::var_x(x0, 5), Jet2::var_y(y0, 5));
        let rotated = base.substitute(c, -s, s, c);
        let direct = f(Jet2::affine(x0, c, -s, 5), Jet2::affine(y0, s, c, 5));
        for i in 0..=5 {
            for j in 0..=(5 - i) {
                assert!((rotated.partial(i, j) - direct.partial(i, j)).abs() < 1e-10);
            }
        }
    }
}
