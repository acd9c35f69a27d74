use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certify::{CertReport, GridParams};
use crate::func_core::Tolerances;

/// Offsets at which `G` is sampled to bound `G'(0), G''(0), G'''(0)`.
pub const NODES: [f64; 3] = [-1.0, -0.5, -0.25];

/// Constants of the interpolation inequality
/// `|G'(0)| + |G''(0)| + |G'''(0)| <= A G(0) + B max|G''''|`
/// for nonnegative nondecreasing `G` on `[-1, 0]`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct InterpolationConstants {
    pub a: f64,
    pub b: f64,
    pub nodes: [f64; 3],
}

/// Solves the Taylor system at the three nodes.
///
/// `G(t) - G(0) = t G' + t^2/2 G'' + t^3/6 G''' + E(t)` with `|E(t)| <= t^4/24 max|G''''|`,
/// and `|G(t) - G(0)| <= G(0)` because `0 <= G(t) <= G(0)`.
pub fn interpolation_constants() -> InterpolationConstants {
    let v = Matrix3::from_fn(|i, j| {
        let t = NODES[i];
        match j {
            0 => t,
            1 => t * t / 2.0,
            _ => t * t * t / 6.0,
        }
    });
    let inv = v.try_inverse().expect("Vandermonde-type matrix on distinct nodes is invertible");
    let mut a = 0.0;
    let mut b = 0.0;
    for k in 0..3 {
        for (i, &t) in NODES.iter().enumerate() {
            let w = inv[(k, i)].abs();
            a += w;
            b += w * t.powi(4) / 24.0;
        }
    }
    InterpolationConstants { a, b, nodes: NODES }
}

impl InterpolationConstants {
    /// Left and right sides of the inequality for derivatives at 0 and the fourth-derivative bound.
    pub fn sides(&self, g0: f64, g1: f64, g2: f64, g3: f64, g4_max: f64) -> (f64, f64) {
        (g1.abs() + g2.abs() + g3.abs(), self.a * g0 + self.b * g4_max)
    }
}

/// Samples per trial used to confirm a candidate quartic is admissible.
const ADMISSIBLE_SAMPLES: usize = 257;

/// Power-basis coefficients `c[k]` of a quartic `G(y) = sum c_k y^k` that is
/// nonnegative and nondecreasing on `[-1, 0]`.
pub fn random_admissible_quartic(rng: &mut impl Rng) -> [f64; 5] {
    loop {
        let c = if rng.gen_bool(0.5) { bernstein_quartic(rng) } else { free_quartic(rng) };
        if admissible(&c) {
            return c;
        }
    }
}

/// `G' = sum b_k B_k^3(y + 1)` with `b_k >= 0`, integrated from `G(-1) >= 0`.
fn bernstein_quartic(rng: &mut impl Rng) -> [f64; 5] {
    let scale =
        |rng: &mut dyn rand::RngCore| if rng.gen_bool(0.2) { 0.0 } else { 10f64.powf(rng.gen_range(-4.0..3.0)) };
    let b: [f64; 4] = std::array::from_fn(|_| scale(rng));
    let g_lo = scale(rng);
    // Slope in s = y + 1 as a power series, then shift back to y.
    let mut slope = [0.0; 4];
    for k in 0..4 {
        // C(3,k) s^k (1 - s)^{3-k}
        for j in 0..=(3 - k) {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            slope[k + j] += b[k] * choose(3, k) * choose(3 - k, j) * sign;
        }
    }
    let mut in_s = [0.0; 5];
    in_s[0] = g_lo;
    for k in 0..4 {
        in_s[k + 1] = slope[k] / (k + 1) as f64;
    }
    shift(&in_s, -1.0)
}

fn choose(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Coefficients of `p(y - a)` where `p` is given in powers of its argument.
fn shift(p: &[f64; 5], a: f64) -> [f64; 5] {
    let mut out = [0.0; 5];
    for (n, &c) in p.iter().enumerate() {
        for k in 0..=n {
            out[k] += c * choose(n, k) * (-a).powi((n - k) as i32);
        }
    }
    out
}

/// Coefficients drawn freely and kept only if admissible.
fn free_quartic(rng: &mut impl Rng) -> [f64; 5] {
    let mag = 10f64.powf(rng.gen_range(-3.0..2.0));
    std::array::from_fn(|k| if k == 0 { mag * rng.gen_range(0.0..2.0) } else { mag * rng.gen_range(-4.0..4.0) })
}

fn admissible(c: &[f64; 5]) -> bool {
    let g = |y: f64| c.iter().rev().fold(0.0, |a, v| a * y + v);
    let d = |y: f64| c[1] + y * (2.0 * c[2] + y * (3.0 * c[3] + y * 4.0 * c[4]));
    let scale = c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    (0..ADMISSIBLE_SAMPLES).all(|i| {
        let y = -(i as f64) / (ADMISSIBLE_SAMPLES - 1) as f64;
        g(y) >= 0.0 && d(y) >= -1e-14 * scale
    })
}

/// Brute-force check of the interpolation inequality on random admissible quartics.
pub fn check_interpolation_random(trials: usize, seed: u64) -> CertReport {
    let c = interpolation_constants();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report =
        CertReport::new("interpolation_random", GridParams::line(trials, ADMISSIBLE_SAMPLES, Tolerances::default()));
    let mut worst = 0.0f64;
    let mut violations = 0usize;
    for t in 0..trials {
        let q = random_admissible_quartic(&mut rng);
        let (lhs, rhs) = c.sides(q[0], q[1], 2.0 * q[2], 6.0 * q[3], (24.0 * q[4]).abs());
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        worst = worst.max(ratio);
        if lhs > rhs * (1.0 + 1e-12) {
            violations += 1;
            report.fail(t as f64, None, ratio, format!("trial {t}: {lhs} > {rhs} for coefficients {q:?}"));
        }
    }
    report.constant(worst);
    report.metric("A", c.a);
    report.metric("B", c.b);
    report.metric("trials", trials as f64);
    report.metric("violations", violations as f64);
    if c.a < 1.0 {
        report.fail(0.0, None, c.a, "A < 1 contradicts G(y) = y + 1");
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_hand_inverse() {
        let c = interpolation_constants();
        assert!((c.a - 363.0).abs() < 1e-9);
        assert!((c.b - 1.2447916666666667).abs() < 1e-12);
        assert!(c.a >= 1.0 && c.b > 0.0);
    }

    #[test]
    fn random_quartics_satisfy_inequality() {
        let r = check_interpolation_random(1000, 7);
        assert!(r.passed, "{:?}", r.notes);
        assert_eq!(r.metrics["violations"], 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q = bernstein_quartic(&mut rng);
        assert!(admissible(&q));
        assert_eq!(shift(&[0.0, 1.0, 0.0, 0.0, 0.0], -1.0), [1.0, 1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn affine_and_constant_tests() {
        let c = interpolation_constants();
        let (l, r) = c.sides(1.0, 1.0, 0.0, 0.0, 0.0);
        assert!(l <= r);
        let (l, r) = c.sides(1.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(l, 0.0);
        assert!(r >= 1.0);
    }
}
