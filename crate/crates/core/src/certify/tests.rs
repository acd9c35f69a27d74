use super::*;
use crate::error::Error;
use crate::func_core::Interval;
use crate::gallery::family;
use crate::graph_surface::{Field2D, Grid2D, Rect};
use crate::sqrt_lift::CheckConfig;

fn field(selector: &str) -> Field2D {
    family(selector).unwrap().fn2d.unwrap()
}

fn fast() -> CheckConfig {
    CheckConfig::fast().with_samples(257)
}

#[test]
fn r3_strip_takes_zero_branch_at_origin() {
    let u = field("cusp:p=3");
    let (plan, rep) = strip_cover_dir(&u, 0.9, Direction::X, &fast()).unwrap();
    assert!(rep.passed, "{rep:?}");
    assert_eq!(plan.lines.len(), LINES_PER_STRIP);
    for line in &plan.lines {
        match line.branch {
            LineBranch::ZeroAt { x0 } => {
                assert!(x0.abs() < 1e-12, "{x0}");
                assert!(plan.inclusions_hold(x0));
                assert_eq!(line.s, plan.r0 / 2.0);
            }
            LineBranch::NoZero => panic!("line {} took the no-zero route", line.offset),
        }
    }
    assert!(rep.empirical_constant <= 6.0 * 1.1 && rep.empirical_constant > 5.0, "{}", rep.empirical_constant);
    assert!(rep.metrics["eta"] > 0.0 && rep.metrics["deltaEta"] > 0.0);
}

#[test]
fn quadratic_strip_has_zero_constant() {
    let u = field("quadratic");
    for dir in Direction::ALL {
        let (plan, rep) = strip_cover_dir(&u, 0.9, dir, &fast()).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(rep.empirical_constant < 1e-6, "{}", rep.empirical_constant);
        assert!(plan.lines.iter().all(|l| matches!(l.branch, LineBranch::ZeroAt { .. })));
    }
}

#[test]
fn no_zero_lines_use_the_positive_route() {
    let u = Field2D::from_jet(Rect::square(1.0).unwrap(), "e^(x+y/2)", |x, y| (x + y * 0.5).exp());
    let (plan, rep) = strip_cover_dir(&u, 0.9, Direction::X, &fast()).unwrap();
    assert!(rep.passed, "{rep:?}");
    assert!(plan.lines.iter().all(|l| l.branch == LineBranch::NoZero && l.s == plan.delta));
}

#[test]
fn nonconvex_field_rejected_on_the_y_axis() {
    let u = field("nonconvex2d");
    let gate = convexity_gate(&u, 0.9).unwrap();
    assert!(!gate.passed);
    let w = &gate.witnesses[0];
    assert!(w.x.abs() < 0.01, "{w:?}");
    assert!(gate.metrics["x.jump"] >= 2.0 * (1.0 - 1e-9), "{:?}", gate.metrics);
    match strip_cover(&u, 0.9) {
        Err(Error::NotConvex { x, .. }) => assert!(x.abs() < 0.01),
        other => panic!("{other:?}"),
    }
}

#[test]
fn strip_geometry_inclusions() {
    for r in [0.1, 0.5, 0.9, 1.0] {
        let p = StripCoverPlan::new(Direction::X, r).unwrap();
        assert!((p.delta - r / 9.0).abs() < 1e-15 && (p.r0 - 6.0 * p.delta).abs() < 1e-15);
        for x0 in Interval::centered(0.0, 2.0 * p.delta).unwrap().linspace(101) {
            assert!(p.inclusions_hold(x0), "r={r} x0={x0}");
        }
        assert!(!p.inclusions_hold(3.0 * p.delta));
    }
    assert!(StripCoverPlan::new(Direction::X, 0.0).is_err());
}

#[test]
fn recovery_is_exact_for_monomials() {
    let rect = Rect::square(1.0).unwrap();
    for a in 0..=5u32 {
        for b in 0..=(5 - a) {
            let u = Field2D::from_jet(rect, "m", move |x, y| x.powi(a) * y.powi(b));
            for (x, y) in [(0.3, -0.7), (0.9, 0.2), (-0.5, -0.4)] {
                let (xxy, xyy) = recover_at(&u, x, y).unwrap();
                assert!((xxy - u.partial(x, y, 2, 1).unwrap()).abs() < 1e-10);
                assert!((xyy - u.partial(x, y, 1, 2).unwrap()).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn grid_recovery_converges_quadratically() {
    let rect = Rect::square(0.5).unwrap();
    let err = |n: usize| {
        let g = Grid2D::sample(rect, n, n, |x, y| (x + 2.0 * y).sin() + x * x * y.exp()).unwrap();
        let c = (n - 1) / 2 + (n - 1) / 8;
        let t = grid_thirds(&g, c, c, 1).unwrap();
        let (xxy, _) = recover_from_thirds(t);
        let (x, y) = (g.x(c), g.y(c));
        (xxy - (-2.0 * (x + 2.0 * y).cos() + 2.0 * y.exp())).abs()
    };
    let ratio = err(65) / err(129);
    assert!((3.5..4.5).contains(&ratio), "{ratio}");
}

#[test]
fn mollified_polynomial_thirds_match() {
    let u = Field2D::from_jet(Rect::square(1.0).unwrap(), "p", |x, y| x * x * y * 0.5 + x * y * y * 2.0 - y * y * y);
    let g = sample_for_mollification(&u, 0.9, 257).unwrap();
    for tau in TAUS {
        let b = mollified_third_bounds(&g, 0.9, tau).unwrap();
        assert!((b.xxy - 1.0).abs() < 1e-8, "{b:?}");
        assert!((b.xyy - 4.0).abs() < 1e-8, "{b:?}");
        assert!((b.yyy - 6.0).abs() < 1e-8 && b.xxx < 1e-8, "{b:?}");
    }
}

#[test]
fn r3_thirds_are_tau_uniform() {
    let u = field("cusp:p=3");
    let g = sample_for_mollification(&u, 0.9, 257).unwrap();
    let bounds: Vec<ThirdBounds> = TAUS.iter().map(|&t| mollified_third_bounds(&g, 0.9, t).unwrap()).collect();
    for b in &bounds {
        assert!(b.directional().iter().all(|&v| v <= 6.0 * 1.1), "{b:?}");
        assert!(b.mixed() <= 6.0 * 1.1, "{b:?}");
    }
    for c in 0..4 {
        let v: Vec<f64> = bounds.iter().map(|b| b.directional()[c]).collect();
        let hi = v.iter().cloned().fold(0.0, f64::max);
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((hi - lo) / hi < TAU_SPREAD, "{v:?}");
    }
}

#[test]
fn quadratic_directional_certificate() {
    let (rep, plans) = directional_certify_with(&field("quadratic"), 0.9, 129, &fast()).unwrap();
    assert_eq!(plans.len(), 4);
    assert!(rep.passed, "{:?}", rep.notes);
    assert!(rep.empirical_constant < 1e-6);
}

#[test]
fn seminorm_examples() {
    let r3 = field("cusp:p=3");
    let s = c21_seminorm_2d(&r3).unwrap();
    assert!((s - 6.0).abs() < 0.12, "{s}");
    let fine = c21_seminorm_2d_on(&r3, r3.rect(), 1025).unwrap();
    assert!((fine - s).abs() < 0.05 * s);
    let cubic = Field2D::from_jet(Rect::square(1.0).unwrap(), "x^3", |x, _| x * x * x);
    assert!((c21_seminorm_2d_on(&cubic, cubic.rect(), 257).unwrap() - 6.0).abs() < 1e-9);
    let us = field("us:s=0.1");
    assert!(c21_seminorm_2d_on(&us, us.rect(), 257).unwrap().is_finite());
}

#[test]
fn touch_cells_shrink_with_h() {
    let u = field("cusp:p=3");
    for n in [65, 129, 257] {
        let frac = touch_cell_fraction(&u, u.rect(), n).unwrap();
        assert!((frac * (n - 1) as f64 - 1.0).abs() < 1e-12, "{n}: {frac}");
    }
}
