use super::field::Field2D;
use crate::error::{Error, Result};

/// Induced metric `dx^2 + dy^2 + du^2` of the graph of `u`.
#[derive(Clone, Debug)]
pub struct MetricField {
    pub gxx: Field2D,
    pub gxy: Field2D,
    pub gyy: Field2D,
}

impl MetricField {
    /// `gxx gyy - gxy^2` at a point.
    pub fn det(&self, x: f64, y: f64) -> f64 {
        self.gxx.eval(x, y) * self.gyy.eval(x, y) - self.gxy.eval(x, y).powi(2)
    }
}

pub fn induced_metric(u: &Field2D) -> Result<MetricField> {
    Ok(MetricField {
        gxx: u.map_jet("gxx", 1, |j| {
            let ux = j.dx();
            ux * ux + 1.0
        })?,
        gxy: u.map_jet("gxy", 1, |j| j.dx() * j.dy())?,
        gyy: u.map_jet("gyy", 1, |j| {
            let uy = j.dy();
            uy * uy + 1.0
        })?,
    })
}

/// `(l u_x + m u_y)^2` for a unit direction `(l, m)`.
pub fn directional_square(u: &Field2D, l: f64, m: f64) -> Result<Field2D> {
    if ((l * l + m * m) - 1.0).abs() > 1e-12 {
        return Err(Error::UnnormalizedDirection { l, m });
    }
    u.map_jet(format!("({l} u_x + {m} u_y)^2"), 1, move |j| {
        let d = j.dx() * l + j.dy() * m;
        d * d
    })
}

/// `u_xx u_yy - u_xy^2`.
pub fn hessian_det(u: &Field2D) -> Result<Field2D> {
    u.map_jet("det D^2 u", 2, |j| {
        let ux = j.dx();
        let uy = j.dy();
        ux.dx() * uy.dy() - ux.dy() * ux.dy()
    })
}

/// Gauss curvature of the graph, `det D^2 u / (1 + |Du|^2)^2`.
pub fn gauss_curvature(u: &Field2D) -> Result<Field2D> {
    u.map_jet("K", 2, |j| {
        let ux = j.dx();
        let uy = j.dy();
        let det = ux.dx() * uy.dy() - ux.dy() * ux.dy();
        let w = ux * ux + uy * uy + 1.0;
        det / (w * w)
    })
}

/// `(u_xxy, u_xyy)` from third derivatives along `dx + dy`, `dx - dy`, `dx`, `dy`.
pub fn mixed_third_recovery(u_zzz: f64, u_www: f64, u_xxx: f64, u_yyy: f64) -> (f64, f64) {
    ((u_zzz - u_www - 2.0 * u_yyy) / 6.0, (u_zzz + u_www - 2.0 * u_xxx) / 6.0)
}

#[cfg(test)]
mod tests {
    use super::super::field::Rect;
    use super::*;

    fn r3() -> Field2D {
        Field2D::from_jet(Rect::square(1.0).unwrap(), "r^3", |x, y| (x * x + y * y).powf(1.5))
    }

    #[test]
    fn metric_examples() {
        let zero = Field2D::from_jet(Rect::square(1.0).unwrap(), "0", |x, _| x * 0.0);
        let g = induced_metric(&zero).unwrap();
        assert_eq!((g.gxx.eval(0.3, 0.2), g.gxy.eval(0.3, 0.2), g.gyy.eval(0.3, 0.2)), (1.0, 0.0, 1.0));
        let g = induced_metric(&r3()).unwrap();
        assert!((g.gxx.eval(0.1, 0.0) - 1.0009).abs() < 1e-15);
        let (x, y) = (0.4, -0.7);
        let ux = r3().partial(x, y, 1, 0).unwrap();
        let uy = r3().partial(x, y, 0, 1).unwrap();
        assert!((g.det(x, y) - (1.0 + ux * ux + uy * uy)).abs() < 1e-12);
    }

    #[test]
    fn directional_square_examples() {
        let u = Field2D::from_jet(Rect::square(1.0).unwrap(), "x^2", |x, _| x * x);
        assert_eq!(directional_square(&u, 1.0, 0.0).unwrap().eval(0.3, 0.9), 4.0 * 0.09);
        assert_eq!(directional_square(&u, 0.0, 1.0).unwrap().eval(0.3, 0.9), 0.0);
        assert!(matches!(directional_square(&u, 1.0, 1.0), Err(Error::UnnormalizedDirection { .. })));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let f = directional_square(&r3(), s, s).unwrap();
        let r = 0.1 * 2f64.sqrt();
        let exact = (3.0 * r * 0.2 * s).powi(2);
        assert!((f.eval(0.1, 0.1) - exact).abs() < 1e-15);
        let h = 1e-4;
        let fd = (f.eval(0.1 + h, 0.1) - f.eval(0.1 - h, 0.1)) / (2.0 * h);
        assert!((fd - f.partial(0.1, 0.1, 1, 0).unwrap()).abs() < 1e-7);
    }

    #[test]
    fn hessian_and_curvature_of_cusp() {
        let q = Field2D::from_jet(Rect::square(1.0).unwrap(), "q", |x, y| (x * x + y * y) * 0.5);
        assert!((hessian_det(&q).unwrap().eval(0.4, -0.2) - 1.0).abs() < 1e-14);
        let d = hessian_det(&r3()).unwrap();
        let k = gauss_curvature(&r3()).unwrap();
        for &(x, y) in &[(0.1, 0.0), (0.3, -0.4), (-0.6, 0.2)] {
            let rr = x * x + y * y;
            assert!((d.eval(x, y) - 18.0 * rr).abs() < 1e-12);
            assert!((k.eval(x, y) / d.eval(x, y) - (1.0 + 9.0 * rr * rr).powi(-2)).abs() < 1e-9);
        }
        assert!((k.eval(0.1, 0.0) - 0.18 / 1.0009f64.powi(2)).abs() < 1e-12);
        assert!((k.eval(0.1, 0.0) - 0.179677).abs() < 1e-6);
    }

    #[test]
    fn recovery_examples() {
        assert_eq!(mixed_third_recovery(6.0, -6.0, 0.0, 0.0), (2.0, 0.0));
        assert_eq!(mixed_third_recovery(6.0, 6.0, 0.0, 0.0), (0.0, 2.0));
        assert_eq!(mixed_third_recovery(12.0, 0.0, 6.0, 6.0), (0.0, 0.0));
    }
}
