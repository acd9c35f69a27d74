//! Loading sampled profiles and fields from CSV.

use std::io::Read;

use crate::error::{Error, Result};
use crate::func_core::Derivs;
use crate::graph_surface::{Field2D, Grid2D};
use crate::radial_ma::RadialProfile;

/// Minimum number of samples in a profile file.
pub const MIN_PROFILE_ROWS: usize = 4;

/// A profile read from data, with the note that every derived report carries.
#[derive(Clone, Debug)]
pub struct IngestedProfile {
    pub profile: RadialProfile,
    pub note: String,
    pub rows: usize,
}

/// Monotone piecewise-cubic Hermite interpolant with shape-preserving slopes.
#[derive(Clone, Debug)]
pub struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl Pchip {
    /// `xs` strictly increasing with at least two points. With `flat_start` the slope
    /// at the first node is zero.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, flat_start: bool) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return Err(Error::Malformed(format!("need at least 2 matching samples, got {n}")));
        }
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        if let Some(k) = h.iter().position(|&v| !(v > 0.0)) {
            return Err(Error::Malformed(format!("abscissae not increasing at index {}", k + 1)));
        }
        let del: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
        let mut ds = vec![0.0; n];
        for k in 1..n - 1 {
            if del[k - 1] * del[k] > 0.0 {
                let w1 = 2.0 * h[k] + h[k - 1];
                let w2 = h[k] + 2.0 * h[k - 1];
                ds[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
            }
        }
        let edge = |h0: f64, h1: f64, d0: f64, d1: f64| {
            let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if d.signum() != d0.signum() {
                0.0
            } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
                3.0 * d0
            } else {
                d
            }
        };
        if n == 2 {
            ds = vec![del[0], del[0]];
        } else {
            ds[0] = edge(h[0], h[1], del[0], del[1]);
            ds[n - 1] = edge(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        }
        if flat_start {
            ds[0] = 0.0;
        }
        Ok(Pchip { xs, ys, ds })
    }

    /// Value and derivatives at `x`, clamped to the data range; orders above 3 vanish.
    pub fn derivs(&self, x: f64) -> Derivs {
        let n = self.xs.len();
        let x = x.clamp(self.xs[0], self.xs[n - 1]);
        let k = self.xs.partition_point(|&v| v <= x).clamp(1, n - 1) - 1;
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let (y0, y1, m0, m1) = (self.ys[k], self.ys[k + 1], self.ds[k] * h, self.ds[k + 1] * h);
        // Cubic in t: y0 + m0 t + c2 t^2 + c3 t^3.
        let c2 = 3.0 * (y1 - y0) - 2.0 * m0 - m1;
        let c3 = 2.0 * (y0 - y1) + m0 + m1;
        [
            y0 + t * (m0 + t * (c2 + t * c3)),
            (m0 + t * (2.0 * c2 + 3.0 * t * c3)) / h,
            (2.0 * c2 + 6.0 * t * c3) / (h * h),
            6.0 * c3 / (h * h * h),
            0.0,
        ]
    }
}

fn parse_rows<R: Read>(r: R, width: usize) -> Result<Vec<(u64, Vec<f64>)>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).flexible(true).from_reader(r);
    let mut rows = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(k as u64 + 1, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Err(_) if rows.is_empty() && k == 0 => continue,
            Err(_) => {
                return Err(Error::Malformed(format!("row {line}: cannot parse {:?}", rec.iter().collect::<Vec<_>>())))
            }
            Ok(v) if v.len() != width => {
                return Err(Error::Malformed(format!("row {line}: expected {width} columns, got {}", v.len())))
            }
            Ok(v) => {
                if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
                    return Err(Error::Malformed(format!("row {line}: non-finite value {bad}")));
                }
                rows.push((line, v));
            }
        }
    }
    Ok(rows)
}

/// Reads a two-column `(r, psi)` profile starting at `r = 0` and interpolates it.
pub fn ingest_profile<R: Read>(r: R, label: &str) -> Result<IngestedProfile> {
    let rows = parse_rows(r, 2)?;
    if rows.is_empty() {
        return Err(Error::Malformed("profile file has no data rows".into()));
    }
    if rows.len() < MIN_PROFILE_ROWS {
        return Err(Error::Malformed(format!("profile needs at least {MIN_PROFILE_ROWS} rows, got {}", rows.len())));
    }
    if rows[0].1[0] != 0.0 {
        return Err(Error::Malformed(format!("row {}: profile must start at r = 0", rows[0].0)));
    }
    for w in rows.windows(2) {
        if !(w[1].1[0] > w[0].1[0]) {
            return Err(Error::Malformed(format!("row {}: r is not strictly increasing", w[1].0)));
        }
    }
    if let Some((line, v)) = rows.iter().find(|(_, v)| v[1] < 0.0) {
        return Err(Error::Malformed(format!("row {line}: negative psi {}", v[1])));
    }
    let xs: Vec<f64> = rows.iter().map(|(_, v)| v[0]).collect();
    let ys: Vec<f64> = rows.iter().map(|(_, v)| v[1]).collect();
    let rho = xs[xs.len() - 1];
    let n = xs.len();
    let p = Pchip::new(xs, ys, true)?;
    let profile = RadialProfile::from_half(format!("{label} (pchip, {n} rows)"), rho, move |r| p.derivs(r))?;
    let note = format!(
        "profile interpolated from {n} samples by monotone piecewise-cubic Hermite interpolation; \
         third-order accurate, fourth derivative taken as zero"
    );
    Ok(IngestedProfile { profile, note, rows: n })
}

/// Reads an `x,y,value` field on a uniform grid.
pub fn ingest_field<R: Read>(r: R, label: &str) -> Result<Field2D> {
    Ok(Field2D::sampled(Grid2D::read_csv(r)?, label))
}
