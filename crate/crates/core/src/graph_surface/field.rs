use std::fmt;
use std::io::{Read, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func_core::{Interval, Jet2, JET_ORDER};

/// Highest total order of finite-difference partials on sampled fields.
pub const GRID_PARTIAL_ORDER: usize = 4;

/// Default resolution when an analytic field has to be sampled.
pub const DEFAULT_GRID: usize = 513;

/// Oracle returning the jet of a field at `(x, y)` to the requested order.
pub type Oracle2 = Arc<dyn Fn(f64, f64, usize) -> Jet2 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: Interval,
    pub y: Interval,
}

impl Rect {
    pub fn new(x: Interval, y: Interval) -> Self {
        Rect { x, y }
    }

    /// `[-r, r]^2`.
    pub fn square(r: f64) -> Result<Self> {
        let i = Interval::centered(0.0, r)?;
        Ok(Rect { x: i, y: i })
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.x.contains(x) && self.y.contains(y)
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.x.contains_interval(&other.x) && self.y.contains_interval(&other.y)
    }
}

/// Uniform samples on a rectangle, stored row by row (`x` fastest).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl Grid2D {
    pub fn new(rect: Rect, nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::GridTooSmall { n: nx.min(ny), need: 3 });
        }
        if values.len() != nx * ny {
            return Err(Error::Malformed(format!("expected {} values, got {}", nx * ny, values.len())));
        }
        Ok(Grid2D { rect, nx, ny, values })
    }

    pub fn sample<F: Fn(f64, f64) -> f64 + Sync + Send>(rect: Rect, nx: usize, ny: usize, f: F) -> Result<Self> {
        let xs = rect.x.linspace(nx);
        let ys = rect.y.linspace(ny);
        let rows: Vec<Vec<f64>> = crate::par_map(&ys, |&y| xs.iter().map(|&x| f(x, y)).collect());
        Self::new(rect, nx, ny, rows.concat())
    }

    pub fn hx(&self) -> f64 {
        self.rect.x.width() / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        self.rect.y.width() / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            self.rect.x.hi()
        } else {
            self.rect.x.lo() + i as f64 * self.hx()
        }
    }

    pub fn y(&self, j: usize) -> f64 {
        if j + 1 == self.ny {
            self.rect.y.hi()
        } else {
            self.rect.y.lo() + j as f64 * self.hy()
        }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// Central-difference partial `d^{a+b}/dx^a dy^b` at a node; `NaN` where the stencil leaves the grid.
    pub fn fd_partial(&self, i: usize, j: usize, a: usize, b: usize) -> f64 {
        let (sx, rx) = stencil(a);
        let (sy, ry) = stencil(b);
        if i < rx || j < ry || i + rx >= self.nx || j + ry >= self.ny {
            return f64::NAN;
        }
        let mut s = 0.0;
        for (p, wx) in sx.iter().enumerate() {
            if *wx == 0.0 {
                continue;
            }
            for (q, wy) in sy.iter().enumerate() {
                if *wy == 0.0 {
                    continue;
                }
                s += wx * wy * self.at(i + p - rx, j + q - ry);
            }
        }
        s / (self.hx().powi(a as i32) * self.hy().powi(b as i32))
    }

    /// Bilinear interpolation of nodal values produced by `node`.
    fn interpolate<F: Fn(usize, usize) -> f64>(&self, x: f64, y: f64, node: F) -> f64 {
        let (i, tx) = cell(x, self.rect.x.lo(), self.hx(), self.nx);
        let (j, ty) = cell(y, self.rect.y.lo(), self.hy(), self.ny);
        let v = |di: usize, dj: usize, w: f64| if w == 0.0 { 0.0 } else { w * node(i + di, j + dj) };
        v(0, 0, (1.0 - tx) * (1.0 - ty)) + v(1, 0, tx * (1.0 - ty)) + v(0, 1, (1.0 - tx) * ty) + v(1, 1, tx * ty)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.interpolate(x, y, |i, j| self.at(i, j))
    }

    /// Writes `x,y,value` rows with a header.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["x", "y", "value"])?;
        for j in 0..self.ny {
            for i in 0..self.nx {
                out.write_record(&[self.x(i).to_string(), self.y(j).to_string(), self.at(i, j).to_string()])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a field written by [`Grid2D::write_csv`]; spacing must be uniform.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let mut rows: Vec<[f64; 3]> = Vec::new();
        for (k, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = k + 2;
            if rec.len() != 3 {
                return Err(Error::Malformed(format!("row {line}: expected 3 columns, got {}", rec.len())));
            }
            let mut v = [0.0; 3];
            for (c, slot) in v.iter_mut().enumerate() {
                *slot = rec[c]
                    .parse::<f64>()
                    .map_err(|_| Error::Malformed(format!("row {line}: `{}` is not a number", &rec[c])))?;
                if !slot.is_finite() {
                    return Err(Error::Malformed(format!("row {line}: non-finite value")));
                }
            }
            rows.push(v);
        }
        if rows.is_empty() {
            return Err(Error::Malformed("empty field file".into()));
        }
        let y0 = rows[0][1];
        let nx = rows.iter().take_while(|r| r[1] == y0).count();
        if nx < 3 || !rows.len().is_multiple_of(nx) {
            return Err(Error::Malformed(format!("{} rows do not form a grid with {nx} columns", rows.len())));
        }
        let ny = rows.len() / nx;
        let xs: Vec<f64> = rows[..nx].iter().map(|r| r[0]).collect();
        let ys: Vec<f64> = (0..ny).map(|j| rows[j * nx][1]).collect();
        check_uniform(&xs, "x")?;
        check_uniform(&ys, "y")?;
        for (k, r) in rows.iter().enumerate() {
            let (i, j) = (k % nx, k / nx);
            if r[0] != xs[i] || r[1] != ys[j] {
                return Err(Error::Malformed(format!(
                    "row {}: point ({}, {}) breaks the row-major layout",
                    k + 2,
                    r[0],
                    r[1]
                )));
            }
        }
        let rect = Rect::new(Interval::new(xs[0], xs[nx - 1])?, Interval::new(ys[0], ys[ny - 1])?);
        Self::new(rect, nx, ny, rows.iter().map(|r| r[2]).collect())
    }

    /// Companion metadata for the CSV layout.
    pub fn header_json(&self) -> String {
        let h = GridHeader { domain: self.rect, nx: self.nx, ny: self.ny, hx: self.hx(), hy: self.hy() };
        serde_json::to_string_pretty(&h).expect("header is plain data")
    }
}

#[derive(Serialize)]
struct GridHeader {
    domain: Rect,
    nx: usize,
    ny: usize,
    hx: f64,
    hy: f64,
}

fn check_uniform(v: &[f64], axis: &str) -> Result<()> {
    let h = (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::Malformed(format!("{axis} column is not increasing")));
    }
    for (k, w) in v.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > 1e-6 * h {
            return Err(Error::Malformed(format!("{axis} spacing is not uniform near index {k}")));
        }
    }
    Ok(())
}

fn cell(t: f64, lo: f64, h: f64, n: usize) -> (usize, f64) {
    let s = ((t - lo) / h).clamp(0.0, (n - 1) as f64);
    let i = (s.floor() as usize).min(n - 2);
    (i, s - i as f64)
}

/// Central stencil weights and radius for a derivative of the given order.
fn stencil(order: usize) -> (&'static [f64], usize) {
    match order {
        0 => (&[1.0], 0),
        1 => (&[-0.5, 0.0, 0.5], 1),
        2 => (&[1.0, -2.0, 1.0], 1),
        3 => (&[-0.5, 1.0, 0.0, -1.0, 0.5], 2),
        _ => (&[1.0, -4.0, 6.0, -4.0, 1.0], 2),
    }
}

/// A scalar field on a rectangle: a jet oracle, a uniform grid, or both.
#[derive(Clone)]
pub struct Field2D {
    rect: Rect,
    label: String,
    oracle: Option<Oracle2>,
    grid: Option<Arc<Grid2D>>,
}

impl fmt::Debug for Field2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field2D")
            .field("label", &self.label)
            .field("rect", &self.rect)
            .field("analytic", &self.oracle.is_some())
            .field("grid", &self.grid.as_ref().map(|g| (g.nx, g.ny)))
            .finish()
    }
}

impl Field2D {
    pub fn from_oracle<F>(rect: Rect, label: impl Into<String>, oracle: F) -> Self
    where
        F: Fn(f64, f64, usize) -> Jet2 + Send + Sync + 'static,
    {
        Field2D { rect, label: label.into(), oracle: Some(Arc::new(oracle)), grid: None }
    }

    /// Field given by a jet expression in `x` and `y`.
    pub fn from_jet<F>(rect: Rect, label: impl Into<String>, expr: F) -> Self
    where
        F: Fn(Jet2, Jet2) -> Jet2 + Send + Sync + 'static,
    {
        Self::from_oracle(rect, label, move |x, y, order| expr(Jet2::var_x(x, order), Jet2::var_y(y, order)))
    }

    pub fn sampled(grid: Grid2D, label: impl Into<String>) -> Self {
        Field2D { rect: grid.rect, label: label.into(), oracle: None, grid: Some(Arc::new(grid)) }
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(&self, label: impl Into<String>) -> Self {
        Field2D { label: label.into(), ..self.clone() }
    }

    pub fn is_analytic(&self) -> bool {
        self.oracle.is_some()
    }

    pub fn grid(&self) -> Option<&Grid2D> {
        self.grid.as_deref()
    }

    /// Restricts the domain; a stored grid is dropped.
    pub fn with_rect(&self, rect: Rect) -> Result<Self> {
        let oracle = self.oracle.clone().ok_or(Error::MissingPartial(0, 0))?;
        Ok(Field2D { rect, label: self.label.clone(), oracle: Some(oracle), grid: None })
    }

    /// Attaches a grid sampled from the oracle.
    pub fn with_grid(&self, nx: usize, ny: usize) -> Result<Self> {
        let g = self.to_grid(nx, ny)?;
        Ok(Field2D { grid: Some(Arc::new(g)), ..self.clone() })
    }

    /// Uniform samples; reuses the stored grid when the shape matches.
    pub fn to_grid(&self, nx: usize, ny: usize) -> Result<Grid2D> {
        if let Some(g) = &self.grid {
            if g.nx == nx && g.ny == ny {
                return Ok((**g).clone());
            }
        }
        Grid2D::sample(self.rect, nx, ny, |x, y| self.eval(x, y))
    }

    /// Jet at `(x, y)`; `None` for purely sampled fields.
    pub fn jet(&self, x: f64, y: f64, order: usize) -> Option<Jet2> {
        self.oracle.as_ref().map(|o| o(x, y, order.min(JET_ORDER)))
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match (&self.oracle, &self.grid) {
            (Some(o), _) => o(x, y, 0).value(),
            (None, Some(g)) => g.eval(x, y),
            (None, None) => f64::NAN,
        }
    }

    /// `d^{i+j} u / dx^i dy^j` at `(x, y)`.
    pub fn partial(&self, x: f64, y: f64, i: usize, j: usize) -> Result<f64> {
        match (&self.oracle, &self.grid) {
            (Some(o), _) if i + j <= JET_ORDER => Ok(o(x, y, i + j).partial(i, j)),
            (None, Some(g)) if i + j <= GRID_PARTIAL_ORDER => Ok(g.interpolate(x, y, |p, q| g.fd_partial(p, q, i, j))),
            _ => Err(Error::MissingPartial(i, j)),
        }
    }

    /// Applies a pointwise jet operation that consumes `extra` derivative orders.
    pub(crate) fn map_jet<F>(&self, label: impl Into<String>, extra: usize, op: F) -> Result<Field2D>
    where
        F: Fn(&Jet2) -> Jet2 + Send + Sync + 'static,
    {
        let op = Arc::new(op);
        let oracle: Option<Oracle2> = self.oracle.clone().map(|inner| {
            let op = op.clone();
            Arc::new(move |x: f64, y: f64, order: usize| op(&inner(x, y, (order + extra).min(JET_ORDER)))) as Oracle2
        });
        let grid = match &self.grid {
            Some(g) if extra <= GRID_PARTIAL_ORDER => {
                let idx: Vec<usize> = (0..g.nx * g.ny).collect();
                let values = crate::par_map(&idx, |&k| {
                    let (i, j) = (k % g.nx, k / g.nx);
                    op(&Jet2::from_partials(extra, |a, b| g.fd_partial(i, j, a, b))).value()
                });
                Some(Arc::new(Grid2D::new(g.rect, g.nx, g.ny, values)?))
            }
            Some(_) => return Err(Error::MissingPartial(extra, 0)),
            None => None,
        };
        if oracle.is_none() && grid.is_none() {
            return Err(Error::MissingPartial(extra, 0));
        }
        Ok(Field2D { rect: self.rect, label: label.into(), oracle, grid })
    }
}
