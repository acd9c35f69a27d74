use crate::error::Result;
use crate::graph_surface::{Field2D, Rect, DEFAULT_GRID};

/// Second-derivative components `xx, xy, yy, zz, ww` at `(x, y)`, with `zz` and `ww`
/// along the unit diagonals.
fn second_components(u: &Field2D, x: f64, y: f64) -> [f64; 5] {
    let (xx, xy, yy) = match u.jet(x, y, 2) {
        Some(j) => (j.partial(2, 0), j.partial(1, 1), j.partial(0, 2)),
        None => {
            let p = |i, j| u.partial(x, y, i, j).unwrap_or(f64::NAN);
            (p(2, 0), p(1, 1), p(0, 2))
        }
    };
    [xx, xy, yy, 0.5 * (xx + 2.0 * xy + yy), 0.5 * (xx - 2.0 * xy + yy)]
}

/// Largest `|difference| / step` of the five second-derivative components over the
/// horizontal and vertical edges of an `n x n` grid on `rect`; `NaN` nodes are skipped.
pub fn c21_seminorm_2d_on(u: &Field2D, rect: Rect, n: usize) -> Result<f64> {
    let xs = rect.x.linspace(n);
    let ys = rect.y.linspace(n);
    let (hx, hy) = (xs[1] - xs[0], ys[1] - ys[0]);
    let rows: Vec<Vec<[f64; 5]>> = crate::par_map(&ys, |&y| xs.iter().map(|&x| second_components(u, x, y)).collect());
    let mut best = 0.0f64;
    let mut edge = |a: &[f64; 5], b: &[f64; 5], h: f64| {
        for c in 0..5 {
            let q = (b[c] - a[c]).abs() / h;
            if q.is_finite() {
                best = best.max(q);
            }
        }
    };
    for j in 0..n {
        for i in 0..n {
            if i + 1 < n {
                edge(&rows[j][i], &rows[j][i + 1], hx);
            }
            if j + 1 < n {
                edge(&rows[j][i], &rows[j + 1][i], hy);
            }
        }
    }
    Ok(best)
}

/// [`c21_seminorm_2d_on`] over the whole field rectangle at the default resolution.
pub fn c21_seminorm_2d(u: &Field2D) -> Result<f64> {
    c21_seminorm_2d_on(u, u.rect(), DEFAULT_GRID)
}

/// Fraction of the `(n - 1) n` horizontal cells of an `n x n` grid on `rect` where
/// `u_x` changes sign.
pub fn touch_cell_fraction(u: &Field2D, rect: Rect, n: usize) -> Result<f64> {
    let xs = rect.x.linspace(n);
    let ys = rect.y.linspace(n);
    let counts: Vec<usize> = crate::par_map(&ys, |&y| {
        let ux: Vec<f64> = xs.iter().map(|&x| u.partial(x, y, 1, 0).unwrap_or(f64::NAN)).collect();
        ux.windows(2).filter(|w| (w[0] < 0.0 && w[1] >= 0.0) || (w[1] < 0.0 && w[0] >= 0.0)).count()
    });
    Ok(counts.iter().sum::<usize>() as f64 / (n * (n - 1)) as f64)
}
