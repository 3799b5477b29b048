//! Separable cubic (four-point Lagrange) interpolation on product grids.

use num_complex::Complex64;

use crate::grid::{AxisGrid, ProductGrid};

/// Stencil start index and the four Lagrange weights for `x` on `ax`, or
/// `None` when `x` lies outside the axis. Near the ends the stencil is shifted
/// inward so it never reads past the grid.
fn stencil(ax: &AxisGrid, x: f64) -> Option<(usize, [f64; 4])> {
    if !ax.contains(x) {
        return None;
    }
    let n = ax.len();
    let h = ax.spacing();
    let t = (x + ax.half_width()) / h;
    let base = (t.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    let s = t - base as f64;
    // Lagrange basis on nodes 0, 1, 2, 3 evaluated at s.
    let w = [
        -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0,
        s * (s - 2.0) * (s - 3.0) / 2.0,
        -s * (s - 1.0) * (s - 3.0) / 2.0,
        s * (s - 1.0) * (s - 2.0) / 6.0,
    ];
    Some((base, w))
}

/// Interpolated value at `point` (one coordinate per grid axis), `None`
/// outside the grid.
pub fn interpolate(grid: &ProductGrid, values: &[Complex64], point: &[f64]) -> Option<Complex64> {
    debug_assert_eq!(point.len(), grid.rank());
    let stencils: Vec<(usize, [f64; 4])> = grid
        .axes()
        .iter()
        .zip(point)
        .map(|(ax, &x)| stencil(ax, x))
        .collect::<Option<_>>()?;
    let rank = grid.rank();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut idx = vec![0usize; rank];
    for combo in 0..4usize.pow(rank as u32) {
        let mut c = combo;
        let mut w = 1.0;
        for k in (0..rank).rev() {
            let o = c % 4;
            c /= 4;
            idx[k] = stencils[k].0 + o;
            w *= stencils[k].1[o];
        }
        if w != 0.0 {
            acc += values[grid.flatten(&idx)] * w;
        }
    }
    Some(acc)
}
