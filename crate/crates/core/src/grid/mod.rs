//! Uniform symmetric sampling grids, trapezoid integration, Gauss–Hermite
//! rules and the centered Fourier transform.

mod fourier;
mod quadrature;

pub use fourier::fourier_transform;
pub(crate) use fourier::contract_axis;
pub use quadrature::{gauss_hermite_rule, QuadRule};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default half width of a desk-scale axis.
pub const DEFAULT_HALF_WIDTH: f64 = 8.0;
/// Default node count per axis for d = 1.
pub const DEFAULT_N_1D: usize = 257;
/// Default node count per axis for d = 2.
pub const DEFAULT_N_2D: usize = 65;

/// Uniform grid on `[-half_width, half_width]` with an odd number of nodes,
/// so the origin is always a node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisGrid {
    half_width: f64,
    n: usize,
}

impl AxisGrid {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::invalid(format!("half_width must be positive, got {half_width}")));
        }
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::invalid(format!("node count must be odd and at least 3, got {n}")));
        }
        Ok(Self { half_width, n })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    /// Index of the node at the origin.
    pub fn center(&self) -> usize {
        (self.n - 1) / 2
    }

    pub fn node(&self, i: usize) -> f64 {
        // Integer offset from the center keeps the grid exactly symmetric.
        (i as f64 - self.center() as f64) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Trapezoid weight of node `i`.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n {
            0.5 * self.spacing()
        } else {
            self.spacing()
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.weight(i)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x.abs() <= self.half_width * (1.0 + 1e-12)
    }
}

/// Checked constructor mirroring [`AxisGrid::new`].
pub fn make_axis_grid(half_width: f64, n: usize) -> Result<AxisGrid> {
    AxisGrid::new(half_width, n)
}

/// Tensor product of axis grids, flattened row-major (first axis slowest).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductGrid {
    axes: Vec<AxisGrid>,
}

impl ProductGrid {
    pub fn new(axes: Vec<AxisGrid>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::invalid("a product grid needs at least one axis"));
        }
        Ok(Self { axes })
    }

    pub fn axes(&self) -> &[AxisGrid] {
        &self.axes
    }

    pub fn rank(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(AxisGrid::len).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(AxisGrid::len).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        for (k, ax) in self.axes.iter().enumerate().rev() {
            idx[k] = flat % ax.len();
            flat /= ax.len();
        }
        idx
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.axes)
            .fold(0, |acc, (&i, ax)| acc * ax.len() + i)
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.unflatten(flat)
            .iter()
            .zip(&self.axes)
            .map(|(&i, ax)| ax.node(i))
            .collect()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    /// Product trapezoid weights in flat order.
    pub fn weights(&self) -> Vec<f64> {
        let per_axis: Vec<Vec<f64>> = self.axes.iter().map(AxisGrid::weights).collect();
        (0..self.len())
            .map(|flat| {
                self.unflatten(flat)
                    .iter()
                    .zip(&per_axis)
                    .map(|(&i, w)| w[i])
                    .product()
            })
            .collect()
    }
}

/// Grid on phase space ℝ^{2d}: `d` position axes followed by `d` frequency
/// axes. Field values are flattened row-major over `(x_1..x_d, ξ_1..ξ_d)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    dim: usize,
    x_axes: Vec<AxisGrid>,
    xi_axes: Vec<AxisGrid>,
}

impl PhaseGrid {
    pub fn new(x_axes: Vec<AxisGrid>, xi_axes: Vec<AxisGrid>) -> Result<Self> {
        let dim = x_axes.len();
        if !(1..=2).contains(&dim) || xi_axes.len() != dim {
            return Err(Error::invalid(format!(
                "phase grid needs d in {{1, 2}} position and frequency axes, got {} and {}",
                x_axes.len(),
                xi_axes.len()
            )));
        }
        Ok(Self { dim, x_axes, xi_axes })
    }

    /// Same axis on all 2d coordinates.
    pub fn square(dim: usize, half_width: f64, n: usize) -> Result<Self> {
        let ax = AxisGrid::new(half_width, n)?;
        Self::new(vec![ax; dim], vec![ax; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn x_axes(&self) -> &[AxisGrid] {
        &self.x_axes
    }

    pub fn xi_axes(&self) -> &[AxisGrid] {
        &self.xi_axes
    }

    pub fn x_grid(&self) -> ProductGrid {
        ProductGrid { axes: self.x_axes.clone() }
    }

    pub fn xi_grid(&self) -> ProductGrid {
        ProductGrid { axes: self.xi_axes.clone() }
    }

    pub fn product(&self) -> ProductGrid {
        let mut axes = self.x_axes.clone();
        axes.extend_from_slice(&self.xi_axes);
        ProductGrid { axes }
    }

    pub fn len(&self) -> usize {
        self.x_grid().len() * self.xi_grid().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(x, ξ)` of a flat node index.
    pub fn node(&self, flat: usize) -> (Vec<f64>, Vec<f64>) {
        let p = self.product().point(flat);
        let (x, xi) = p.split_at(self.dim);
        (x.to_vec(), xi.to_vec())
    }

    /// The node as a point of ℂᵈ, `z_j = x_j + iξ_j`.
    pub fn complex_node(&self, flat: usize) -> Vec<Complex64> {
        let (x, xi) = self.node(flat);
        x.iter().zip(&xi).map(|(&a, &b)| Complex64::new(a, b)).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.product().weights()
    }
}

/// Complex samples of a function on ℝᵈ (d = 1 or 2).
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    grid: ProductGrid,
    values: Vec<Complex64>,
}

impl Signal {
    pub fn new(grid: ProductGrid, values: Vec<Complex64>) -> Result<Self> {
        if !(1..=2).contains(&grid.rank()) {
            return Err(Error::invalid(format!("signals live in d = 1 or 2, got {}", grid.rank())));
        }
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "signal has {} values for {} grid nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: ProductGrid) -> Result<Self> {
        let n = grid.len();
        Self::new(grid, vec![Complex64::new(0.0, 0.0); n])
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: ProductGrid, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let values = (0..grid.len()).map(|k| f(&grid.point(k))).collect();
        Self::new(grid, values)
    }

    pub fn dim(&self) -> usize {
        self.grid.rank()
    }

    pub fn grid(&self) -> &ProductGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `(f, g)_{L²}` by trapezoid quadrature.
    pub fn inner(&self, other: &Signal) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::invalid("inner product of signals on different grids"));
        }
        Ok(self
            .grid
            .weights()
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(&w, (a, b))| a * b.conj() * w)
            .sum())
    }

    pub fn l2_norm(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(&w, v)| w * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Signal {
        Signal {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn sub(&self, other: &Signal) -> Result<Signal> {
        if self.grid != other.grid {
            return Err(Error::invalid("difference of signals on different grids"));
        }
        Ok(Signal {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }
}

/// Anything sampled on a product grid with trapezoid weights.
pub trait Sampled {
    fn sample_grid(&self) -> ProductGrid;
    fn sample_values(&self) -> &[Complex64];
}

impl Sampled for Signal {
    fn sample_grid(&self) -> ProductGrid {
        self.grid.clone()
    }

    fn sample_values(&self) -> &[Complex64] {
        &self.values
    }
}

/// Trapezoid-rule integral over the grid, product weights in several dimensions.
pub fn integrate<S: Sampled + ?Sized>(field: &S) -> Complex64 {
    field
        .sample_grid()
        .weights()
        .iter()
        .zip(field.sample_values())
        .map(|(&w, v)| v * w)
        .sum()
}
