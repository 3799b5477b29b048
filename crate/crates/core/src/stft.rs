//! Gaussian-window short-time Fourier transform, its inversion, twisted
//! convolution, the projection Π and Toeplitz (localization) operators.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{contract_axis, PhaseGrid, ProductGrid, Sampled, Signal};
use crate::interp::interpolate;

/// Records which identification a phase-space field uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Convention {
    /// Function of `(x, ξ)` under the prefactor-free STFT convention.
    StftPlain,
    /// Function of `z = x + iξ` on ℂᵈ (sampled Fock-space functions).
    FockPlane,
}

/// `(2π)^{d/2}`: the factor by which `‖V_φ f‖_{L²(ℝ^{2d})}` exceeds
/// `‖f‖_{L²} ‖φ‖_{L²}` under the prefactor-free STFT.
pub fn moyal_constant(d: usize) -> f64 {
    (2.0 * PI).powf(d as f64 / 2.0)
}

/// Complex samples on a [`PhaseGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseField {
    grid: PhaseGrid,
    values: Vec<Complex64>,
    convention: Convention,
}

impl PhaseField {
    pub fn new(grid: PhaseGrid, values: Vec<Complex64>, convention: Convention) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "phase field has {} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values, convention })
    }

    pub fn zeros(grid: PhaseGrid) -> Self {
        let n = grid.len();
        Self { grid, values: vec![Complex64::new(0.0, 0.0); n], convention: Convention::StftPlain }
    }

    /// Samples `f(x, ξ)`.
    pub fn from_fn(grid: PhaseGrid, f: impl Fn(&[f64], &[f64]) -> Complex64 + Sync) -> Self {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let (x, xi) = grid.node(k);
                f(&x, &xi)
            })
            .collect();
        Self { grid, values, convention: Convention::StftPlain }
    }

    /// Samples `F(z)` with `z = x + iξ`.
    pub fn from_complex_fn(grid: PhaseGrid, f: impl Fn(&[Complex64]) -> Complex64 + Sync) -> Self {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|k| f(&grid.complex_node(k)))
            .collect();
        Self { grid, values, convention: Convention::FockPlane }
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn map(&self, f: impl Fn(&[f64], &[f64], Complex64) -> Complex64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let (x, xi) = self.grid.node(k);
                f(&x, &xi, v)
            })
            .collect();
        Self { grid: self.grid.clone(), values, convention: self.convention }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            convention: self.convention,
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::invalid("phase fields on different grids"));
        }
        Ok(Self {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
            convention: self.convention,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// `(F, G)_{L²(ℝ^{2d})}` by trapezoid quadrature.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::invalid("phase fields on different grids"));
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

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Cubic interpolation at an off-grid `(x, ξ)`.
    pub fn value_at(&self, x: &[f64], xi: &[f64]) -> Option<Complex64> {
        let mut p = x.to_vec();
        p.extend_from_slice(xi);
        interpolate(&self.grid.product(), &self.values, &p)
    }
}

impl Sampled for PhaseField {
    fn sample_grid(&self) -> ProductGrid {
        self.grid.product()
    }

    fn sample_values(&self) -> &[Complex64] {
        &self.values
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum WindowShape {
    /// `π^{-d/4} e^{-|x|²/2}`, evaluated analytically off-grid.
    Gaussian,
    /// Arbitrary samples, interpolated off-grid and zero outside.
    Sampled,
}

/// Analysis/synthesis window with its cached L² norm.
#[derive(Clone, Debug)]
pub struct Window {
    signal: Signal,
    l2_norm: f64,
    shape: WindowShape,
}

impl Window {
    /// Window from arbitrary samples.
    pub fn from_signal(signal: Signal) -> Result<Self> {
        let l2_norm = signal.l2_norm();
        if !(l2_norm > 0.0 && l2_norm.is_finite()) {
            return Err(Error::invalid("window must have positive finite L² norm"));
        }
        Ok(Self { signal, l2_norm, shape: WindowShape::Sampled })
    }

    pub fn signal(&self) -> &Signal {
        &self.signal
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm
    }

    pub fn is_gaussian(&self) -> bool {
        self.shape == WindowShape::Gaussian
    }

    /// Window value at an arbitrary point.
    pub fn eval(&self, p: &[f64]) -> Complex64 {
        match self.shape {
            WindowShape::Gaussian => {
                let r2: f64 = p.iter().map(|t| t * t).sum();
                Complex64::new(PI.powf(-(p.len() as f64) / 4.0) * (-0.5 * r2).exp(), 0.0)
            }
            WindowShape::Sampled => {
                interpolate(self.signal.grid(), self.signal.values(), p).unwrap_or_default()
            }
        }
    }
}

/// The canonical window `φ(x) = π^{-d/4} e^{-|x|²/2}` sampled on `grid`.
pub fn gaussian_window(d: usize, grid: &ProductGrid) -> Result<Window> {
    if grid.rank() != d {
        return Err(Error::invalid(format!("window of dimension {d} on a grid of rank {}", grid.rank())));
    }
    let signal = Signal::from_fn(grid.clone(), |x| {
        let r2: f64 = x.iter().map(|t| t * t).sum();
        Complex64::new(PI.powf(-(d as f64) / 4.0) * (-0.5 * r2).exp(), 0.0)
    })?;
    let l2_norm = signal.l2_norm();
    Ok(Window { signal, l2_norm, shape: WindowShape::Gaussian })
}

fn check_pair(f: &Signal, w: &Window, pg: &PhaseGrid) -> Result<()> {
    if f.grid() != w.signal.grid() {
        return Err(Error::invalid("signal and window are sampled on different grids"));
    }
    if pg.dim() != f.dim() {
        return Err(Error::invalid(format!(
            "phase grid of dimension {} for a signal of dimension {}",
            pg.dim(),
            f.dim()
        )));
    }
    for (ax, xi) in f.grid().axes().iter().zip(pg.xi_axes()) {
        let nyquist = PI / ax.spacing();
        if xi.half_width() > nyquist * (1.0 + 1e-12) {
            return Err(Error::invalid(format!(
                "frequency range {} exceeds the signal grid's resolvable band {nyquist:.4}",
                xi.half_width()
            )));
        }
    }
    Ok(())
}

/// Kernels `w_m e^{sign·i ξ_k y_m}` for each axis pair, laid out `out × in`.
fn exp_kernels(
    in_axes: &[crate::grid::AxisGrid],
    out_axes: &[crate::grid::AxisGrid],
    sign: f64,
    weight_input: bool,
) -> Vec<Vec<Complex64>> {
    in_axes
        .iter()
        .zip(out_axes)
        .map(|(ia, oa)| {
            let ys = ia.nodes();
            let ws = ia.weights();
            oa.nodes()
                .iter()
                .flat_map(|&xi| {
                    ys.iter().zip(&ws).map(move |(&y, &w)| {
                        let w = if weight_input { w } else { 1.0 };
                        Complex64::from_polar(w, sign * y * xi)
                    })
                })
                .collect()
        })
        .collect()
}

fn contract_all(mut values: Vec<Complex64>, mut shape: Vec<usize>, kernels: &[Vec<Complex64>], out: &[usize]) -> Vec<Complex64> {
    for (axis, (k, &n)) in kernels.iter().zip(out).enumerate() {
        values = contract_axis(&values, &shape, axis, k, n);
        shape[axis] = n;
    }
    values
}

/// `V_w f(x, ξ) = ∫ f(y) conj(w(y − x)) e^{−i⟨y,ξ⟩} dy` at every node of `pg`.
///
/// No `(2π)^{-d/2}` prefactor; see the crate docs.
pub fn stft(f: &Signal, w: &Window, pg: &PhaseGrid) -> Result<PhaseField> {
    check_pair(f, w, pg)?;
    let sgrid = f.grid();
    let ys = sgrid.points();
    let sw = sgrid.weights();
    let kernels = exp_kernels(sgrid.axes(), pg.xi_axes(), -1.0, false);
    let xgrid = pg.x_grid();
    let out_shape: Vec<usize> = pg.xi_axes().iter().map(|a| a.len()).collect();
    let rows: Vec<Vec<Complex64>> = (0..xgrid.len())
        .into_par_iter()
        .map(|kx| {
            let x = xgrid.point(kx);
            let g: Vec<Complex64> = ys
                .iter()
                .zip(f.values().iter().zip(&sw))
                .map(|(y, (&fv, &wt))| {
                    let shifted: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
                    fv * w.eval(&shifted).conj() * wt
                })
                .collect();
            contract_all(g, sgrid.shape(), &kernels, &out_shape)
        })
        .collect();
    PhaseField::new(pg.clone(), rows.concat(), Convention::StftPlain)
}

/// `V_w f` at a single off-grid point.
pub fn stft_at(f: &Signal, w: &Window, x: &[f64], xi: &[f64]) -> Complex64 {
    let g = f.grid();
    g.weights()
        .iter()
        .zip(f.values())
        .enumerate()
        .map(|(k, (&wt, &fv))| {
            let y = g.point(k);
            let shifted: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
            let phase: f64 = y.iter().zip(xi).map(|(a, b)| a * b).sum();
            fv * w.eval(&shifted).conj() * Complex64::from_polar(wt, -phase)
        })
        .sum()
}

/// Adjoint inversion `f(y) = (2π)^{−d} ‖w‖^{−2} ∬ F(x,ξ) w(y − x) e^{i⟨y,ξ⟩} dx dξ`.
pub fn istft(field: &PhaseField, w: &Window, out: &ProductGrid) -> Result<Signal> {
    let pg = field.grid();
    if out.rank() != pg.dim() {
        return Err(Error::invalid("output grid dimension differs from the phase grid"));
    }
    let xgrid = pg.x_grid();
    let xw = xgrid.weights();
    let nxi: usize = pg.xi_grid().len();
    let kernels = exp_kernels(pg.xi_axes(), out.axes(), 1.0, true);
    let ys = out.points();
    let out_shape = out.shape();
    let contributions: Vec<Vec<Complex64>> = (0..xgrid.len())
        .into_par_iter()
        .map(|kx| {
            let x = xgrid.point(kx);
            let row = field.values()[kx * nxi..(kx + 1) * nxi].to_vec();
            let h = contract_all(row, pg.xi_grid().shape(), &kernels, &out_shape);
            h.iter()
                .zip(&ys)
                .map(|(hv, y)| {
                    let shifted: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
                    hv * w.eval(&shifted) * xw[kx]
                })
                .collect()
        })
        .collect();
    let norm = (2.0 * PI).powi(pg.dim() as i32).recip() / (w.l2_norm * w.l2_norm);
    let mut values = vec![Complex64::new(0.0, 0.0); out.len()];
    for c in &contributions {
        for (v, cv) in values.iter_mut().zip(c) {
            *v += cv;
        }
    }
    for v in &mut values {
        *v *= norm;
    }
    Signal::new(out.clone(), values)
}

/// `(F ∗̂ G)(x,ξ) = (2π)^{−d/2} ∬ F(x−y, ξ−η) G(y,η) e^{−i⟨x−y,η⟩} dy dη`.
///
/// Direct double sum over node pairs. Both fields must share one grid; the
/// differences `x − y` then land on grid nodes and values outside the grid
/// count as zero.
pub fn twisted_convolution(f: &PhaseField, g: &PhaseField) -> Result<PhaseField> {
    if f.grid() != g.grid() {
        return Err(Error::invalid("twisted convolution needs both fields on one grid"));
    }
    let pg = f.grid();
    let d = pg.dim();
    let prod = pg.product();
    let shape = prod.shape();
    let rank = shape.len();
    let axes = prod.axes().to_vec();
    let centers: Vec<isize> = axes.iter().map(|a| a.center() as isize).collect();
    let weighted_g: Vec<Complex64> = g.values().iter().zip(prod.weights()).map(|(v, w)| v * w).collect();
    let in_idx: Vec<Vec<usize>> = (0..prod.len()).map(|k| prod.unflatten(k)).collect();
    let norm = (2.0 * PI).powf(-(d as f64) / 2.0);

    let values: Vec<Complex64> = (0..prod.len())
        .into_par_iter()
        .map(|out| {
            let oi = prod.unflatten(out);
            let mut acc = Complex64::new(0.0, 0.0);
            'input: for (m, ji) in in_idx.iter().enumerate() {
                let gv = weighted_g[m];
                if gv.re == 0.0 && gv.im == 0.0 {
                    continue;
                }
                let mut flat = 0usize;
                for a in 0..rank {
                    let di = oi[a] as isize - ji[a] as isize + centers[a];
                    if di < 0 || di >= shape[a] as isize {
                        continue 'input;
                    }
                    flat = flat * shape[a] + di as usize;
                }
                let phase: f64 = (0..d)
                    .map(|k| (axes[k].node(oi[k]) - axes[k].node(ji[k])) * axes[d + k].node(ji[d + k]))
                    .sum();
                acc += f.values()[flat] * gv * Complex64::from_polar(1.0, -phase);
            }
            acc * norm
        })
        .collect();
    PhaseField::new(pg.clone(), values, f.convention())
}

/// `Π F = (2π)^{−d/2} ‖w‖^{−2} F ∗̂ V_w w`: the orthogonal projection onto
/// the STFT range. The scalar makes `Π V_w f = V_w f` under the
/// prefactor-free convention.
pub fn projection_pi(field: &PhaseField, w: &Window) -> Result<PhaseField> {
    let vww = stft(w.signal(), w, field.grid())?;
    let conv = twisted_convolution(field, &vww)?;
    let c = moyal_constant(field.dim()).recip() / (w.l2_norm * w.l2_norm);
    Ok(conv.scale(Complex64::new(c, 0.0)))
}

/// `Tp_w(a) f = istft(a · V_w f)`, on the phase grid carried by `a`.
///
/// Weak form: `(Tp f, g) = (2π)^{−d} ‖w‖^{−2} (a V_w f, V_w g)_{L²(ℝ^{2d})}`.
pub fn toeplitz(a: &PhaseField, w: &Window, f: &Signal) -> Result<Signal> {
    let v = stft(f, w, a.grid())?;
    let av = v.mul(a)?;
    istft(&av, w, f.grid())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::AxisGrid;
    use crate::hermite::{hermite_synthesize, CoeffTable, HermiteExpansion};
    use rand::SeedableRng;

    fn sgrid(l: f64, n: usize) -> ProductGrid {
        ProductGrid::new(vec![AxisGrid::new(l, n).unwrap()]).unwrap()
    }

    fn phi_closed_form(x: f64, xi: f64) -> Complex64 {
        Complex64::from_polar((-(x * x + xi * xi) / 4.0).exp(), -x * xi / 2.0)
    }

    #[test]
    fn canonical_window() {
        let g = sgrid(8.0, 257);
        let w = gaussian_window(1, &g).unwrap();
        assert!((w.signal().values()[128].re - PI.powf(-0.25)).abs() < 1e-15);
        assert!((w.l2_norm() - 1.0).abs() < 1e-10);
        let ax = AxisGrid::new(8.0, 65).unwrap();
        let g2 = ProductGrid::new(vec![ax, ax]).unwrap();
        let w2 = gaussian_window(2, &g2).unwrap();
        assert!((w2.signal().values()[32 * 65 + 32].re - PI.powf(-0.5)).abs() < 1e-15);
        assert!((w2.l2_norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn stft_of_window_matches_closed_form() {
        let g = sgrid(8.0, 257);
        let w = gaussian_window(1, &g).unwrap();
        let pg = PhaseGrid::square(1, 6.0, 25).unwrap();
        let v = stft(w.signal(), &w, &pg).unwrap();
        let origin = pg.len() / 2;
        assert!((v.values()[origin] - 1.0).norm() < 1e-8);
        for k in 0..pg.len() {
            let (x, xi) = pg.node(k);
            assert!((v.values()[k] - phi_closed_form(x[0], xi[0])).norm() < 1e-7);
        }
        let zero = stft(&Signal::zeros(g).unwrap(), &w, &pg).unwrap();
        assert!(zero.max_abs() == 0.0);
    }

    #[test]
    fn stft_rejects_mismatch_and_aliasing() {
        let w = gaussian_window(1, &sgrid(8.0, 257)).unwrap();
        let f = Signal::zeros(sgrid(8.0, 129)).unwrap();
        let pg = PhaseGrid::square(1, 4.0, 9).unwrap();
        assert!(matches!(stft(&f, &w, &pg), Err(Error::InvalidArgument(_))));
        let coarse = sgrid(8.0, 17);
        let wc = gaussian_window(1, &coarse).unwrap();
        let pg = PhaseGrid::square(1, 8.0, 9).unwrap();
        assert!(stft(wc.signal(), &wc, &pg).is_err());
    }

    #[test]
    fn round_trip_through_istft() {
        let g = sgrid(8.0, 257);
        let w = gaussian_window(1, &g).unwrap();
        let pg = PhaseGrid::square(1, 12.0, 121).unwrap();
        for k in [0u32, 1, 5] {
            let f = hermite_synthesize(&HermiteExpansion::basis(vec![k]), &g).unwrap();
            let back = istft(&stft(&f, &w, &pg).unwrap(), &w, &g).unwrap();
            let err = back.sub(&f).unwrap().values().iter().map(|v| v.norm()).fold(0.0, f64::max);
            assert!(err < 1e-6, "k={k} err={err}");
        }
        let zero = istft(&PhaseField::zeros(pg), &w, &g).unwrap();
        assert!(zero.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn moyal_identity() {
        let g = sgrid(8.0, 257);
        let w = gaussian_window(1, &g).unwrap();
        let pg = PhaseGrid::square(1, 12.0, 121).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..3 {
            let e: HermiteExpansion = CoeffTable::random(&mut rng, 1, 8).into();
            let f = hermite_synthesize(&e, &g).unwrap();
            let v = stft(&f, &w, &pg).unwrap();
            let expect = moyal_constant(1) * f.l2_norm();
            assert!(((v.l2_norm() - expect) / expect).abs() < 1e-4);
        }
    }

    #[test]
    fn translation_covariance() {
        // V(f(· − x0))(x, ξ) = e^{−i x0 ξ} V f(x − x0, ξ)
        let g = sgrid(10.0, 321);
        let w = gaussian_window(1, &g).unwrap();
        let x0 = 1.25;
        let c = 2f64.sqrt() * PI.powf(-0.25);
        let h1 = |t: f64| c * t * (-t * t / 2.0).exp();
        let f = Signal::from_fn(g.clone(), |y| Complex64::new(h1(y[0]), 0.0)).unwrap();
        let shifted = Signal::from_fn(g.clone(), |y| Complex64::new(h1(y[0] - x0), 0.0)).unwrap();
        let pg = PhaseGrid::square(1, 5.0, 41).unwrap();
        let vs = stft(&shifted, &w, &pg).unwrap();
        let mut worst = 0.0f64;
        for k in 0..pg.len() {
            let (x, xi) = pg.node(k);
            let expect = Complex64::from_polar(1.0, -x0 * xi[0]) * stft_at(&f, &w, &[x[0] - x0], &xi);
            worst = worst.max((vs.values()[k] - expect).norm());
        }
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn window_transform_constant() {
        let g = sgrid(8.0, 129);
        let w = gaussian_window(1, &g).unwrap();
        let pg = PhaseGrid::square(1, 8.0, 65).unwrap();
        let vpp = stft(w.signal(), &w, &pg).unwrap();
        let conv = twisted_convolution(&vpp, &vpp).unwrap();
        let c = conv.inner(&vpp).unwrap() / vpp.inner(&vpp).unwrap();
        assert!((c - moyal_constant(1)).norm() < 1e-6, "{c}");
        let h1 = hermite_synthesize(&HermiteExpansion::basis(vec![1]), &g).unwrap();
        let vh = stft(&h1, &w, &pg).unwrap();
        let conv = twisted_convolution(&vh, &vpp).unwrap();
        let c1 = conv.inner(&vh).unwrap() / vh.inner(&vh).unwrap();
        assert!((c1 - c).norm() < 1e-6);
        let z = PhaseField::zeros(pg.clone());
        assert_eq!(twisted_convolution(&z, &vpp).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn projection_properties() {
        let g = sgrid(8.0, 129);
        let w = gaussian_window(1, &g).unwrap();
        let pg = PhaseGrid::square(1, 8.0, 65).unwrap();
        let h2 = hermite_synthesize(&HermiteExpansion::basis(vec![2]), &g).unwrap();
        let v = stft(&h2, &w, &pg).unwrap();
        let pv = projection_pi(&v, &w).unwrap();
        assert!(pv.sub(&v).unwrap().l2_norm() / v.l2_norm() < 1e-2);

        // Pulled back from the anti-analytic function conj(w) on the Fock side.
        let anti = PhaseField::from_fn(pg.clone(), |x, xi| {
            phi_closed_form(x[0], xi[0]) * Complex64::new(x[0], xi[0]) / 2f64.sqrt()
        });
        let pa = projection_pi(&anti, &w).unwrap();
        assert!(pa.l2_norm() / anti.l2_norm() < 0.1);

        let bump = PhaseField::from_fn(pg.clone(), |x, xi| {
            Complex64::new((-((x[0] - 1.0).powi(2) + (xi[0] + 0.5).powi(2)) / 3.0).exp(), 0.3 * x[0] * (-(x[0] * x[0] + xi[0] * xi[0]) / 4.0).exp())
        });
        let p1 = projection_pi(&bump, &w).unwrap();
        let p2 = projection_pi(&p1, &w).unwrap();
        assert!(p2.sub(&p1).unwrap().l2_norm() / p1.l2_norm() < 1e-2);
    }

    #[test]
    fn toeplitz_with_unit_symbol_is_identity() {
        let g = sgrid(8.0, 257);
        let w = gaussian_window(1, &g).unwrap();
        let pg = PhaseGrid::square(1, 12.0, 121).unwrap();
        let one = PhaseField::from_fn(pg, |_, _| Complex64::new(1.0, 0.0));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let e: HermiteExpansion = CoeffTable::random(&mut rng, 1, 8).into();
        let f = hermite_synthesize(&e, &g).unwrap();
        let tf = toeplitz(&one, &w, &f).unwrap();
        let err = tf.sub(&f).unwrap().values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn toeplitz_sigma2_spectrum() {
        // Oracle: (Tp f, f) = (2π)^{-1} ∬ σ₂ |V f|² with |V h_k|² = e^{-r²/2}(r²/2)^k/k!,
        // which integrates to 1 + 2(k + 1) = 2k + 3.
        let g = sgrid(8.0, 257);
        let w = gaussian_window(1, &g).unwrap();
        let pg = PhaseGrid::square(1, 12.0, 121).unwrap();
        let sigma2 = PhaseField::from_fn(pg, |x, xi| Complex64::new(1.0 + x[0] * x[0] + xi[0] * xi[0], 0.0));
        for k in 0..=2u32 {
            let f = hermite_synthesize(&HermiteExpansion::basis(vec![k]), &g).unwrap();
            let tf = toeplitz(&sigma2, &w, &f).unwrap();
            let lambda = 2.0 * f64::from(k) + 3.0;
            let rel = tf.sub(&f.scale(Complex64::new(lambda, 0.0))).unwrap().l2_norm() / lambda;
            assert!(rel < 1e-3, "k={k} rel={rel}");
        }
    }

    #[test]
    fn toeplitz_weak_form_and_symmetry() {
        let g = sgrid(8.0, 257);
        let w = gaussian_window(1, &g).unwrap();
        let pg = PhaseGrid::square(1, 12.0, 121).unwrap();
        let a = PhaseField::from_fn(pg.clone(), |x, xi| Complex64::new((-(x[0] - 0.5).powi(2) / 4.0 - xi[0] * xi[0] / 6.0).exp(), 0.0));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let f = hermite_synthesize(&CoeffTable::random(&mut rng, 1, 6).into(), &g).unwrap();
        let h = hermite_synthesize(&CoeffTable::random(&mut rng, 1, 6).into(), &g).unwrap();
        let tf = toeplitz(&a, &w, &f).unwrap();
        let th = toeplitz(&a, &w, &h).unwrap();
        let weak = stft(&f, &w, &pg).unwrap().mul(&a).unwrap().inner(&stft(&h, &w, &pg).unwrap()).unwrap() / (2.0 * PI);
        let strong = tf.inner(&h).unwrap();
        assert!((weak - strong).norm() < 1e-6);
        let sym = (tf.inner(&h).unwrap() - f.inner(&th).unwrap()).norm();
        assert!(sym < 1e-6 * f.l2_norm() * h.l2_norm());
        assert!(tf.inner(&f).unwrap().re > -1e-8);
    }

    #[test]
    fn two_dimensional_stft_at_origin() {
        let ax = AxisGrid::new(7.0, 57).unwrap();
        let g = ProductGrid::new(vec![ax, ax]).unwrap();
        let w = gaussian_window(2, &g).unwrap();
        let pg = PhaseGrid::square(2, 3.0, 7).unwrap();
        let v = stft(w.signal(), &w, &pg).unwrap();
        for k in 0..pg.len() {
            let (x, xi) = pg.node(k);
            let expect = phi_closed_form(x[0], xi[0]) * phi_closed_form(x[1], xi[1]);
            assert!((v.values()[k] - expect).norm() < 1e-8);
        }
    }
}
