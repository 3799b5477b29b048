//! The Bargmann transform by direct quadrature, through Hermite coefficients
//! and through the STFT; its inverse; Taylor extraction on Cauchy circles;
//! and the resampling operators `S` and `U_𝔙`.

use std::f64::consts::{PI, SQRT_2};
use std::ops::Deref;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{PhaseGrid, Signal};
use crate::hermite::{CoeffTable, HermiteExpansion, MultiIndex};
use crate::stft::{gaussian_window, stft_at, Convention, PhaseField};

/// Exponents beyond this are reported as overflow rather than evaluated.
const EXP_LIMIT: f64 = 700.0;

/// Bilinear `⟨z, w⟩ = Σ z_j w_j`.
pub fn bilinear_dot(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b).sum()
}

/// Hermitian `(z, w) = Σ z_j conj(w_j)`.
pub fn hermitian_dot(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

fn fmt_point(z: &[Complex64]) -> String {
    let parts: Vec<String> = z.iter().map(|c| format!("{}{:+}i", c.re, c.im)).collect();
    format!("({})", parts.join(", "))
}

/// `z^k / √(k!)` for `k = 0..=n`.
fn normalized_powers(z: Complex64, n: u32) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut m = Complex64::new(1.0, 0.0);
    out.push(m);
    for k in 1..=n {
        m = m * z / f64::from(k).sqrt();
        out.push(m);
    }
    out
}

/// Coefficients `a_α` of `F(z) = Σ a_α z^α / √(α!)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorCoeffs(CoeffTable);

impl TaylorCoeffs {
    pub fn new(dim: usize, max_degree: u32) -> Self {
        Self(CoeffTable::new(dim, max_degree))
    }

    pub fn from_table(table: CoeffTable) -> Self {
        Self(table)
    }

    pub fn table(&self) -> &CoeffTable {
        &self.0
    }

    pub fn table_mut(&mut self) -> &mut CoeffTable {
        &mut self.0
    }

    pub fn into_table(self) -> CoeffTable {
        self.0
    }

    /// The normalized monomial `z^α/√(α!)` as a coefficient table.
    pub fn monomial(alpha: impl Into<MultiIndex>) -> Self {
        Self(HermiteExpansion::basis(alpha).into_table())
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.0.dim());
        let deg = self.0.degree();
        let powers: Vec<Vec<Complex64>> = z.iter().map(|&zj| normalized_powers(zj, deg)).collect();
        self.0
            .iter()
            .map(|(alpha, &a)| {
                alpha
                    .entries()
                    .iter()
                    .zip(&powers)
                    .fold(a, |acc, (&k, p)| acc * p[k as usize])
            })
            .sum()
    }
}

impl Deref for TaylorCoeffs {
    type Target = CoeffTable;

    fn deref(&self) -> &CoeffTable {
        &self.0
    }
}

/// An entire function on ℂᵈ, by coefficients or by samples.
#[derive(Clone, Debug)]
pub enum FockFunction {
    Taylor(TaylorCoeffs),
    /// Samples on a phase grid read as `z = x + iξ`.
    Sampled(PhaseField),
}

impl FockFunction {
    pub fn dim(&self) -> usize {
        match self {
            FockFunction::Taylor(t) => t.dim(),
            FockFunction::Sampled(f) => f.dim(),
        }
    }

    /// Value at `z`. Sampled functions are interpolated and fail outside
    /// their grid.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        match self {
            FockFunction::Taylor(t) => Ok(t.eval(z)),
            FockFunction::Sampled(f) => {
                let x: Vec<f64> = z.iter().map(|c| c.re).collect();
                let xi: Vec<f64> = z.iter().map(|c| c.im).collect();
                f.value_at(&x, &xi).ok_or_else(|| Error::OutOfDomain {
                    count: 1,
                    first: fmt_point(z),
                })
            }
        }
    }

    /// Samples on `pg`. A sampled function on the same grid is returned as is.
    pub fn sample(&self, pg: &PhaseGrid) -> Result<PhaseField> {
        match self {
            FockFunction::Sampled(f) if f.grid() == pg => Ok(f.clone()),
            _ => {
                let field = PhaseField::from_complex_fn(pg.clone(), |z| self.eval(z).unwrap_or(Complex64::new(f64::NAN, 0.0)));
                if let Some(k) = field.values().iter().position(|v| v.is_nan()) {
                    return Err(Error::OutOfDomain {
                        count: field.values().iter().filter(|v| v.is_nan()).count(),
                        first: fmt_point(&pg.complex_node(k)),
                    });
                }
                if let Some(k) = field.values().iter().position(|v| !v.is_finite()) {
                    return Err(Error::Overflow { point: fmt_point(&pg.complex_node(k)) });
                }
                Ok(field)
            }
        }
    }
}

impl From<TaylorCoeffs> for FockFunction {
    fn from(t: TaylorCoeffs) -> Self {
        FockFunction::Taylor(t)
    }
}

/// `𝔙f(z) = π^{−d/4} ∫ exp(−½(⟨z,z⟩ + |y|²) + √2⟨z,y⟩) f(y) dy` by quadrature
/// on the signal grid.
pub fn bargmann_direct(f: &Signal, points: &[Vec<Complex64>]) -> Result<Vec<Complex64>> {
    let g = f.grid();
    let d = f.dim();
    let ys = g.points();
    let w = g.weights();
    let norm = PI.powf(-(d as f64) / 4.0);
    let max_y: Vec<f64> = g.axes().iter().map(|a| a.half_width()).collect();
    points
        .par_iter()
        .map(|z| {
            if z.len() != d {
                return Err(Error::invalid(format!("point of dimension {} for a signal of dimension {d}", z.len())));
            }
            // Largest real part of the exponent over the grid box.
            let zz = bilinear_dot(z, z);
            let peak: f64 = -0.5 * zz.re
                + z.iter()
                    .zip(&max_y)
                    .map(|(zj, &l)| {
                        let c = SQRT_2 * zj.re;
                        let y = c.clamp(-l, l);
                        -0.5 * y * y + c * y
                    })
                    .sum::<f64>();
            if peak > EXP_LIMIT {
                return Err(Error::Overflow { point: fmt_point(z) });
            }
            let sum: Complex64 = ys
                .iter()
                .zip(f.values().iter().zip(&w))
                .map(|(y, (&fv, &wt))| {
                    let y2: f64 = y.iter().map(|t| t * t).sum();
                    let zy: Complex64 = z.iter().zip(y).map(|(a, &b)| a * b).sum();
                    let e = -0.5 * (zz + y2) + SQRT_2 * zy;
                    fv * e.exp() * wt
                })
                .sum();
            Ok(sum * norm)
        })
        .collect()
}

/// `𝔙` on a Hermite expansion: the coefficients carry over to the
/// normalized monomials unchanged.
pub fn bargmann_coefficients(e: &HermiteExpansion) -> TaylorCoeffs {
    TaylorCoeffs(e.table().clone())
}

/// `𝔙(Σ a_α h_α)(z) = Σ a_α z^α/√(α!)`.
pub fn bargmann_from_hermite(e: &HermiteExpansion, z: &[Complex64]) -> Complex64 {
    bargmann_coefficients(e).eval(z)
}

/// `𝔙f(x + iξ) = e^{(|x|²+|ξ|²)/2} e^{−i⟨x,ξ⟩} V_φ f(√2x, −√2ξ)`, with the
/// STFT evaluated pointwise against the canonical window.
pub fn bargmann_via_stft(f: &Signal, z: &[Complex64]) -> Result<Complex64> {
    let w = gaussian_window(f.dim(), f.grid())?;
    let x: Vec<f64> = z.iter().map(|c| c.re).collect();
    let xi: Vec<f64> = z.iter().map(|c| c.im).collect();
    let r2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    if 0.5 * r2 > EXP_LIMIT {
        return Err(Error::Overflow { point: fmt_point(z) });
    }
    let xxi: f64 = x.iter().zip(&xi).map(|(a, b)| a * b).sum();
    let sx: Vec<f64> = x.iter().map(|t| SQRT_2 * t).collect();
    let sxi: Vec<f64> = xi.iter().map(|t| -SQRT_2 * t).collect();
    Ok(Complex64::from_polar((0.5 * r2).exp(), -xxi) * stft_at(f, &w, &sx, &sxi))
}

/// `𝔙f` sampled at every node of `pg`, read as `z = x + iξ`.
pub fn bargmann_sampled(f: &Signal, pg: &PhaseGrid) -> Result<PhaseField> {
    let points: Vec<Vec<Complex64>> = (0..pg.len()).map(|k| pg.complex_node(k)).collect();
    let values = bargmann_direct(f, &points)?;
    PhaseField::new(pg.clone(), values, Convention::FockPlane)
}

/// Coefficients dropped by [`inverse_bargmann`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TruncationReport {
    pub dropped: usize,
    /// ℓ² norm of the dropped coefficients.
    pub tail_l2: f64,
}

impl TruncationReport {
    pub fn is_empty(&self) -> bool {
        self.dropped == 0
    }
}

/// `𝔙^{−1}` up to `max_degree`: Taylor coefficients become Hermite
/// coefficients. Sampled input goes through [`taylor_coefficients`] first.
pub fn inverse_bargmann(f: &FockFunction, max_degree: u32) -> Result<(HermiteExpansion, TruncationReport)> {
    let coeffs = match f {
        FockFunction::Taylor(t) => t.clone(),
        FockFunction::Sampled(_) => {
            let ex = taylor_coefficients(|z| f.eval(z), f.dim(), max_degree, CauchyOptions::default())?;
            ex.coeffs
        }
    };
    let mut out = CoeffTable::new(coeffs.dim(), max_degree.max(coeffs.max_degree()).min(max_degree));
    let mut report = TruncationReport::default();
    let mut tail = 0.0;
    for (alpha, &v) in coeffs.iter() {
        if alpha.order() <= max_degree {
            out.insert(alpha.clone(), v)?;
        } else {
            report.dropped += 1;
            tail += v.norm_sqr();
        }
    }
    report.tail_l2 = tail.sqrt();
    if !report.is_empty() {
        log::warn!("inverse Bargmann truncated {} coefficient(s), tail ℓ² {:.3e}", report.dropped, report.tail_l2);
    }
    Ok((out.into(), report))
}

/// Cauchy-circle parameters for [`taylor_coefficients`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CauchyOptions {
    pub radius: f64,
    /// Nodes per circle; 0 picks `max(2(degree + 1), 32)`.
    pub nodes: usize,
}

impl Default for CauchyOptions {
    fn default() -> Self {
        Self { radius: 1.5, nodes: 0 }
    }
}

/// Result of [`taylor_coefficients`].
#[derive(Clone, Debug)]
pub struct TaylorExtraction {
    pub coeffs: TaylorCoeffs,
    /// Largest `|c_k| r^k` in the two highest orders the circle resolves,
    /// relative to the largest kept one. Large values mean aliasing.
    pub tail_ratio: f64,
    pub ill_conditioned: bool,
}

/// Taylor coefficients `a_α` (with `F = Σ a_α z^α/√(α!)`) from trapezoid
/// sums over the torus `|z_j| = r`. Exact for polynomials of degree below
/// the node count.
pub fn taylor_coefficients(
    f: impl Fn(&[Complex64]) -> Result<Complex64> + Sync,
    dim: usize,
    degree: u32,
    opts: CauchyOptions,
) -> Result<TaylorExtraction> {
    if !(1..=2).contains(&dim) {
        return Err(Error::invalid(format!("dimension {dim} not supported")));
    }
    if !(opts.radius > 0.0 && opts.radius.is_finite()) {
        return Err(Error::invalid("Cauchy radius must be positive"));
    }
    let m = if opts.nodes == 0 { (2 * (degree as usize + 1)).max(32) } else { opts.nodes };
    if m <= degree as usize {
        return Err(Error::invalid(format!("{m} circle nodes cannot resolve degree {degree}")));
    }
    let r = opts.radius;
    let roots: Vec<Complex64> = (0..m).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)).collect();
    let total = m.pow(dim as u32);
    let samples: Vec<Complex64> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let z: Vec<Complex64> = (0..dim)
                .map(|axis| {
                    let j = (flat / m.pow((dim - 1 - axis) as u32)) % m;
                    roots[j] * r
                })
                .collect();
            f(&z)
        })
        .collect::<Result<_>>()?;
    if let Some(k) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::Overflow { point: format!("circle node {k}") });
    }
    // DFT along each axis: c_k = m^{-1} Σ_j F_j ω^{-jk}.
    let mut spectrum = samples;
    let shape = vec![m; dim];
    for axis in 0..dim {
        let kernel: Vec<Complex64> = (0..m)
            .flat_map(|k| (0..m).map(move |j| (k, j)))
            .map(|(k, j)| roots[(j * k) % m].conj() / m as f64)
            .collect();
        spectrum = crate::grid::contract_axis(&spectrum, &shape, axis, &kernel, m);
    }
    // Orders below m/2 in each coordinate are trusted; the top two of them
    // serve as the tail probe.
    let half = m / 2;
    let ln_fact = |k: usize| crate::special::ln_gamma(k as f64 + 1.0);
    let mut table = CoeffTable::new(dim, degree);
    let mut head_max = 0.0f64;
    let mut tail_max = 0.0f64;
    for (flat, value) in spectrum.iter().enumerate().take(total) {
        let idx: Vec<usize> = (0..dim).map(|axis| (flat / m.pow((dim - 1 - axis) as u32)) % m).collect();
        if idx.iter().any(|&k| k >= half) {
            continue;
        }
        let order: usize = idx.iter().sum();
        let scaled = value.norm();
        if idx.iter().any(|&k| k + 2 >= half) {
            tail_max = tail_max.max(scaled);
        }
        if order <= degree as usize {
            head_max = head_max.max(scaled);
            let rk = r.powi(order as i32);
            let sqrt_fact: f64 = idx.iter().map(|&k| 0.5 * ln_fact(k)).sum::<f64>().exp();
            let a = spectrum[flat] / rk * sqrt_fact;
            table.insert(MultiIndex::new(idx.iter().map(|&k| k as u32).collect()), a)?;
        }
    }
    let amax = table.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    table.prune(1e-14 * amax);
    let tail_ratio = if head_max > 0.0 { tail_max / head_max } else { 0.0 };
    let ill_conditioned = tail_ratio > 1e-8 && tail_max > 1e-14;
    if ill_conditioned {
        log::warn!("Taylor tail does not decay on radius {r}: relative tail {tail_ratio:.3e}");
    }
    Ok(TaylorExtraction { coeffs: TaylorCoeffs(table), tail_ratio, ill_conditioned })
}

fn resample(
    src: &PhaseField,
    target: &PhaseGrid,
    convention: Convention,
    map: impl Fn(&[f64], &[f64]) -> (Vec<f64>, Vec<f64>, Complex64) + Sync,
) -> Result<PhaseField> {
    if src.dim() != target.dim() {
        return Err(Error::invalid("source and target phase grids differ in dimension"));
    }
    let values: Vec<Option<Complex64>> = (0..target.len())
        .into_par_iter()
        .map(|k| {
            let (x, xi) = target.node(k);
            let (sx, sxi, factor) = map(&x, &xi);
            src.value_at(&sx, &sxi).map(|v| v * factor)
        })
        .collect();
    let missing: Vec<usize> = values.iter().enumerate().filter(|(_, v)| v.is_none()).map(|(k, _)| k).collect();
    if let Some(&first) = missing.first() {
        let (x, xi) = target.node(first);
        return Err(Error::OutOfDomain { count: missing.len(), first: format!("x={x:?}, xi={xi:?}") });
    }
    let values: Vec<Complex64> = values.into_iter().flatten().collect();
    if let Some(k) = values.iter().position(|v| !v.is_finite()) {
        let (x, xi) = target.node(k);
        return Err(Error::Overflow { point: format!("x={x:?}, xi={xi:?}") });
    }
    PhaseField::new(target.clone(), values, convention)
}

fn scaled(v: &[f64], c: f64) -> Vec<f64> {
    v.iter().map(|t| c * t).collect()
}

/// `(SF)(x, ξ) = F(x/√2, −ξ/√2)` on `target`.
pub fn dilation_s(f: &PhaseField, target: &PhaseGrid) -> Result<PhaseField> {
    let one = Complex64::new(1.0, 0.0);
    resample(f, target, f.convention(), |x, xi| (scaled(x, 1.0 / SQRT_2), scaled(xi, -1.0 / SQRT_2), one))
}

/// `(S^{−1}G)(x, ξ) = G(√2x, −√2ξ)` on `target`.
pub fn dilation_s_inverse(g: &PhaseField, target: &PhaseGrid) -> Result<PhaseField> {
    let one = Complex64::new(1.0, 0.0);
    resample(g, target, g.convention(), |x, xi| (scaled(x, SQRT_2), scaled(xi, -SQRT_2), one))
}

fn quad_phase(x: &[f64], xi: &[f64]) -> (f64, f64) {
    let r2: f64 = x.iter().chain(xi).map(|t| t * t).sum();
    let xxi: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
    (r2, xxi)
}

/// `(U_𝔙F)(x, ξ) = e^{(|x|²+|ξ|²)/2} e^{−i⟨x,ξ⟩} F(√2x, −√2ξ)`, so that
/// `U_𝔙 ∘ V_φ = 𝔙` under the crate's STFT convention. The output is a
/// function of `z = x + iξ`.
pub fn operator_u_v(f: &PhaseField, target: &PhaseGrid) -> Result<PhaseField> {
    resample(f, target, Convention::FockPlane, |x, xi| {
        let (r2, xxi) = quad_phase(x, xi);
        (scaled(x, SQRT_2), scaled(xi, -SQRT_2), Complex64::from_polar((0.5 * r2).exp(), -xxi))
    })
}

/// `(U_𝔙^{−1}G)(x, ξ) = e^{−(|x|²+|ξ|²)/4} e^{−i⟨x,ξ⟩/2} G(x/√2, −ξ/√2)`.
pub fn operator_u_v_inverse(g: &PhaseField, target: &PhaseGrid) -> Result<PhaseField> {
    resample(g, target, Convention::StftPlain, |x, xi| {
        let (r2, xxi) = quad_phase(x, xi);
        (scaled(x, 1.0 / SQRT_2), scaled(xi, -1.0 / SQRT_2), Complex64::from_polar((-0.25 * r2).exp(), -0.5 * xxi))
    })
}

/// Max of `|∂_{x_k}F + i ∂_{ξ_k}F|` over interior nodes, by fourth-order
/// central differences. Vanishes for entire `F` read as a function of
/// `z = x + iξ`.
pub fn cauchy_riemann_residual(f: &PhaseField) -> f64 {
    let pg = f.grid();
    let prod = pg.product();
    let shape = prod.shape();
    let d = pg.dim();
    let strides: Vec<usize> = (0..shape.len()).map(|a| shape[a + 1..].iter().product()).collect();
    let v = f.values();
    (0..prod.len())
        .into_par_iter()
        .map(|flat| {
            let idx = prod.unflatten(flat);
            if idx.iter().zip(&shape).any(|(&i, &n)| i < 2 || i + 2 >= n) {
                return 0.0;
            }
            let diff = |axis: usize| {
                let s = strides[axis];
                let h = prod.axes()[axis].spacing();
                (v[flat - 2 * s] - v[flat - s] * 8.0 + v[flat + s] * 8.0 - v[flat + 2 * s]) / (12.0 * h)
            };
            (0..d)
                .map(|k| (diff(k) + Complex64::i() * diff(d + k)).norm())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}
