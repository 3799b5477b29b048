//! Hermite functions, Hermite expansions and the shifted harmonic oscillator
//! `H = |x|² − Δ + 4d + 1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::Deref;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{contract_axis, ProductGrid, Signal};

const PI_M4: f64 = 0.751_125_544_464_942_5; // π^{-1/4}

/// Largest supported degree per coordinate.
pub const MAX_DEGREE: u32 = 512;

/// Multi-index α ∈ ℕᵈ. Ordered graded-lexicographically: by `|α|`, then by entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α| = Σ α_j`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `α! = Π α_j!` as a float.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&k| (1..=k).map(f64::from).product::<f64>()).product()
    }

    /// `⟨α⟩ = (1 + |α|²)^{1/2}` with the Euclidean length of the entry vector.
    pub fn bracket(&self) -> f64 {
        (1.0 + self.0.iter().map(|&k| f64::from(k) * f64::from(k)).sum::<f64>()).sqrt()
    }

    /// All multi-indices of dimension `dim` with `|α| ≤ max_order`, in graded-lex order.
    pub fn all_up_to(dim: usize, max_order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for order in 0..=max_order {
            match dim {
                1 => out.push(MultiIndex(vec![order])),
                2 => out.extend((0..=order).map(|a| MultiIndex(vec![a, order - a]))),
                _ => unreachable!("dimension checked by callers"),
            }
        }
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// Degree-bounded map from multi-indices to complex coefficients. Shared by
/// Hermite expansions and Fock-space Taylor coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffTable {
    dim: usize,
    max_degree: u32,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl CoeffTable {
    pub fn new(dim: usize, max_degree: u32) -> Self {
        Self { dim, max_degree, coeffs: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn insert(&mut self, alpha: impl Into<MultiIndex>, value: Complex64) -> Result<()> {
        let alpha = alpha.into();
        if alpha.dim() != self.dim {
            return Err(Error::invalid(format!(
                "multi-index of dimension {} in a table of dimension {}",
                alpha.dim(),
                self.dim
            )));
        }
        if alpha.order() > self.max_degree {
            return Err(Error::invalid(format!(
                "multi-index order {} exceeds max degree {}",
                alpha.order(),
                self.max_degree
            )));
        }
        self.coeffs.insert(alpha, value);
        Ok(())
    }

    pub fn get(&self, alpha: &MultiIndex) -> Complex64 {
        self.coeffs.get(alpha).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest `|α|` actually present.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn map_values(&self, f: impl Fn(&MultiIndex, Complex64) -> Complex64) -> Self {
        Self {
            dim: self.dim,
            max_degree: self.max_degree,
            coeffs: self.coeffs.iter().map(|(k, &v)| (k.clone(), f(k, v))).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_values(|_, v| v * c)
    }

    /// Drops entries with `|a| ≤ tol`.
    pub fn prune(&mut self, tol: f64) {
        self.coeffs.retain(|_, v| v.norm() > tol);
    }

    /// Dense random table with uniform real and imaginary parts in `[-1, 1)`.
    pub fn random<R: Rng>(rng: &mut R, dim: usize, degree: u32) -> Self {
        let mut t = Self::new(dim, degree);
        for alpha in MultiIndex::all_up_to(dim, degree) {
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            t.coeffs.insert(alpha, v);
        }
        t
    }
}

/// `f = Σ a_α h_α`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteExpansion(CoeffTable);

impl HermiteExpansion {
    pub fn new(dim: usize, max_degree: u32) -> Self {
        Self(CoeffTable::new(dim, max_degree))
    }

    /// The single basis function `h_α`.
    pub fn basis(alpha: impl Into<MultiIndex>) -> Self {
        let alpha = alpha.into();
        let mut t = CoeffTable::new(alpha.dim(), alpha.order());
        t.coeffs.insert(alpha, Complex64::new(1.0, 0.0));
        Self(t)
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
}

impl Deref for HermiteExpansion {
    type Target = CoeffTable;
    fn deref(&self) -> &CoeffTable {
        &self.0
    }
}

impl From<CoeffTable> for HermiteExpansion {
    fn from(t: CoeffTable) -> Self {
        Self(t)
    }
}

/// `[h_0(x), …, h_n(x)]` for d = 1 by the three-term recurrence.
///
/// The recurrence runs on `e^{x²/2} h_k` with a running power-of-ten rescaling, so
/// high degrees far out in the tail come back as 0 instead of NaN.
pub fn hermite_table(n: u32, x: f64) -> Vec<f64> {
    let n = n as usize;
    let mut out = vec![0.0; n + 1];
    let mut log_scale = 0.0_f64;
    let mut prev = 0.0_f64;
    let mut cur = PI_M4;
    let gauss = -0.5 * x * x;
    out[0] = cur * (gauss).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e150 {
            prev *= 1e-150;
            cur *= 1e-150;
            log_scale += 150.0 * std::f64::consts::LN_10;
        }
        out[k + 1] = cur * (gauss + log_scale).exp();
    }
    out
}

/// L²-normalized Hermite function `h_α(x)` (tensor product over coordinates).
pub fn hermite_eval(alpha: &MultiIndex, x: &[f64]) -> Result<f64> {
    if alpha.dim() != x.len() {
        return Err(Error::invalid(format!(
            "multi-index has dimension {}, point has {}",
            alpha.dim(),
            x.len()
        )));
    }
    if alpha.entries().iter().any(|&k| k > MAX_DEGREE) {
        return Err(Error::invalid(format!("degree per coordinate is limited to {MAX_DEGREE}")));
    }
    Ok(alpha
        .entries()
        .iter()
        .zip(x)
        .map(|(&k, &xi)| hermite_table(k, xi)[k as usize])
        .product())
}

/// `a_α = (f, h_α)_{L²}` by trapezoid quadrature, for all `|α| ≤ max_degree`.
pub fn hermite_expand(f: &Signal, max_degree: u32) -> Result<HermiteExpansion> {
    if max_degree > MAX_DEGREE {
        return Err(Error::invalid(format!("degree is limited to {MAX_DEGREE}")));
    }
    let need = (2.0 * f64::from(max_degree)).sqrt() + 4.0;
    for ax in f.grid().axes() {
        if ax.half_width() < need {
            return Err(Error::Precondition(format!(
                "half width {} is too narrow for degree {max_degree}: need at least {need:.3}",
                ax.half_width()
            )));
        }
    }
    let m = max_degree as usize + 1;
    let mut shape = f.grid().shape();
    let mut values = f.values().to_vec();
    for (axis, ax) in f.grid().axes().iter().enumerate() {
        let ws = ax.weights();
        let mut kernel = vec![Complex64::new(0.0, 0.0); m * ax.len()];
        for (j, x) in ax.nodes().into_iter().enumerate() {
            for (k, h) in hermite_table(max_degree, x).into_iter().enumerate() {
                kernel[k * ax.len() + j] = Complex64::new(h * ws[j], 0.0);
            }
        }
        values = contract_axis(&values, &shape, axis, &kernel, m);
        shape[axis] = m;
    }
    let dim = f.dim();
    let mut out = HermiteExpansion::new(dim, max_degree);
    for alpha in MultiIndex::all_up_to(dim, max_degree) {
        let flat = alpha.entries().iter().fold(0usize, |acc, &k| acc * m + k as usize);
        out.0.coeffs.insert(alpha, values[flat]);
    }
    Ok(out)
}

/// Pointwise `Σ a_α h_α(x)` on the grid.
pub fn hermite_synthesize(e: &HermiteExpansion, grid: &ProductGrid) -> Result<Signal> {
    if e.dim() != grid.rank() {
        return Err(Error::invalid(format!(
            "expansion of dimension {} on a grid of dimension {}",
            e.dim(),
            grid.rank()
        )));
    }
    let deg = e.degree();
    let tables: Vec<Vec<Vec<f64>>> = grid
        .axes()
        .iter()
        .map(|ax| ax.nodes().into_iter().map(|x| hermite_table(deg, x)).collect())
        .collect();
    let values = (0..grid.len())
        .map(|flat| {
            let idx = grid.unflatten(flat);
            e.iter()
                .map(|(alpha, a)| {
                    let h: f64 = alpha
                        .entries()
                        .iter()
                        .enumerate()
                        .map(|(j, &k)| tables[j][idx[j]][k as usize])
                        .product();
                    a * h
                })
                .sum()
        })
        .collect();
    Signal::new(grid.clone(), values)
}

/// Eigenvalue of `H = |x|² − Δ + 4d + 1` on `h_α`: `2|α| + 5d + 1`.
///
/// `(|x|² − Δ) h_α = (2|α| + d) h_α`, so the shift by `4d + 1` lands here.
/// At d = 1 this is `2(|α| + 3)`.
pub fn oscillator_eigenvalue(alpha: &MultiIndex, d: usize) -> f64 {
    2.0 * f64::from(alpha.order()) + 5.0 * d as f64 + 1.0
}

/// `H^N`, diagonal on the Hermite basis; negative `N` allowed.
pub fn apply_h_power(e: &HermiteExpansion, n: i32) -> HermiteExpansion {
    let d = e.dim();
    HermiteExpansion(e.map_values(|alpha, a| a * oscillator_eigenvalue(alpha, d).powi(n)))
}

/// `‖H^N f‖_{L²} = (Σ λ_α^{2N} |a_α|²)^{1/2}`.
pub fn m2_2n_norm(e: &HermiteExpansion, n: i32) -> f64 {
    let d = e.dim();
    e.iter()
        .map(|(alpha, a)| oscillator_eigenvalue(alpha, d).powi(2 * n) * a.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Accuracy order of the central-difference Laplacian.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StencilOrder {
    Second,
    Fourth,
    Sixth,
    Eighth,
}

impl StencilOrder {
    fn coefficients(self) -> &'static [f64] {
        // Second-derivative weights for offsets 0, ±1, ±2, …
        match self {
            StencilOrder::Second => &[-2.0, 1.0],
            StencilOrder::Fourth => &[-5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0],
            StencilOrder::Sixth => &[-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0],
            StencilOrder::Eighth => &[-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0],
        }
    }
}

/// Grid discretization of `H f = (|x|² − Δ + 4d + 1) f` with central
/// differences; samples outside the grid are taken as zero.
pub fn apply_oscillator_on_grid(f: &Signal, order: StencilOrder) -> Signal {
    let grid = f.grid();
    let shape = grid.shape();
    let d = grid.rank();
    let c = order.coefficients();
    let shift = 4.0 * d as f64 + 1.0;
    let mut out = f.clone();
    for (flat, v) in out.values_mut().iter_mut().enumerate() {
        let idx = grid.unflatten(flat);
        let x = grid.point(flat);
        let r2: f64 = x.iter().map(|t| t * t).sum();
        let mut lap = Complex64::new(0.0, 0.0);
        for (axis, ax) in grid.axes().iter().enumerate() {
            let h2 = ax.spacing() * ax.spacing();
            let mut acc = f.values()[flat] * c[0];
            for (off, &w) in c.iter().enumerate().skip(1) {
                for sgn in [-1isize, 1] {
                    let j = idx[axis] as isize + sgn * off as isize;
                    if j < 0 || j >= shape[axis] as isize {
                        continue;
                    }
                    let mut nb = idx.clone();
                    nb[axis] = j as usize;
                    acc += f.values()[grid.flatten(&nb)] * w;
                }
            }
            lap += acc / h2;
        }
        *v = f.values()[flat] * (r2 + shift) - lap;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::AxisGrid;
    use rand::SeedableRng;
    use std::f64::consts::PI;

    /// Independent oracle: h_n from the Rodrigues formula. The n-th derivative
    /// of e^{−x²} is P_n(x) e^{−x²} with P_{n+1} = P_n' − 2x P_n.
    fn rodrigues(n: u32, x: f64) -> f64 {
        let mut p = vec![1.0_f64]; // coefficients in ascending powers
        for _ in 0..n {
            let mut next = vec![0.0; p.len() + 1];
            for (k, &c) in p.iter().enumerate() {
                if k > 0 {
                    next[k - 1] += c * k as f64;
                }
                next[k + 1] -= 2.0 * c;
            }
            p = next;
        }
        let poly: f64 = p.iter().enumerate().map(|(k, c)| c * x.powi(k as i32)).sum();
        let fact: f64 = (1..=n).map(f64::from).product();
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        PI.powf(-0.25) * sign / (2f64.powi(n as i32) * fact).sqrt() * (x * x / 2.0).exp() * poly * (-x * x).exp()
    }

    fn axis(l: f64, n: usize) -> ProductGrid {
        ProductGrid::new(vec![AxisGrid::new(l, n).unwrap()]).unwrap()
    }

    #[test]
    fn values_at_origin() {
        let h0 = hermite_eval(&MultiIndex::new(vec![0]), &[0.0]).unwrap();
        assert!((h0 - PI.powf(-0.25)).abs() < 1e-15);
        assert!((h0 - 0.751126).abs() < 1e-6);
        assert_eq!(hermite_eval(&MultiIndex::new(vec![1]), &[0.0]).unwrap(), 0.0);
    }

    #[test]
    fn recurrence_matches_rodrigues() {
        let v = hermite_eval(&MultiIndex::new(vec![3]), &[0.7]).unwrap();
        assert!((v - rodrigues(3, 0.7)).abs() < 1e-10);
        for n in 0..=5 {
            for &x in &[-2.3, -0.4, 0.0, 0.9, 1.7, 3.1] {
                let v = hermite_eval(&MultiIndex::new(vec![n]), &[x]).unwrap();
                assert!((v - rodrigues(n, x)).abs() < 1e-12, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn tensor_product_in_two_dimensions() {
        let v = hermite_eval(&MultiIndex::new(vec![2, 3]), &[0.3, -1.1]).unwrap();
        assert!((v - rodrigues(2, 0.3) * rodrigues(3, -1.1)).abs() < 1e-12);
    }

    #[test]
    fn far_tail_underflows_to_zero() {
        let t = hermite_table(512, 60.0);
        assert!(t.iter().all(|v| v.is_finite()));
        assert_eq!(t[0], 0.0);
        let t = hermite_table(512, 35.0);
        assert!(t.iter().all(|v| v.is_finite()));
        assert!(t[512].abs() > 0.0);
    }

    #[test]
    fn orthonormality() {
        let g = axis(10.0, 401);
        let tables: Vec<Signal> = (0..=10)
            .map(|k| hermite_synthesize(&HermiteExpansion::basis(vec![k]), &g).unwrap())
            .collect();
        for (a, fa) in tables.iter().enumerate() {
            for (b, fb) in tables.iter().enumerate() {
                let ip = fa.inner(fb).unwrap();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((ip - expect).norm() < 1e-8, "({a},{b}) -> {ip}");
            }
        }
    }

    #[test]
    fn expand_basis_and_mixtures() {
        let g = axis(10.0, 321);
        let e = hermite_expand(&hermite_synthesize(&HermiteExpansion::basis(vec![2]), &g).unwrap(), 6).unwrap();
        for (alpha, v) in e.iter() {
            let expect = if alpha.entries() == [2] { 1.0 } else { 0.0 };
            assert!((v - expect).norm() < 1e-8);
        }
        let phi = Signal::from_fn(g.clone(), |x| Complex64::new(PI.powf(-0.25) * (-x[0] * x[0] / 2.0).exp(), 0.0)).unwrap();
        let e = hermite_expand(&phi, 6).unwrap();
        assert!((e.get(&MultiIndex::new(vec![0])) - 1.0).norm() < 1e-10);
        let s = 0.5f64.sqrt();
        let mut t = CoeffTable::new(1, 1);
        t.insert(vec![0], Complex64::new(s, 0.0)).unwrap();
        t.insert(vec![1], Complex64::new(s, 0.0)).unwrap();
        let e = hermite_expand(&hermite_synthesize(&t.into(), &g).unwrap(), 4).unwrap();
        assert!((e.get(&MultiIndex::new(vec![0])) - s).norm() < 1e-8);
        assert!((e.get(&MultiIndex::new(vec![1])) - s).norm() < 1e-8);
        assert!(e.get(&MultiIndex::new(vec![3])).norm() < 1e-8);
    }

    #[test]
    fn expand_requires_wide_grid() {
        let g = axis(4.0, 65);
        let f = Signal::zeros(g).unwrap();
        assert!(matches!(hermite_expand(&f, 8), Err(Error::Precondition(_))));
    }

    #[test]
    fn synthesize_round_trip() {
        let g = axis(10.0, 321);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..4 {
            let e: HermiteExpansion = CoeffTable::random(&mut rng, 1, 10).into();
            let back = hermite_expand(&hermite_synthesize(&e, &g).unwrap(), 10).unwrap();
            for (alpha, v) in e.iter() {
                assert!((back.get(alpha) - v).norm() < 1e-8);
            }
        }
        let empty = hermite_synthesize(&HermiteExpansion::new(1, 3), &g).unwrap();
        assert!(empty.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn round_trip_two_dimensions() {
        let ax = AxisGrid::new(9.0, 145).unwrap();
        let g = ProductGrid::new(vec![ax, ax]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let e: HermiteExpansion = CoeffTable::random(&mut rng, 2, 6).into();
        let back = hermite_expand(&hermite_synthesize(&e, &g).unwrap(), 6).unwrap();
        for (alpha, v) in e.iter() {
            assert!((back.get(alpha) - v).norm() < 1e-8);
        }
    }

    #[test]
    fn graded_lex_order() {
        let all = MultiIndex::all_up_to(2, 2);
        let entries: Vec<Vec<u32>> = all.iter().map(|a| a.entries().to_vec()).collect();
        assert_eq!(entries, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn eigenvalues() {
        assert_eq!(oscillator_eigenvalue(&MultiIndex::new(vec![0]), 1), 6.0);
        assert_eq!(oscillator_eigenvalue(&MultiIndex::new(vec![2]), 1), 10.0);
        assert_eq!(oscillator_eigenvalue(&MultiIndex::new(vec![1, 1]), 2), 15.0);
    }

    fn rayleigh(alpha: Vec<u32>, grid: &ProductGrid) -> f64 {
        let f = hermite_synthesize(&HermiteExpansion::basis(alpha), grid).unwrap();
        let hf = apply_oscillator_on_grid(&f, StencilOrder::Eighth);
        (hf.inner(&f).unwrap() / f.inner(&f).unwrap()).re
    }

    #[test]
    fn eigenvalues_against_grid_laplacian() {
        let g = axis(10.0, 1025);
        assert!((rayleigh(vec![2], &g) - 10.0).abs() < 1e-6);
        let ax = AxisGrid::new(9.0, 181).unwrap();
        let g2 = ProductGrid::new(vec![ax, ax]).unwrap();
        assert!((rayleigh(vec![1, 1], &g2) - 15.0).abs() < 1e-6);
    }

    #[test]
    fn h_powers() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let e: HermiteExpansion = CoeffTable::random(&mut rng, 1, 8).into();
        assert_eq!(apply_h_power(&e, 0), e);
        let back = apply_h_power(&apply_h_power(&e, 1), -1);
        for (alpha, v) in e.iter() {
            assert!((back.get(alpha) - v).norm() < 1e-12);
        }
        let h0 = HermiteExpansion::basis(vec![0]);
        assert_eq!(apply_h_power(&h0, 2).get(&MultiIndex::new(vec![0])), Complex64::new(36.0, 0.0));
    }

    #[test]
    fn h_squared_on_phi_matches_grid_oracle() {
        let g = axis(10.0, 1025);
        let phi = hermite_synthesize(&HermiteExpansion::basis(vec![0]), &g).unwrap();
        let hh = apply_oscillator_on_grid(&apply_oscillator_on_grid(&phi, StencilOrder::Eighth), StencilOrder::Eighth);
        let c = hh.inner(&phi).unwrap().re;
        assert!((c - 36.0).abs() < 1e-4, "{c}");
    }

    #[test]
    fn m2_norms() {
        let h0 = HermiteExpansion::basis(vec![0]);
        assert_eq!(m2_2n_norm(&h0, 0), 1.0);
        assert_eq!(m2_2n_norm(&h0, 1), 6.0);
        let mut t = CoeffTable::new(1, 1);
        t.insert(vec![0], Complex64::new(1.0, 0.0)).unwrap();
        t.insert(vec![1], Complex64::new(1.0, 0.0)).unwrap();
        assert!((m2_2n_norm(&t.into(), 0) - 2f64.sqrt()).abs() < 1e-15);

        let g = axis(10.0, 1025);
        let phi = hermite_synthesize(&h0, &g).unwrap();
        let n1 = apply_oscillator_on_grid(&phi, StencilOrder::Eighth).l2_norm();
        assert!((n1 - 6.0).abs() < 1e-6);
    }

    #[test]
    fn table_rejects_out_of_bounds_keys() {
        let mut t = CoeffTable::new(1, 3);
        assert!(t.insert(vec![4], Complex64::new(1.0, 0.0)).is_err());
        assert!(t.insert(vec![1, 1], Complex64::new(1.0, 0.0)).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn h_power_inverse_is_exact(seed in 0u64..1000, n in -3i32..4) {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let e: HermiteExpansion = CoeffTable::random(&mut rng, 1, 6).into();
                let back = apply_h_power(&apply_h_power(&e, n), -n);
                for (alpha, v) in e.iter() {
                    prop_assert!((back.get(alpha) - v).norm() <= 1e-12 * v.norm().max(1.0));
                }
            }

            #[test]
            fn m2_norm_is_monotone(seed in 0u64..1000, n in -2i32..3, k in 0u32..8, re in -2.0f64..2.0) {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let mut t = CoeffTable::random(&mut rng, 1, 7);
                let before = m2_2n_norm(&t.clone().into(), n);
                let alpha = MultiIndex::new(vec![k]);
                let old = t.get(&alpha);
                t.insert(alpha.clone(), old).unwrap();
                t.coeffs.retain(|a, _| a != &alpha);
                let without = m2_2n_norm(&t.clone().into(), n);
                t.insert(alpha, Complex64::new(re, 0.0)).unwrap();
                let with = m2_2n_norm(&t.into(), n);
                prop_assert!(with >= without);
                prop_assert!(before >= without);
            }
        }
    }
}
