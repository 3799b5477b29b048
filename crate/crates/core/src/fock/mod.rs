//! Weighted mixed norms on phase space, modulation and Fock-space norms, the
//! A² form and reproducing kernel, Bargmann–Toeplitz operators, and the
//! numerical checks built from them.

mod cover;

pub use cover::{build_ball_cover, Ball, BallCover, CoverCheck, MAX_OVERLAP};

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bargmann::{dilation_s_inverse, hermitian_dot, FockFunction, TaylorCoeffs};
use crate::error::{Error, Result};
use crate::grid::{PhaseGrid, Signal};
use crate::special::ln_gamma;
use crate::stft::{gaussian_window, moyal_constant, stft, Convention, PhaseField};

/// `σ_s(X) = (1 + |X|²)^{s/2}` on ℝ^{2d}, `X = (x, ξ)`.
pub fn sigma(s: f64, x: &[f64], xi: &[f64]) -> f64 {
    let r2: f64 = x.iter().chain(xi).map(|t| t * t).sum();
    (1.0 + r2).powf(s / 2.0)
}

#[derive(Clone, Debug)]
pub enum WeightKind {
    PolynomialSigma(f64),
    Tabulated(PhaseField),
}

/// A positive weight on phase space with its moderateness witness
/// `v = σ_{moderate_order}`.
#[derive(Clone, Debug)]
pub struct WeightSpec {
    kind: WeightKind,
    moderate_order: f64,
}

impl WeightSpec {
    pub fn unit() -> Self {
        Self::sigma(0.0)
    }

    pub fn sigma(s: f64) -> Self {
        Self { kind: WeightKind::PolynomialSigma(s), moderate_order: s.abs() }
    }

    /// Tabulated weight; off-grid values are interpolated.
    pub fn tabulated(values: PhaseField, moderate_order: f64) -> Result<Self> {
        if let Some(v) = values.values().iter().find(|v| !(v.re > 0.0 && v.re.is_finite() && v.im == 0.0)) {
            return Err(Error::invalid(format!("weights must be real and strictly positive, found {v}")));
        }
        Ok(Self { kind: WeightKind::Tabulated(values), moderate_order })
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn moderate_order(&self) -> f64 {
        self.moderate_order
    }

    /// `1/ω`, moderate with the same witness.
    pub fn reciprocal(&self) -> Self {
        let kind = match &self.kind {
            WeightKind::PolynomialSigma(s) => WeightKind::PolynomialSigma(-s),
            WeightKind::Tabulated(f) => WeightKind::Tabulated(f.map(|_, _, v| Complex64::new(1.0 / v.re, 0.0))),
        };
        Self { kind, moderate_order: self.moderate_order }
    }

    pub fn eval(&self, x: &[f64], xi: &[f64]) -> Result<f64> {
        match &self.kind {
            WeightKind::PolynomialSigma(s) => Ok(sigma(*s, x, xi)),
            WeightKind::Tabulated(f) => f.value_at(x, xi).map(|v| v.re).ok_or_else(|| Error::OutOfDomain {
                count: 1,
                first: format!("x={x:?}, xi={xi:?}"),
            }),
        }
    }

    /// Weight values at every node of `pg`.
    pub fn sample(&self, pg: &PhaseGrid) -> Result<Vec<f64>> {
        if let WeightKind::Tabulated(f) = &self.kind {
            if f.grid() == pg {
                return Ok(f.values().iter().map(|v| v.re).collect());
            }
        }
        (0..pg.len())
            .map(|k| {
                let (x, xi) = pg.node(k);
                self.eval(&x, &xi)
            })
            .collect()
    }

    /// `(S^{−1}ω)(x, ξ) = ω(√2x, −√2ξ)`.
    pub fn eval_dilated(&self, x: &[f64], xi: &[f64]) -> Result<f64> {
        let sx: Vec<f64> = x.iter().map(|t| SQRT_2 * t).collect();
        let sxi: Vec<f64> = xi.iter().map(|t| -SQRT_2 * t).collect();
        self.eval(&sx, &sxi)
    }

    /// `C` in `ω(X + Y) ≤ C ω(X) σ_{|s|}(Y)`; `2^{|s|/2}` for `σ_s`.
    pub fn moderate_constant(&self) -> f64 {
        2f64.powf(self.moderate_order / 2.0)
    }

    /// Largest `ω(X+Y) / (ω(X) σ_{|s|}(Y))` over all node pairs `X`, `Y` of
    /// `pg` with `X + Y` where the weight is defined. Moderateness holds on
    /// the grid when this does not exceed [`Self::moderate_constant`].
    pub fn moderate_ratio(&self, pg: &PhaseGrid) -> Result<f64> {
        let nodes: Vec<Vec<f64>> = (0..pg.len())
            .map(|k| {
                let (mut x, xi) = pg.node(k);
                x.extend(xi);
                x
            })
            .collect();
        let d = pg.dim();
        let w = self.sample(pg)?;
        let worst = nodes
            .par_iter()
            .zip(&w)
            .map(|(xn, &wx)| {
                let mut worst = 0.0f64;
                for yn in &nodes {
                    let sum: Vec<f64> = xn.iter().zip(yn).map(|(a, b)| a + b).collect();
                    let Ok(wxy) = self.eval(&sum[..d], &sum[d..]) else { continue };
                    let v = sigma(self.moderate_order, &yn[..d], &yn[d..]);
                    worst = worst.max(wxy / (wx * v));
                }
                worst
            })
            .reduce(|| 0.0, f64::max);
        Ok(worst)
    }

    /// Short name used in reports.
    pub fn label(&self) -> String {
        match &self.kind {
            WeightKind::PolynomialSigma(s) if *s == 0.0 => "1".to_string(),
            WeightKind::PolynomialSigma(s) => format!("sigma_{s}"),
            WeightKind::Tabulated(_) => "tabulated".to_string(),
        }
    }
}

/// Which variable the inner integral runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NormVariant {
    /// `L^{p,q}`: inner over `x` with exponent `p`, outer over `ξ` with `q`.
    XFirst,
    /// `L^{p,q}_*`: inner over `ξ` with exponent `p`, outer over `x` with `q`.
    XiFirst,
}

/// Exponents in `[1, ∞]` (`f64::INFINITY` for ∞) and the integration order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedNormSpec {
    p: f64,
    q: f64,
    variant: NormVariant,
}

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if v >= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("exponent {name} = {v} outside [1, ∞]")))
    }
}

/// Hölder conjugate exponent.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

impl MixedNormSpec {
    pub fn new(p: f64, q: f64, variant: NormVariant) -> Result<Self> {
        check_exponent("p", p)?;
        check_exponent("q", q)?;
        Ok(Self { p, q, variant })
    }

    pub fn lpq(p: f64, q: f64) -> Result<Self> {
        Self::new(p, q, NormVariant::XFirst)
    }

    pub fn l2() -> Self {
        Self { p: 2.0, q: 2.0, variant: NormVariant::XFirst }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn variant(&self) -> NormVariant {
        self.variant
    }

    pub fn conjugate(&self) -> Self {
        Self { p: conjugate_exponent(self.p), q: conjugate_exponent(self.q), variant: self.variant }
    }
}

impl fmt::Display for MixedNormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = |v: f64| if v.is_infinite() { "inf".to_string() } else { format!("{v}") };
        let star = if self.variant == NormVariant::XiFirst { "*" } else { "" };
        write!(f, "L^{{{},{}}}{star}", e(self.p), e(self.q))
    }
}

/// `(Σ w_k |v_k|^p)^{1/p}`, or `max |v_k|` for `p = ∞`.
fn lp(values: impl Iterator<Item = (f64, f64)>, p: f64) -> f64 {
    if p.is_infinite() {
        values.map(|(_, v)| v.abs()).fold(0.0, f64::max)
    } else if p == 1.0 {
        values.map(|(w, v)| w * v.abs()).sum()
    } else if p == 2.0 {
        values.map(|(w, v)| w * v * v).sum::<f64>().sqrt()
    } else {
        values.map(|(w, v)| w * v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Mixed norm of `|values|` laid out x-major over `pg`.
fn mixed_norm_abs(pg: &PhaseGrid, abs: &[f64], spec: &MixedNormSpec) -> f64 {
    let xw = pg.x_grid().weights();
    let kw = pg.xi_grid().weights();
    let (nx, nk) = (xw.len(), kw.len());
    match spec.variant {
        NormVariant::XFirst => {
            let inner: Vec<f64> = (0..nk).map(|j| lp((0..nx).map(|i| (xw[i], abs[i * nk + j])), spec.p)).collect();
            lp(kw.iter().copied().zip(inner), spec.q)
        }
        NormVariant::XiFirst => {
            let inner: Vec<f64> = (0..nx).map(|i| lp((0..nk).map(|j| (kw[j], abs[i * nk + j])), spec.p)).collect();
            lp(xw.iter().copied().zip(inner), spec.q)
        }
    }
}

/// `‖F·ω‖_{L^{p,q}}` (or the starred variant) by trapezoid sums; ∞
/// exponents use grid maxima.
pub fn mixed_norm(f: &PhaseField, spec: &MixedNormSpec, w: &WeightSpec) -> Result<f64> {
    let wv = w.sample(f.grid())?;
    let abs: Vec<f64> = f.values().iter().zip(&wv).map(|(v, w)| v.norm() * w).collect();
    Ok(mixed_norm_abs(f.grid(), &abs, spec))
}

/// `‖V_φ f · ω‖_{L^{p,q}}` with the canonical window, on the phase grid `pg`.
pub fn modulation_norm(f: &Signal, w: &WeightSpec, spec: &MixedNormSpec, pg: &PhaseGrid) -> Result<f64> {
    let win = gaussian_window(f.dim(), f.grid())?;
    mixed_norm(&stft(f, &win, pg)?, spec, w)
}

/// `S(F e^{−|·|²/2})` on `pg`: the Fock function pulled back to phase space,
/// `G(x, ξ) = F((x − iξ)/√2) e^{−(|x|²+|ξ|²)/4}`.
pub fn fock_pullback(f: &FockFunction, pg: &PhaseGrid) -> Result<PhaseField> {
    let values: Vec<Result<Complex64>> = (0..pg.len())
        .into_par_iter()
        .map(|k| {
            let (x, xi) = pg.node(k);
            let z: Vec<Complex64> = x.iter().zip(&xi).map(|(a, b)| Complex64::new(*a, -b) / SQRT_2).collect();
            let r2: f64 = x.iter().chain(&xi).map(|t| t * t).sum();
            let v = f.eval(&z)? * (-0.25 * r2).exp();
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Overflow { point: format!("x={x:?}, xi={xi:?}") })
            }
        })
        .collect();
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    PhaseField::new(pg.clone(), values, Convention::StftPlain)
}

/// `‖S(F e^{−|·|²/2}) · ω‖_{L^{p,q}}`. Equals [`modulation_norm`] of
/// `𝔙^{−1}F` on the same grid.
pub fn fock_norm(f: &FockFunction, w: &WeightSpec, spec: &MixedNormSpec, pg: &PhaseGrid) -> Result<f64> {
    mixed_norm(&fock_pullback(f, pg)?, spec, w)
}

/// `(F, G)_{A²} = ∫ F conj(G) dμ`, `dμ = π^{−d} e^{−|w|²} dλ`.
///
/// Two coefficient tables pair exactly; otherwise both are sampled on the
/// sampled operand's grid (or `pg` when both are tables and `pg` is given).
pub fn a2_inner(f: &FockFunction, g: &FockFunction, pg: Option<&PhaseGrid>) -> Result<Complex64> {
    if f.dim() != g.dim() {
        return Err(Error::invalid("Fock functions of different dimensions"));
    }
    let grid = match (f, g, pg) {
        (FockFunction::Taylor(a), FockFunction::Taylor(b), None) => return Ok(taylor_pairing(a, b)),
        (_, _, Some(pg)) => pg.clone(),
        (FockFunction::Sampled(s), FockFunction::Sampled(t), None) if s.grid() != t.grid() => {
            return Err(Error::invalid("sampled Fock functions on different grids"));
        }
        (FockFunction::Sampled(s), _, None) | (_, FockFunction::Sampled(s), None) => s.grid().clone(),
    };
    let fs = f.sample(&grid)?;
    let gs = g.sample(&grid)?;
    let norm = PI.powi(-(grid.dim() as i32));
    Ok(grid
        .weights()
        .iter()
        .enumerate()
        .map(|(k, &w)| {
            let r2: f64 = grid.complex_node(k).iter().map(|c| c.norm_sqr()).sum();
            fs.values()[k] * gs.values()[k].conj() * (w * norm * (-r2).exp())
        })
        .sum())
}

fn taylor_pairing(a: &TaylorCoeffs, b: &TaylorCoeffs) -> Complex64 {
    a.iter().map(|(alpha, v)| v * b.get(alpha).conj()).sum()
}

/// `(Π_A F)(z) = ∫ e^{(z,w)} F(w) dμ(w)` at each point, by quadrature over
/// the grid of the sampled `F`.
pub fn reproducing_apply(f: &PhaseField, points: &[Vec<Complex64>]) -> Result<Vec<Complex64>> {
    let pg = f.grid();
    let d = pg.dim();
    let norm = PI.powi(-(d as i32));
    let nodes: Vec<Vec<Complex64>> = (0..pg.len()).map(|k| pg.complex_node(k)).collect();
    let weighted: Vec<Complex64> = nodes
        .iter()
        .zip(pg.weights())
        .zip(f.values())
        .map(|((w, q), v)| {
            let r2: f64 = w.iter().map(|c| c.norm_sqr()).sum();
            v * (q * norm * (-r2).exp())
        })
        .collect();
    points
        .par_iter()
        .map(|z| {
            if z.len() != d {
                return Err(Error::invalid("point dimension differs from the field"));
            }
            let s: Complex64 = nodes.iter().zip(&weighted).map(|(w, &fv)| hermitian_dot(z, w).exp() * fv).sum();
            if s.is_finite() {
                Ok(s)
            } else {
                Err(Error::Overflow { point: format!("{z:?}") })
            }
        })
        .collect()
}

/// [`reproducing_apply`] at every node of `target`.
pub fn reproducing_apply_grid(f: &PhaseField, target: &PhaseGrid) -> Result<PhaseField> {
    let points: Vec<Vec<Complex64>> = (0..target.len()).map(|k| target.complex_node(k)).collect();
    PhaseField::new(target.clone(), reproducing_apply(f, &points)?, Convention::FockPlane)
}

/// `T_𝔙(a)F = Π_A((S^{−1}a)·F)` at `points`. `F` is sampled on `quad`, which
/// also carries the Π_A quadrature; `a` must cover the √2-inflated `quad`.
pub fn bargmann_toeplitz(a: &PhaseField, f: &FockFunction, quad: &PhaseGrid, points: &[Vec<Complex64>]) -> Result<Vec<Complex64>> {
    let b = dilation_s_inverse(a, quad)?;
    let fs = f.sample(quad)?;
    reproducing_apply(&fs.mul(&b)?.with_convention(Convention::FockPlane), points)
}

/// [`bargmann_toeplitz`] at every node of `target`.
pub fn bargmann_toeplitz_field(a: &PhaseField, f: &FockFunction, quad: &PhaseGrid, target: &PhaseGrid) -> Result<PhaseField> {
    let points: Vec<Vec<Complex64>> = (0..target.len()).map(|k| target.complex_node(k)).collect();
    PhaseField::new(target.clone(), bargmann_toeplitz(a, f, quad, &points)?, Convention::FockPlane)
}

/// Both sides of the weighted-ℓ² equivalence for a polynomial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEquivalence {
    /// `‖F‖` with weight `σ_{2N}` and `p = q = 2`, divided by the Moyal
    /// constant `(2π)^{d/2}` so that `N = 0` is Parseval.
    pub lhs: f64,
    /// `‖(a_α ⟨α⟩^N)_α‖_{ℓ²}`.
    pub rhs: f64,
    pub ratio: f64,
}

/// Compares the weighted Fock norm of `F = Σ a_α z^α/√(α!)` with the
/// weighted ℓ² norm of its coefficients.
pub fn norm_equivalence_report(coeffs: &TaylorCoeffs, n: i32, pg: &PhaseGrid) -> Result<NormEquivalence> {
    if coeffs.degree() > 12 {
        return Err(Error::Precondition(format!("degree {} exceeds 12", coeffs.degree())));
    }
    let f = FockFunction::Taylor(coeffs.clone());
    let lhs = fock_norm(&f, &WeightSpec::sigma(2.0 * f64::from(n)), &MixedNormSpec::l2(), pg)? / moyal_constant(coeffs.dim());
    let rhs = coeffs
        .iter()
        .map(|(alpha, a)| a.norm_sqr() * alpha.bracket().powi(2 * n))
        .sum::<f64>()
        .sqrt();
    Ok(NormEquivalence { lhs, rhs, ratio: lhs / rhs })
}

/// Quantities of the Hölder step between weighted Lebesgue norms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderCheck {
    /// `‖F e^{−|·|²/2} ⟨·⟩^{−N−d−1}‖_{L^{p1}}`
    pub lhs: f64,
    /// `‖F e^{−|·|²/2} ⟨·⟩^{−N}‖_{L^{p2}}`
    pub rhs: f64,
    /// `‖⟨·⟩^{−d−1}‖_{L^r}` on the same grid, `1/r = 1/p1 − 1/p2`.
    pub constant: f64,
    /// The same constant over all of ℝ^{2d}; infinite when the integral
    /// diverges.
    pub constant_exact: f64,
}

impl HolderCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.constant * self.rhs * (1.0 + 1e-12) + 1e-300
    }
}

/// `‖⟨·⟩^{−d−1}‖_{L^r(ℝ^{2d})} = (π^d Γ(a−d)/Γ(a))^{1/r}`, `a = r(d+1)/2`.
pub fn holder_constant_exact(d: usize, r: f64) -> f64 {
    if r.is_infinite() {
        return 1.0;
    }
    let df = d as f64;
    let a = r * (df + 1.0) / 2.0;
    if a <= df {
        return f64::INFINITY;
    }
    (df * PI.ln() + ln_gamma(a - df) - ln_gamma(a)).exp().powf(1.0 / r)
}

/// Both sides of `‖F e^{−|·|²/2}⟨·⟩^{−N−d−1}‖_{p1} ≤ C ‖F e^{−|·|²/2}⟨·⟩^{−N}‖_{p2}`
/// by quadrature on `pg`, read as `z = x + iξ`.
pub fn holder_embedding_check(f: &FockFunction, n: f64, p1: f64, p2: f64, pg: &PhaseGrid) -> Result<HolderCheck> {
    check_exponent("p1", p1)?;
    check_exponent("p2", p2)?;
    if p1 > p2 {
        return Err(Error::invalid(format!("need p1 ≤ p2, got p1 = {p1}, p2 = {p2}")));
    }
    let d = pg.dim();
    let r = if p1 == p2 { f64::INFINITY } else { 1.0 / (1.0 / p1 - 1.0 / p2) };
    let fs = f.sample(pg)?;
    let mut lhs_v = Vec::with_capacity(pg.len());
    let mut rhs_v = Vec::with_capacity(pg.len());
    let mut c_v = Vec::with_capacity(pg.len());
    for (k, v) in fs.values().iter().enumerate() {
        let r2: f64 = pg.complex_node(k).iter().map(|c| c.norm_sqr()).sum();
        let bracket = (1.0 + r2).sqrt();
        let damped = v.norm() * (-0.5 * r2).exp();
        lhs_v.push(damped * bracket.powf(-n - d as f64 - 1.0));
        rhs_v.push(damped * bracket.powf(-n));
        c_v.push(bracket.powf(-(d as f64) - 1.0));
    }
    let w = pg.weights();
    let norm = |v: &[f64], p: f64| lp(w.iter().copied().zip(v.iter().copied()), p);
    Ok(HolderCheck {
        lhs: norm(&lhs_v, p1),
        rhs: norm(&rhs_v, p2),
        constant: norm(&c_v, r),
        constant_exact: holder_constant_exact(d, r),
    })
}

/// `κ(d) = (2π)^{−d}`: the constant in `|(F,G)_{A²}| ≤ κ ‖F‖ ‖G‖` for the
/// Fock norms used here, which carry the Moyal factor twice.
pub fn duality_constant(d: usize) -> f64 {
    (2.0 * PI).powi(-(d as i32))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualityCheck {
    pub pairing: Complex64,
    /// `κ ‖F‖_{(ω), p, q} ‖G‖_{(1/ω), p′, q′}`
    pub bound: f64,
    pub kappa: f64,
}

impl DualityCheck {
    pub fn holds(&self) -> bool {
        self.pairing.norm() <= self.bound * (1.0 + 1e-6) + 1e-12
    }
}

/// The A² pairing against the product of dual weighted Fock norms.
pub fn duality_bound_check(f: &FockFunction, g: &FockFunction, w: &WeightSpec, spec: &MixedNormSpec, pg: &PhaseGrid) -> Result<DualityCheck> {
    let pairing = a2_inner(f, g, Some(pg))?;
    let nf = fock_norm(f, w, spec, pg)?;
    let ng = fock_norm(g, &w.reciprocal(), &spec.conjugate(), pg)?;
    let kappa = duality_constant(pg.dim());
    Ok(DualityCheck { pairing, bound: kappa * nf * ng, kappa })
}

/// `H(ξ) = (∫ |F(z) e^{−|z|²/2} (S^{−1}ω)(z)|^p dx)^{1/p}`, `z = x + iξ`, one
/// value per `ξ` node of `pg` (row-major over the ξ axes).
pub fn narrow_profile(f: &FockFunction, w: &WeightSpec, p: f64, pg: &PhaseGrid) -> Result<Vec<f64>> {
    check_exponent("p", p)?;
    let fs = f.sample(pg)?;
    let mut abs = Vec::with_capacity(pg.len());
    for (k, v) in fs.values().iter().enumerate() {
        let (x, xi) = pg.node(k);
        let r2: f64 = x.iter().chain(&xi).map(|t| t * t).sum();
        abs.push(v.norm() * (-0.5 * r2).exp() * w.eval_dilated(&x, &xi)?);
    }
    let xw = pg.x_grid().weights();
    let nk = pg.xi_grid().len();
    Ok((0..nk).map(|j| lp((0..xw.len()).map(|i| (xw[i], abs[i * nk + j])), p)).collect())
}

/// Distances of a sequence from its claimed narrow limit.
#[derive(Clone, Debug, PartialEq)]
pub struct NarrowReport {
    /// `‖H_j − H‖_{L^q}` over ξ.
    pub profile_distance: Vec<f64>,
    /// `max |F_j − F| e^{−|z|²/2}` over the grid.
    pub pointwise: Vec<f64>,
}

impl NarrowReport {
    /// Whether the profile distances decrease from index `from` on.
    pub fn monotone_from(&self, from: usize) -> bool {
        self.profile_distance[from.min(self.profile_distance.len())..].windows(2).all(|w| w[1] <= w[0])
    }
}

pub fn narrow_convergence_check(
    seq: &[FockFunction],
    limit: &FockFunction,
    w: &WeightSpec,
    p: f64,
    q: f64,
    pg: &PhaseGrid,
) -> Result<NarrowReport> {
    check_exponent("q", q)?;
    let h = narrow_profile(limit, w, p, pg)?;
    let kw = pg.xi_grid().weights();
    let lim = limit.sample(pg)?;
    let mut report = NarrowReport { profile_distance: Vec::new(), pointwise: Vec::new() };
    for fj in seq {
        let hj = narrow_profile(fj, w, p, pg)?;
        report
            .profile_distance
            .push(lp(kw.iter().copied().zip(hj.iter().zip(&h).map(|(a, b)| a - b)), q));
        let sj = fj.sample(pg)?;
        let worst = (0..pg.len())
            .map(|k| {
                let r2: f64 = pg.complex_node(k).iter().map(|c| c.norm_sqr()).sum();
                (sj.values()[k] - lim.values()[k]).norm() * (-0.5 * r2).exp()
            })
            .fold(0.0, f64::max);
        report.pointwise.push(worst);
    }
    Ok(report)
}

/// `fock_norm(F; σ_{s−1}, p2, q2) / fock_norm(F; σ_s, p1, q1)`.
pub fn embedding_ratio(f: &FockFunction, s: f64, from: &MixedNormSpec, to: &MixedNormSpec, pg: &PhaseGrid) -> Result<f64> {
    if from.p() > to.p() || from.q() > to.q() {
        return Err(Error::invalid("embedding needs p1 ≤ p2 and q1 ≤ q2"));
    }
    let big = fock_norm(f, &WeightSpec::sigma(s - 1.0), to, pg)?;
    let small = fock_norm(f, &WeightSpec::sigma(s), from, pg)?;
    Ok(big / small)
}
