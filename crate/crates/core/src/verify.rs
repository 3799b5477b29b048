//! Verification suites: each runs a family of numerical checks and returns a
//! report with measured values next to their tolerances.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bargmann::{bargmann_coefficients, bargmann_direct, bargmann_sampled, bargmann_via_stft, inverse_bargmann, FockFunction, TaylorCoeffs};
use crate::error::{Error, Result};
use crate::fock::{
    a2_inner, bargmann_toeplitz, build_ball_cover, duality_bound_check, embedding_ratio, fock_norm, holder_embedding_check,
    modulation_norm, narrow_convergence_check, narrow_profile, norm_equivalence_report, reproducing_apply, reproducing_apply_grid,
    sigma, MixedNormSpec, WeightSpec,
};
use crate::grid::{AxisGrid, PhaseGrid, ProductGrid, Signal};
use crate::hermite::{apply_oscillator_on_grid, hermite_synthesize, oscillator_eigenvalue, CoeffTable, HermiteExpansion, MultiIndex, StencilOrder};
use crate::stft::{gaussian_window, moyal_constant, stft, toeplitz, twisted_convolution, PhaseField};

pub const SCHEMA: u32 = 1;

pub const SUITES: &[&str] = &[
    "isometry",
    "hermite-map",
    "reproducing",
    "windowtransf",
    "toeplitz-intertwine",
    "norm-equivalence",
    "covering",
    "narrow",
    "embeddings",
    "oscillator",
];

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Outer radius for the covering suite.
    pub r_max: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 7, r_max: 8.0 }
    }
}

/// One check: passes when `measured ≤ tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self { name: name.into(), passed: measured <= tolerance, measured, tolerance }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    /// Sorted by name.
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: &str, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        Self { schema: SCHEMA, suite: suite.into(), checks }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<Report> {
    let checks = match name {
        "isometry" => isometry(cfg)?,
        "hermite-map" => hermite_map(cfg)?,
        "reproducing" => reproducing()?,
        "windowtransf" => windowtransf(cfg)?,
        "toeplitz-intertwine" => toeplitz_intertwine(cfg)?,
        "norm-equivalence" => norm_equivalence(cfg)?,
        "covering" => covering(cfg)?,
        "narrow" => narrow()?,
        "embeddings" => embeddings(cfg)?,
        "oscillator" => oscillator()?,
        other => return Err(Error::invalid(format!("unknown suite {other:?}; known suites: {}", SUITES.join(", ")))),
    };
    Ok(Report::new(name, checks))
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn signal_grid() -> ProductGrid {
    ProductGrid::new(vec![AxisGrid::new(8.0, 257).expect("valid axis")]).expect("valid grid")
}

fn square(half_width: f64, n: usize) -> Result<PhaseGrid> {
    PhaseGrid::square(1, half_width, n)
}

/// Seeded random Hermite expansions (d = 1).
pub fn hermite_family(seed: u64, count: usize, degree: u32) -> Vec<HermiteExpansion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| CoeffTable::random(&mut rng, 1, degree).into()).collect()
}

/// Seeded random polynomials `Σ a_k z^k/√k!` (d = 1).
pub fn taylor_family(seed: u64, count: usize, degree: u32) -> Vec<TaylorCoeffs> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f0c4);
    (0..count).map(|_| TaylorCoeffs::from_table(CoeffTable::random(&mut rng, 1, degree))).collect()
}

/// The exponent pairs of the isometry suite, in order.
pub fn isometry_exponents() -> Vec<(f64, f64)> {
    let inf = f64::INFINITY;
    vec![(1.0, 1.0), (2.0, 2.0), (inf, inf), (2.0, inf), (inf, 1.0)]
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn isometry(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let g = signal_grid();
    let pg = square(12.0, 97)?;
    let family = hermite_family(cfg.seed, 10, 8);
    let signals: Vec<Signal> = family.iter().map(|e| hermite_synthesize(e, &g)).collect::<Result<_>>()?;
    let focks: Vec<FockFunction> = family.iter().map(|e| FockFunction::Taylor(bargmann_coefficients(e))).collect();
    let mut cases = Vec::new();
    for (p, q) in isometry_exponents() {
        for s in [0.0, 2.0, -2.0] {
            cases.push((p, q, s));
        }
    }
    let mut checks: Vec<Check> = cases
        .par_iter()
        .map(|&(p, q, s)| {
            let spec = MixedNormSpec::lpq(p, q)?;
            let w = if s == 0.0 { WeightSpec::unit() } else { WeightSpec::sigma(s) };
            let mut worst = 0.0f64;
            for (f, bf) in signals.iter().zip(&focks) {
                let m = modulation_norm(f, &w, &spec, &pg)?;
                let a = fock_norm(bf, &w, &spec, &pg)?;
                worst = worst.max(rel(a, m));
            }
            Ok(Check::at_most(format!("isometry/{spec}/w={}", w.label()), worst, 1e-3))
        })
        .collect::<Result<_>>()?;

    // A² Parseval on sampled transforms of degree ≤ 10 expansions.
    let zgrid = square(7.0, 71)?;
    let mut worst = 0.0f64;
    for e in hermite_family(cfg.seed.wrapping_add(1), 5, 10) {
        let f = hermite_synthesize(&e, &g)?;
        let bf = FockFunction::Sampled(bargmann_sampled(&f, &zgrid)?);
        let v = a2_inner(&bf, &bf, None)?;
        worst = worst.max((v - f.l2_norm().powi(2)).norm());
    }
    checks.push(Check::at_most("parseval_a2", worst, 1e-4));

    // Round trip from the Fock side.
    let mut coeff_err = 0.0f64;
    let mut norm_err = 0.0f64;
    for t in taylor_family(cfg.seed, 5, 8) {
        let bf = FockFunction::Taylor(t.clone());
        let (e, _) = inverse_bargmann(&bf, 8)?;
        let back = bargmann_coefficients(&e);
        for (alpha, v) in t.iter() {
            coeff_err = coeff_err.max((back.get(alpha) - v).norm());
        }
        let a = fock_norm(&bf, &WeightSpec::sigma(2.0), &MixedNormSpec::l2(), &pg)?;
        let m = modulation_norm(&hermite_synthesize(&e, &g)?, &WeightSpec::sigma(2.0), &MixedNormSpec::l2(), &pg)?;
        norm_err = norm_err.max(rel(a, m));
    }
    checks.push(Check::at_most("round_trip/coefficients", coeff_err, 1e-12));
    checks.push(Check::at_most("round_trip/norm", norm_err, 1e-3));
    Ok(checks)
}

/// Twenty seeded points in the disc `|z| ≤ 3`.
pub fn disc_points(seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..20)
        .map(|_| {
            let r = 3.0 * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, rng.gen_range(0.0..2.0 * PI))
        })
        .collect()
}

fn monomial(k: u32, z: Complex64) -> Complex64 {
    let fact: f64 = (1..=k).map(f64::from).product();
    z.powu(k) / fact.sqrt()
}

fn hermite_map(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let g = signal_grid();
    let pts = disc_points(cfg.seed);
    let nested: Vec<Vec<Complex64>> = pts.iter().map(|&z| vec![z]).collect();
    let mut direct = 0.0f64;
    let mut via = 0.0f64;
    let mut coeff = 0.0f64;
    for k in 0..=8u32 {
        let e = HermiteExpansion::basis(vec![k]);
        let f = hermite_synthesize(&e, &g)?;
        let vals = bargmann_direct(&f, &nested)?;
        for (v, &z) in vals.iter().zip(&pts) {
            let scale = (1.0 + z.norm()).powi(8);
            direct = direct.max((v - monomial(k, z)).norm() / scale);
            via = via.max((bargmann_via_stft(&f, &[z])? - monomial(k, z)).norm() / scale);
        }
        let t = bargmann_coefficients(&e);
        coeff = coeff.max((t.get(&MultiIndex::new(vec![k])) - 1.0).norm()).max(c((t.len() as f64) - 1.0).norm());
    }
    Ok(vec![
        Check::at_most("hermite_map/coefficients", coeff, 0.0),
        Check::at_most("hermite_map/direct", direct, 1e-6),
        Check::at_most("hermite_map/via_stft", via, 1e-6),
    ])
}

fn reproducing() -> Result<Vec<Check>> {
    let pg = square(7.0, 57)?;
    let inner = square(1.5, 7)?;
    let pts: Vec<Vec<Complex64>> = (0..inner.len()).map(|k| inner.complex_node(k)).collect();
    let mut poly = 0.0f64;
    for k in 0..=6u32 {
        let field = PhaseField::from_complex_fn(pg.clone(), |w| w[0].powu(k));
        for (v, p) in reproducing_apply(&field, &pts)?.iter().zip(&pts) {
            poly = poly.max((v - p[0].powu(k)).norm());
        }
    }
    let anti = PhaseField::from_complex_fn(pg.clone(), |w| w[0].conj());
    let anti_err = max_of(reproducing_apply(&anti, &pts)?.iter().map(|v| v.norm()));

    let mix = PhaseField::from_complex_fn(pg.clone(), |w| w[0] * w[0] * 0.5 + w[0].conj() * w[0].conj() * w[0] - 1.0);
    let once = reproducing_apply_grid(&mix, &pg)?;
    let a = reproducing_apply(&once, &pts)?;
    let b = reproducing_apply(&mix, &pts)?;
    let idem = max_of(a.iter().zip(&b).map(|(x, y)| (x - y).norm()));
    Ok(vec![
        Check::at_most("reproducing/polynomials_deg6", poly, 1e-6),
        Check::at_most("reproducing/anti_analytic", anti_err, 1e-6),
        Check::at_most("reproducing/idempotence", idem, 1e-4),
    ])
}

/// `c` with `(V f) ∗̂ (V φ) ≈ c · V f`, from the projection onto `V f`, and
/// the relative residual of that proportionality.
pub fn window_constant(f: &HermiteExpansion, signal_n: usize, phase_n: usize) -> Result<(Complex64, f64)> {
    let g = ProductGrid::new(vec![AxisGrid::new(8.0, signal_n)?])?;
    let w = gaussian_window(1, &g)?;
    let pg = square(8.0, phase_n)?;
    let vpp = stft(w.signal(), &w, &pg)?;
    let vf = stft(&hermite_synthesize(f, &g)?, &w, &pg)?;
    let conv = twisted_convolution(&vf, &vpp)?;
    let cst = conv.inner(&vf)? / vf.inner(&vf)?;
    let resid = conv.sub(&vf.scale(cst))?.l2_norm() / (vf.l2_norm() * cst.norm());
    Ok((cst, resid))
}

fn windowtransf(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let f = hermite_family(cfg.seed, 1, 4).remove(0);
    let (c1, r1) = window_constant(&f, 129, 49)?;
    let (c2, r2) = window_constant(&f, 257, 97)?;
    let (c0, _) = window_constant(&HermiteExpansion::basis(vec![0]), 129, 49)?;
    Ok(vec![
        Check::at_most("windowtransf/proportionality", r1.max(r2), 1e-2),
        Check::at_most("windowtransf/grid_doubling", (c2 - c1).norm() / c1.norm(), 1e-2),
        Check::at_most("windowtransf/same_constant_for_window", (c1 - c0).norm() / c0.norm(), 1e-2),
        Check::at_most("windowtransf/moyal_constant", (c1 - moyal_constant(1)).norm() / moyal_constant(1), 1e-2),
    ])
}

/// Relative L² error of `Tp(σ₂) h_k = λ h_k`.
pub fn toeplitz_sigma2_error(k: u32, lambda: f64) -> Result<f64> {
    let g = signal_grid();
    let w = gaussian_window(1, &g)?;
    let pg = square(12.0, 121)?;
    let s2 = PhaseField::from_fn(pg, |x, xi| c(sigma(2.0, x, xi)));
    let h = hermite_synthesize(&HermiteExpansion::basis(vec![k]), &g)?;
    let th = toeplitz(&s2, &w, &h)?;
    Ok(th.sub(&h.scale(c(lambda)))?.l2_norm() / (lambda * h.l2_norm()))
}

/// Relative residual of `T_𝔙(a) 𝔙 f = 𝔙 Tp(a) f` at points on `|z| = 1.2`
/// for a smooth non-radial symbol and a seeded degree-4 `f`.
pub fn intertwining_residual(seed: u64) -> Result<f64> {
    let g = signal_grid();
    let w = gaussian_window(1, &g)?;
    let sym = |x: &[f64], xi: &[f64]| c(1.0 / (1.0 + 0.2 * (x[0] * x[0] + (xi[0] - 0.5).powi(2))));
    let a_stft = PhaseField::from_fn(square(12.0, 121)?, sym);
    let a_fock = PhaseField::from_fn(square(9.0, 73)?, sym);
    let quad = square(6.0, 49)?;
    let e = hermite_family(seed, 1, 4).remove(0);
    let tf = toeplitz(&a_stft, &w, &hermite_synthesize(&e, &g)?)?;
    let pts: Vec<Vec<Complex64>> = (0..6).map(|k| vec![Complex64::from_polar(1.2, k as f64)]).collect();
    let lhs = bargmann_toeplitz(&a_fock, &FockFunction::Taylor(bargmann_coefficients(&e)), &quad, &pts)?;
    let rhs = bargmann_direct(&tf, &pts)?;
    let num: f64 = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    let den: f64 = rhs.iter().map(|b| b.norm_sqr()).sum::<f64>().sqrt();
    Ok(num / den)
}

fn toeplitz_intertwine(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut checks: Vec<Check> = (0..=4u32)
        .into_par_iter()
        .map(|k| {
            // Anti-Wick eigenvalues of σ₂ = 1 + |x|² + |ξ|².
            let lambda = 2.0 * f64::from(k) + 3.0;
            Ok(Check::at_most(format!("toeplitz/sigma2_eigen_k={k}"), toeplitz_sigma2_error(k, lambda)?, 1e-2))
        })
        .collect::<Result<_>>()?;
    checks.push(Check::at_most("toeplitz/intertwining", intertwining_residual(cfg.seed)?, 5e-2));
    Ok(checks)
}

/// Largest `max(r, 1/r)` of the norm-equivalence ratio over a family.
pub fn equivalence_band(family: &[TaylorCoeffs], n: i32, pg: &PhaseGrid) -> Result<f64> {
    let mut band = 1.0f64;
    for t in family {
        let r = norm_equivalence_report(t, n, pg)?.ratio;
        band = band.max(r).max(1.0 / r);
    }
    Ok(band)
}

/// The frozen norm-equivalence family: the monomials of degree ≤ 8 plus ten
/// seeded polynomials.
pub fn equivalence_family(seed: u64) -> Vec<TaylorCoeffs> {
    let mut fam: Vec<TaylorCoeffs> = (0..=8u32).map(|k| TaylorCoeffs::monomial(vec![k])).collect();
    fam.extend(taylor_family(seed, 10, 8));
    fam
}

fn norm_equivalence(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let fam = equivalence_family(cfg.seed);
    let coarse = square(14.0, 113)?;
    let fine = square(14.0, 225)?;
    let mut checks = Vec::new();
    for n in [-1, 0, 1] {
        let a = equivalence_band(&fam, n, &coarse)?;
        let b = equivalence_band(&fam, n, &fine)?;
        checks.push(Check::at_most(format!("norm_equivalence/N={n}/band"), a.max(b), 16.0));
        checks.push(Check::at_most(format!("norm_equivalence/N={n}/grid_stability"), rel(b, a), 0.1));
    }
    Ok(checks)
}

fn covering(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let cover = build_ball_cover(cfg.r_max, 1)?;
    let check = cover.check(400);
    let min_center = cover.balls.iter().map(|b| b.center.norm()).fold(f64::INFINITY, f64::min);
    Ok(vec![
        Check::at_most("covering/uncovered_samples", check.uncovered as f64, 0.0),
        Check::at_most("covering/max_radius_times_center", check.max_r_times_center, 1.0 + 1e-12),
        Check::at_most("covering/inner_radius_gap", (4.0 - min_center).max(0.0), 1e-12),
        Check::at_most("covering/max_overlap", check.max_overlap as f64, crate::fock::MAX_OVERLAP as f64),
    ])
}

/// Degree-`deg` Taylor truncation of `e^{0.3 z}`, with room up to degree 16.
pub fn exp_truncation(deg: u32) -> FockFunction {
    let mut t = TaylorCoeffs::new(1, 16);
    let mut a = 1.0;
    for k in 0..=deg {
        if k > 0 {
            a *= 0.3 / f64::from(k).sqrt();
        }
        t.table_mut().insert(vec![k], c(a)).expect("degree within bound");
    }
    FockFunction::Taylor(t)
}

fn narrow() -> Result<Vec<Check>> {
    let pg = square(6.0, 121)?;
    let limit = exp_truncation(16);
    let seq: Vec<FockFunction> = (0..=12).map(exp_truncation).collect();
    let unit = WeightSpec::unit();
    let sup = narrow_convergence_check(&seq, &limit, &unit, f64::INFINITY, 1.0, &pg)?;
    let l2 = narrow_convergence_check(&seq, &limit, &unit, 2.0, 1.0, &pg)?;
    let rise = max_of(l2.profile_distance[4..].windows(2).map(|w| (w[1] - w[0]) / w[0]));

    let f = FockFunction::Taylor(taylor_family(1, 1, 6).remove(0));
    let rot = match &f {
        FockFunction::Taylor(t) => FockFunction::Taylor(TaylorCoeffs::from_table(t.scale(Complex64::from_polar(1.0, 0.7)))),
        FockFunction::Sampled(_) => unreachable!(),
    };
    let a = narrow_profile(&f, &WeightSpec::sigma(1.0), 2.0, &pg)?;
    let b = narrow_profile(&rot, &WeightSpec::sigma(1.0), 2.0, &pg)?;
    let rot_err = max_of(a.iter().zip(&b).map(|(x, y)| rel(*y, *x)));
    Ok(vec![
        Check::at_most("narrow/sup_profile_distance_j12", sup.profile_distance[12], 1e-6),
        Check::at_most("narrow/pointwise_j12", sup.pointwise[12], 1e-6),
        Check::at_most("narrow/l2_profile_rise_from_j4", rise, 0.0),
        Check::at_most("narrow/rotation_invariance", rot_err, 1e-12),
    ])
}

fn embeddings(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let pg = square(10.0, 101)?;
    let fam: Vec<FockFunction> = taylor_family(cfg.seed, 10, 8).into_iter().map(FockFunction::Taylor).collect();
    let mut checks = Vec::new();
    for (p1, p2) in [(1.0, 2.0), (1.0, f64::INFINITY), (2.0, f64::INFINITY)] {
        let mut exact = 0.0f64;
        let mut grid = 0.0f64;
        for f in &fam {
            let h = holder_embedding_check(f, 0.0, p1, p2, &pg)?;
            if h.constant_exact.is_finite() {
                exact = exact.max(h.lhs / (h.constant_exact * h.rhs));
            }
            grid = grid.max(h.lhs / (h.constant * h.rhs));
        }
        let tag = format!("p1={p1},p2={p2}");
        checks.push(Check::at_most(format!("holder/{tag}/exact_constant"), exact, 1.0));
        checks.push(Check::at_most(format!("holder/{tag}/grid_constant"), grid, 1.0 + 1e-12));
    }

    let pgd = square(12.0, 97)?;
    let spec = MixedNormSpec::lpq(2.0, 1.0)?;
    let mut duality = 0.0f64;
    for pair in fam.chunks(2) {
        let d = duality_bound_check(&pair[0], &pair[1], &WeightSpec::sigma(1.0), &spec, &pgd)?;
        duality = duality.max(d.pairing.norm() / d.bound);
    }
    checks.push(Check::at_most("duality/pairing_over_bound", duality, 1.0 + 1e-6));

    let from = MixedNormSpec::lpq(1.0, 1.0)?;
    let to = MixedNormSpec::lpq(2.0, f64::INFINITY)?;
    let fine = square(12.0, 193)?;
    let mut coarse_c = 0.0f64;
    let mut fine_c = 0.0f64;
    for f in &fam {
        coarse_c = coarse_c.max(embedding_ratio(f, 1.0, &from, &to, &pgd)?);
        fine_c = fine_c.max(embedding_ratio(f, 1.0, &from, &to, &fine)?);
    }
    checks.push(Check::at_most("embedding/constant", fine_c, 1.0));
    checks.push(Check::at_most("embedding/grid_stability", rel(fine_c, coarse_c), 0.1));
    Ok(checks)
}

/// Relative L² residual `‖H h_α − λ_α h_α‖ / λ_α` with the eighth-order
/// grid Laplacian.
pub fn oscillator_residual(alpha: &MultiIndex, grid: &ProductGrid) -> Result<f64> {
    let e = HermiteExpansion::basis(alpha.clone());
    let h = hermite_synthesize(&e, grid)?;
    let lambda = oscillator_eigenvalue(alpha, grid.rank());
    let hh = apply_oscillator_on_grid(&h, StencilOrder::Eighth);
    Ok(hh.sub(&h.scale(c(lambda)))?.l2_norm() / (lambda * h.l2_norm()))
}

fn oscillator() -> Result<Vec<Check>> {
    let g1 = ProductGrid::new(vec![AxisGrid::new(8.0, 1025)?])?;
    let ax = AxisGrid::new(9.0, 181)?;
    let g2 = ProductGrid::new(vec![ax, ax])?;
    let one = max_of((0..=8u32).map(|k| oscillator_residual(&MultiIndex::new(vec![k]), &g1)).collect::<Result<Vec<_>>>()?);
    let two = max_of(MultiIndex::all_up_to(2, 4).iter().map(|a| oscillator_residual(a, &g2)).collect::<Result<Vec<_>>>()?);
    Ok(vec![
        Check::at_most("oscillator/d=1", one, 1e-5),
        Check::at_most("oscillator/d=2", two, 1e-5),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_invalid() {
        assert!(matches!(run_suite("nosuchsuite", &VerifyConfig::default()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn report_is_sorted_and_versioned() {
        let r = Report::new("x", vec![Check::at_most("b", 1.0, 2.0), Check::at_most("a", 3.0, 2.0)]);
        assert_eq!(r.checks[0].name, "a");
        assert!(!r.all_passed());
        assert_eq!(r.failed().count(), 1);
        let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["checks"][1]["passed"], true);
    }

    #[test]
    fn nan_never_passes() {
        assert!(!Check::at_most("n", f64::NAN, 1.0).passed);
    }

    #[test]
    fn covering_suite_passes_and_is_deterministic() {
        let cfg = VerifyConfig { seed: 1, r_max: 6.0 };
        let a = run_suite("covering", &cfg).unwrap();
        assert!(a.all_passed(), "{a:?}");
        assert_eq!(a.to_json().unwrap(), run_suite("covering", &cfg).unwrap().to_json().unwrap());
    }

    #[test]
    fn families_are_seeded() {
        assert_eq!(hermite_family(3, 2, 4), hermite_family(3, 2, 4));
        assert_ne!(hermite_family(3, 1, 4), hermite_family(4, 1, 4));
        assert_eq!(disc_points(5), disc_points(5));
        assert!(disc_points(5).iter().all(|z| z.norm() <= 3.0));
    }
}
