//! Constructive ball cover of the annulus `{4 ≤ |z| ≤ R_max}` in ℂ.
//!
//! Sphere `(k, l)` has radius `ρ = k + l/(kN)` for `k ≥ 4` and
//! `l = 0..kN`. Each carries `⌈2πρ(k+1)⌉` equally spaced centers with ball
//! radius `1/(k+1)`, so neighbours sit between `1/(2k)` and `1/(k+1)` apart.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inflation factor for the overlap count.
const INFLATE: f64 = 4.0;
/// Overlap bound the cover is checked against.
pub const MAX_OVERLAP: usize = 64;
const INNER: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    /// Serialized as `[re, im]`.
    pub center: Complex64,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallCover {
    pub balls: Vec<Ball>,
    #[serde(rename = "R_max")]
    pub r_max: f64,
    /// Largest number of inflated balls `B_{4r_j}(z_j)` sharing a point,
    /// over the centers and a polar sample of the annulus.
    pub max_overlap: usize,
}

/// Outcome of [`BallCover::check`].
#[derive(Clone, Debug, PartialEq)]
pub struct CoverCheck {
    pub sampled: usize,
    pub uncovered: usize,
    pub first_uncovered: Option<Complex64>,
    /// Balls with `|z_j| < 4` or `r_j |z_j| > 1`.
    pub radius_violations: usize,
    pub max_r_times_center: f64,
    pub max_overlap: usize,
}

impl CoverCheck {
    pub fn passes(&self) -> bool {
        self.uncovered == 0 && self.radius_violations == 0 && self.max_overlap <= MAX_OVERLAP
    }
}

/// Buckets ball indices by the cell containing their center.
struct SpatialHash {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl SpatialHash {
    fn new(balls: &[Ball], cell: f64) -> Self {
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, b) in balls.iter().enumerate() {
            buckets.entry(Self::key(b.center, cell)).or_default().push(i);
        }
        Self { cell, buckets }
    }

    fn key(z: Complex64, cell: f64) -> (i64, i64) {
        ((z.re / cell).floor() as i64, (z.im / cell).floor() as i64)
    }

    /// Indices of balls whose centers lie within `reach` cells of `z`.
    fn near(&self, z: Complex64, reach: i64) -> impl Iterator<Item = usize> + '_ {
        let (cx, cy) = Self::key(z, self.cell);
        (-reach..=reach)
            .flat_map(move |dx| (-reach..=reach).map(move |dy| (cx + dx, cy + dy)))
            .filter_map(|k| self.buckets.get(&k))
            .flatten()
            .copied()
    }
}

fn polar_samples(r_max: f64, n: usize) -> Vec<Complex64> {
    let n = n.max(2);
    (0..n)
        .flat_map(|i| {
            let rho = INNER + (r_max - INNER) * i as f64 / (n - 1) as f64;
            (0..n).map(move |j| Complex64::from_polar(rho, 2.0 * PI * j as f64 / n as f64))
        })
        .collect()
}

/// Largest covering distance along the radial direction for a sphere of
/// radius `rho` with `count` centers and ball radius `r`: a point at radial
/// offset `t` is inside some ball when `t² + 4ρ(ρ+t) sin²(π/(2·count)) < r²`.
fn radial_reach(rho: f64, count: usize, r: f64) -> f64 {
    let s = 4.0 * (PI / (2.0 * count as f64)).sin().powi(2);
    // t² + sρt + (sρ² − r²) < 0
    let b = s * rho;
    let c = s * rho * rho - r * r;
    let disc = b * b - 4.0 * c;
    if disc <= 0.0 {
        return 0.0;
    }
    ((-b + disc.sqrt()) / 2.0).max(0.0)
}

/// Builds the cover of `{4 ≤ |z| ≤ r_max}` with `n_refine` spheres per unit
/// of `k` (that is, `kN` spheres between `|z| = k` and `k + 1`).
pub fn build_ball_cover(r_max: f64, n_refine: usize) -> Result<BallCover> {
    if !(r_max >= 5.0 && r_max.is_finite()) {
        return Err(Error::invalid(format!("R_max must be at least 5, got {r_max}")));
    }
    struct Sphere {
        rho: f64,
        count: usize,
        r: f64,
    }
    let mut spheres: Vec<Sphere> = Vec::new();
    let mut balls = Vec::new();
    let mut k = 4usize;
    'outer: loop {
        let per_k = k * n_refine;
        if per_k == 0 {
            return Err(Error::Construction { k, l: 0, reason: "no spheres between consecutive integer radii".into() });
        }
        let r = 1.0 / (k as f64 + 1.0);
        for l in 0..per_k {
            let rho = k as f64 + l as f64 / per_k as f64;
            let count = (2.0 * PI * rho * (k as f64 + 1.0)).ceil() as usize;
            let spacing = 2.0 * rho * (PI / count as f64).sin();
            if spacing < 1.0 / (2.0 * k as f64) || spacing > r * (1.0 + 1e-12) {
                return Err(Error::Construction {
                    k,
                    l,
                    reason: format!("neighbour spacing {spacing:.6} outside [1/(2k), 1/(k+1)]"),
                });
            }
            if let Some(prev) = spheres.last() {
                let gap = rho - prev.rho;
                let reach = radial_reach(prev.rho, prev.count, prev.r) + radial_reach(rho, count, r.min(prev.r));
                if reach < gap {
                    return Err(Error::Construction {
                        k,
                        l,
                        reason: format!("radial gap {gap:.6} exceeds the combined reach {reach:.6}"),
                    });
                }
            }
            balls.extend((0..count).map(|j| Ball {
                center: Complex64::from_polar(rho, 2.0 * PI * j as f64 / count as f64),
                radius: r,
            }));
            spheres.push(Sphere { rho, count, r });
            if rho >= r_max {
                break 'outer;
            }
        }
        k += 1;
    }
    let mut cover = BallCover { balls, r_max, max_overlap: 0 };
    let mut probes: Vec<Complex64> = cover.balls.iter().map(|b| b.center).collect();
    probes.extend(polar_samples(r_max, 200));
    cover.max_overlap = cover.overlap_at(&probes);
    log::debug!("ball cover: {} balls up to R_max={r_max}, overlap {}", cover.balls.len(), cover.max_overlap);
    Ok(cover)
}

impl BallCover {
    fn largest_radius(&self) -> f64 {
        self.balls.iter().map(|b| b.radius).fold(0.0, f64::max)
    }

    /// Largest number of inflated balls containing any one of `points`.
    pub fn overlap_at(&self, points: &[Complex64]) -> usize {
        let cell = self.largest_radius().max(1e-3);
        let hash = SpatialHash::new(&self.balls, cell);
        let reach = INFLATE.ceil() as i64 + 1;
        points
            .iter()
            .map(|&z| {
                hash.near(z, reach)
                    .filter(|&i| (self.balls[i].center - z).norm() < INFLATE * self.balls[i].radius)
                    .count()
            })
            .max()
            .unwrap_or(0)
    }

    /// Checks the three cover conditions on an `n × n` polar grid of the
    /// annulus (radii from 4 to `R_max`, `n` angles each).
    pub fn check(&self, n: usize) -> CoverCheck {
        let cell = self.largest_radius().max(1e-3);
        let hash = SpatialHash::new(&self.balls, cell);
        let samples = polar_samples(self.r_max, n);
        let mut uncovered = 0;
        let mut first_uncovered = None;
        for &z in &samples {
            let hit = hash.near(z, 1).any(|i| (self.balls[i].center - z).norm() <= self.balls[i].radius);
            if !hit {
                uncovered += 1;
                first_uncovered.get_or_insert(z);
            }
        }
        let mut radius_violations = 0;
        let mut max_r_times_center = 0.0f64;
        for b in &self.balls {
            let m = b.center.norm();
            max_r_times_center = max_r_times_center.max(b.radius * m);
            if m < INNER - 1e-12 || b.radius * m > 1.0 + 1e-12 {
                radius_violations += 1;
            }
        }
        let mut probes: Vec<Complex64> = self.balls.iter().map(|b| b.center).collect();
        probes.extend_from_slice(&samples);
        CoverCheck {
            sampled: samples.len(),
            uncovered,
            first_uncovered,
            radius_violations,
            max_r_times_center,
            max_overlap: self.overlap_at(&probes).max(self.max_overlap),
        }
    }
}
