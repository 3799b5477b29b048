use crate::error::{Error, Result};

/// `m`-point Gauss–Hermite rule for `∫ e^{−t²} f(t) dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫ e^{−t²} f(t) dt`.
    pub fn integrate<T, F>(&self, f: F) -> T
    where
        F: Fn(f64) -> T,
        T: std::ops::Mul<f64, Output = T> + std::iter::Sum,
    {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| f(t) * w).sum()
    }
}

const PI_M4: f64 = 0.751_125_544_464_942_5; // π^{-1/4}
const MAX_NEWTON: usize = 100;

/// Nodes from the eigenvalues of the Jacobi matrix (Golub–Welsch), each
/// polished by Newton steps on the orthonormal recurrence; weights from the
/// derivative at the polished node.
pub fn gauss_hermite_rule(m: usize) -> Result<QuadRule> {
    if !(1..=256).contains(&m) {
        return Err(Error::invalid(format!("Gauss–Hermite order must be in 1..=256, got {m}")));
    }
    let mut diag = vec![0.0; m];
    let mut off: Vec<f64> = (1..m).map(|k| (k as f64 / 2.0).sqrt()).collect();
    off.push(0.0);
    tridiagonal_eigenvalues(&mut diag, &mut off)?;
    diag.sort_by(f64::total_cmp);
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for &seed in &diag {
        let mut z = seed;
        for _ in 0..MAX_NEWTON {
            let (p, dp) = orthonormal_hermite(m, z);
            let step = p / dp;
            z -= step;
            if step.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        let (_, dp) = orthonormal_hermite(m, z);
        nodes.push(z);
        weights.push(2.0 / (dp * dp));
    }
    // Enforce exact symmetry.
    for i in 0..m / 2 {
        let x = 0.5 * (nodes[m - 1 - i] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[m - 1 - i]);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok(QuadRule { nodes, weights })
}

/// Implicit QL iteration on a symmetric tridiagonal matrix; eigenvalues are
/// left in `d`. `e[i]` couples rows `i` and `i + 1`.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::invalid("tridiagonal eigenvalue iteration did not converge"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Value and derivative of the degree-`m` Hermite polynomial normalized so
/// that `π^{-1/4} e^{−t²/2} p(t)` is an L²-normalized Hermite function.
fn orthonormal_hermite(m: usize, z: f64) -> (f64, f64) {
    let mut p1 = PI_M4;
    let mut p2 = 0.0;
    for j in 0..m {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
    }
    (p1, (2.0 * m as f64).sqrt() * p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// ∫ t^{2k} e^{−t²} dt = Γ(k + 1/2) = √π (2k−1)!! / 2^k.
    fn gaussian_moment(two_k: u32) -> f64 {
        let k = two_k / 2;
        let mut v = PI.sqrt();
        for j in 1..=k {
            v *= (2 * j - 1) as f64 / 2.0;
        }
        v
    }

    #[test]
    fn one_point() {
        let r = gauss_hermite_rule(1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!((r.weights()[0] - PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn two_points_match_closed_form() {
        let r = gauss_hermite_rule(2).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((r.nodes()[0] + s).abs() < 1e-15 && (r.nodes()[1] - s).abs() < 1e-15);
        for &w in r.weights() {
            assert!((w - PI.sqrt() / 2.0).abs() < 1e-15);
        }
        let m2: f64 = r.integrate(|t| t * t);
        assert!((m2 - PI.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn eight_points_sixth_moment() {
        let r = gauss_hermite_rule(8).unwrap();
        let v: f64 = r.integrate(|t| t.powi(6));
        assert!((v - PI.sqrt() * 15.0 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn even_moments_exact_up_to_degree() {
        for m in 1..=64usize {
            let r = gauss_hermite_rule(m).unwrap();
            let total: f64 = r.weights().iter().sum();
            assert!((total - PI.sqrt()).abs() < 1e-12, "m={m} sum={total}");
            for two_k in (0..=(2 * m as u32 - 1)).step_by(2) {
                let v: f64 = r.integrate(|t| t.powi(two_k as i32));
                let exact = gaussian_moment(two_k);
                assert!(((v - exact) / exact).abs() < 1e-10, "m={m} 2k={two_k} rel={}", (v - exact) / exact);
            }
        }
    }

    #[test]
    fn large_orders_are_sane() {
        for m in [100, 200, 256] {
            let r = gauss_hermite_rule(m).unwrap();
            let total: f64 = r.weights().iter().sum();
            assert!((total - PI.sqrt()).abs() < 1e-12, "m={m} total={total}");
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(r.weights().iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn order_out_of_range() {
        assert!(gauss_hermite_rule(0).is_err());
        assert!(gauss_hermite_rule(257).is_err());
    }
}
