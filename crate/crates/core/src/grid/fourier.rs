use num_complex::Complex64;

use super::{AxisGrid, ProductGrid, Signal};
use crate::error::{Error, Result};

/// Contracts axis `axis` of a row-major tensor of `shape` with a dense
/// kernel of size `out_len × shape[axis]`.
pub(crate) fn contract_axis(
    values: &[Complex64],
    shape: &[usize],
    axis: usize,
    kernel: &[Complex64],
    out_len: usize,
) -> Vec<Complex64> {
    let in_len = shape[axis];
    debug_assert_eq!(kernel.len(), out_len * in_len);
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * out_len * inner];
    for o in 0..outer {
        let src = &values[o * in_len * inner..(o + 1) * in_len * inner];
        let dst = &mut out[o * out_len * inner..(o + 1) * out_len * inner];
        for k in 0..out_len {
            let krow = &kernel[k * in_len..(k + 1) * in_len];
            let drow = &mut dst[k * inner..(k + 1) * inner];
            for (j, kv) in krow.iter().enumerate() {
                if kv.re == 0.0 && kv.im == 0.0 {
                    continue;
                }
                let srow = &src[j * inner..(j + 1) * inner];
                for (d, s) in drow.iter_mut().zip(srow) {
                    *d += kv * s;
                }
            }
        }
    }
    out
}

/// `(ℱf)(ξ) = (2π)^{−d/2} ∫ f(x) e^{−i⟨x,ξ⟩} dx` by direct trapezoid
/// quadrature, one axis at a time. The output grid defaults to the input grid.
pub fn fourier_transform(f: &Signal, out_axes: Option<&[AxisGrid]>) -> Result<Signal> {
    let in_axes = f.grid().axes();
    let out_axes: Vec<AxisGrid> = match out_axes {
        Some(a) if a.len() != in_axes.len() => {
            return Err(Error::invalid(format!(
                "output grid has {} axes, signal has {}",
                a.len(),
                in_axes.len()
            )))
        }
        Some(a) => a.to_vec(),
        None => in_axes.to_vec(),
    };
    let norm = (2.0 * std::f64::consts::PI).sqrt().recip();
    let mut shape = f.grid().shape();
    let mut values = f.values().to_vec();
    for (axis, (ia, oa)) in in_axes.iter().zip(&out_axes).enumerate() {
        let xs = ia.nodes();
        let ws = ia.weights();
        let kernel: Vec<Complex64> = oa
            .nodes()
            .iter()
            .flat_map(|&xi| {
                xs.iter()
                    .zip(&ws)
                    .map(move |(&x, &w)| Complex64::from_polar(w * norm, -x * xi))
            })
            .collect();
        values = contract_axis(&values, &shape, axis, &kernel, oa.len());
        shape[axis] = oa.len();
    }
    Signal::new(ProductGrid::new(out_axes)?, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::{hermite_synthesize, CoeffTable, HermiteExpansion};
    use rand::{Rng, SeedableRng};

    fn grid_1d(l: f64, n: usize) -> ProductGrid {
        ProductGrid::new(vec![AxisGrid::new(l, n).unwrap()]).unwrap()
    }

    #[test]
    fn gaussian_is_fixed_point() {
        let g = grid_1d(8.0, 513);
        let f = Signal::from_fn(g, |x| Complex64::new((-x[0] * x[0] / 2.0).exp(), 0.0)).unwrap();
        let ff = fourier_transform(&f, None).unwrap();
        for (a, b) in ff.values().iter().zip(f.values()) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn first_hermite_function_eigenvalue() {
        // Oracle: h_1(x) = √2 π^{-1/4} x e^{-x²/2} written out by hand.
        let g = grid_1d(8.0, 513);
        let c = 2f64.sqrt() * std::f64::consts::PI.powf(-0.25);
        let h1 = Signal::from_fn(g, |x| Complex64::new(c * x[0] * (-x[0] * x[0] / 2.0).exp(), 0.0)).unwrap();
        let ff = fourier_transform(&h1, None).unwrap();
        let expected = h1.scale(Complex64::new(0.0, -1.0));
        for (a, b) in ff.values().iter().zip(expected.values()) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    fn random_expansion(seed: u64, degree: u32) -> HermiteExpansion {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut t = CoeffTable::new(1, degree);
        for k in 0..=degree {
            t.insert(vec![k], Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .unwrap();
        }
        HermiteExpansion::from(t)
    }

    #[test]
    fn parseval() {
        let g = grid_1d(8.0, 257);
        for seed in 0..5 {
            let f = hermite_synthesize(&random_expansion(seed, 10), &g).unwrap();
            let ff = fourier_transform(&f, None).unwrap();
            assert!((ff.l2_norm() - f.l2_norm()).abs() < 1e-8);
        }
    }

    #[test]
    fn fourth_power_is_identity() {
        let g = grid_1d(8.0, 257);
        for seed in 10..14 {
            let f = hermite_synthesize(&random_expansion(seed, 12), &g).unwrap();
            let mut h = f.clone();
            for _ in 0..4 {
                h = fourier_transform(&h, None).unwrap();
            }
            let err = h.sub(&f).unwrap().values().iter().map(|v| v.norm()).fold(0.0, f64::max);
            assert!(err < 1e-6, "err={err}");
        }
    }

    #[test]
    fn two_dimensional_gaussian() {
        let ax = AxisGrid::new(8.0, 65).unwrap();
        let g = ProductGrid::new(vec![ax, ax]).unwrap();
        let f = Signal::from_fn(g, |x| Complex64::new((-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp(), 0.0)).unwrap();
        let ff = fourier_transform(&f, None).unwrap();
        for (a, b) in ff.values().iter().zip(f.values()) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let g = grid_1d(4.0, 33);
        let f = Signal::zeros(g).unwrap();
        let ax = AxisGrid::new(4.0, 33).unwrap();
        assert!(fourier_transform(&f, Some(&[ax, ax])).is_err());
    }
}
