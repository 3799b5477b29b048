//! Numerical Bargmann–Fock toolkit.
//!
//! Sampling grids and quadrature ([`grid`]), Hermite functions and the shifted
//! harmonic oscillator ([`hermite`]), the Gaussian-window short-time Fourier
//! transform with its inverse, twisted convolution and Toeplitz operators
//! ([`stft`]), the Bargmann transform and its inverse ([`bargmann`]), and
//! weighted mixed-norm functionals on phase space and on the Fock side
//! ([`fock`]). [`verify`] bundles the property suites used by the CLI.
//!
//! Phase space ℝ^{2d} is identified with ℂᵈ through `z = x + iξ`.
//!
//! # Normalization
//!
//! The STFT carries no `(2π)^{-d/2}` prefactor:
//!
//! ```text
//! V_φ f(x, ξ) = ∫ f(y) conj(φ(y − x)) e^{−i⟨y, ξ⟩} dy
//! ```
//!
//! With this choice `𝔙f(x + iξ) = e^{(|x|²+|ξ|²)/2} e^{−i⟨x,ξ⟩} V_φ f(√2x, −√2ξ)`
//! holds with constant one, so the Fock-side norms equal the modulation norms
//! exactly. The price is a Moyal constant: `‖V_φ f‖_{L²} = (2π)^{d/2} ‖f‖ ‖φ‖`.
//! That factor appears in [`stft::istft`], [`stft::projection_pi`] and the
//! weak form of [`stft::toeplitz`].

pub mod bargmann;
pub mod error;
pub mod fock;
pub mod grid;
pub mod hermite;
pub mod interp;
pub mod io;
mod special;
pub mod stft;
pub mod verify;

pub use num_complex::Complex64;

pub use error::{Error, Result};
