//! The Dirichlet Laplacian on the path `⟦0,N⟧`, the discrete heat equation
//! satisfied by mean heights, the exponential (Cole-Hopf) observable of the
//! biased chain, and closed-form coupling and mixing bounds.

mod bounds;
mod cole_hopf;
mod heat;

use std::f64::consts::PI;

pub use bounds::{contraction_envelope, coupling_tail_bound, mixing_upper_bound, TailBound};
pub use cole_hopf::{cole_hopf, generator_identity_residual, w_functional};
pub use heat::{heat_solve, HeightField};

use crate::error::{out_of_range, Result};

/// Eigen-decomposition of the zero-boundary Dirichlet Laplacian
/// `Δ⁰_D f(i) = f(i+1) + f(i-1) - 2f(i)` on `⟦1,N-1⟧`:
/// `Δ⁰_D sin(i j π / N) = -2 γ_j sin(i j π / N)` with `γ_j = 1 - cos(jπ/N)`.
#[derive(Clone, Debug)]
pub struct DirichletSpectrum {
    n: usize,
    gammas: Vec<f64>,
}

impl DirichletSpectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `γ_1, …, γ_{N-1}`, increasing.
    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    /// `γ_j` for `j ∈ ⟦1,N-1⟧`.
    pub fn gamma(&self, j: usize) -> f64 {
        self.gammas[j - 1]
    }

    /// Spectral gap `γ_1`.
    pub fn gap(&self) -> f64 {
        self.gammas[0]
    }

    /// Mode `j` sampled on `⟦0,N⟧` (zero at both ends).
    pub fn mode(&self, j: usize) -> Vec<f64> {
        (0..=self.n).map(|i| sine_index(i * j, self.n)).collect()
    }
}

/// `sin(m π / N)` with `m` reduced modulo `2N` before the float conversion,
/// which keeps the argument error at one ulp of `2π` for large `m`.
pub(crate) fn sine_index(m: usize, n: usize) -> f64 {
    let r = m % (2 * n);
    (r as f64 * PI / n as f64).sin()
}

pub fn dirichlet_spectrum(n: usize) -> Result<DirichletSpectrum> {
    if n < 2 {
        return Err(out_of_range("N", format!("N = {n}, need N >= 2")));
    }
    let gammas = (1..n).map(|j| gamma(n, j)).collect();
    Ok(DirichletSpectrum { n, gammas })
}

/// `γ_j = 1 - cos(jπ/N) = 2 sin²(jπ/2N)`, evaluated without cancellation.
pub fn gamma(n: usize, j: usize) -> f64 {
    let s = (j as f64 * PI / (2.0 * n as f64)).sin();
    2.0 * s * s
}

/// `Δ_D f(i)` for `i ∈ ⟦1,N-1⟧`, `f` indexed by `⟦0,N⟧` carrying its own
/// boundary values.
pub fn dirichlet_laplacian(f: &[f64]) -> Vec<f64> {
    let n = f.len() - 1;
    (1..n).map(|i| f[i + 1] + f[i - 1] - 2.0 * f[i]).collect()
}
