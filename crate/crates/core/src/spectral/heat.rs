use crate::error::{out_of_range, Error, Result};
use crate::states::LatticePath;

use super::{gamma, sine_index};

/// A real profile on `⟦0,N⟧` whose two boundary values are fixed at
/// construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HeightField {
    values: Vec<f64>,
}

impl HeightField {
    /// `values` is indexed by `⟦0,N⟧`; its ends become the pinned boundary.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(out_of_range("N", "a height field needs N >= 2"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("non-finite height".into()));
        }
        Ok(Self { values })
    }

    /// Boundary `(left, right)` with the given interior `⟦1,N-1⟧`.
    pub fn pinned(left: f64, interior: &[f64], right: f64) -> Result<Self> {
        let mut values = Vec::with_capacity(interior.len() + 2);
        values.push(left);
        values.extend_from_slice(interior);
        values.push(right);
        Self::new(values)
    }

    pub fn from_path(zeta: &LatticePath) -> Self {
        Self {
            values: zeta.heights().iter().map(|&h| h as f64).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interior(&self) -> &[f64] {
        &self.values[1..self.n()]
    }

    pub fn boundary(&self) -> (f64, f64) {
        (self.values[0], self.values[self.n()])
    }

    /// Linear interpolation of the boundary values: the stationary profile.
    pub fn harmonic(&self) -> Vec<f64> {
        let (a, b) = self.boundary();
        let n = self.n() as f64;
        (0..=self.n()).map(|i| a + (b - a) * i as f64 / n).collect()
    }

    /// `Σ_{i=1}^{N-1} u(i)²`.
    pub fn interior_norm_sq(&self) -> f64 {
        self.interior().iter().map(|v| v * v).sum()
    }
}

/// Solves `∂_t u = c Δ_D u` on `⟦1,N-1⟧` with the boundary of `u0` held
/// fixed: the harmonic profile is subtracted, the remainder expanded in the
/// sine modes, and mode `j` damped by `exp(-2 c γ_j t)`.
pub fn heat_solve(u0: &HeightField, t: f64, c: f64) -> Result<HeightField> {
    if !(t >= 0.0) {
        return Err(out_of_range("t", format!("{t} < 0")));
    }
    if !(c >= 0.0) {
        return Err(out_of_range("diffusivity", format!("{c} < 0")));
    }
    let n = u0.n();
    let phi = u0.harmonic();
    let w: Vec<f64> = (0..=n).map(|i| u0.values[i] - phi[i]).collect();
    let scale = 2.0 / n as f64;
    let coeffs: Vec<f64> = (1..n)
        .map(|j| {
            let a: f64 = (1..n).map(|i| w[i] * sine_index(i * j, n)).sum::<f64>() * scale;
            a * (-2.0 * c * gamma(n, j) * t).exp()
        })
        .collect();
    let mut values = phi;
    for (i, v) in values.iter_mut().enumerate().take(n).skip(1) {
        *v += coeffs
            .iter()
            .enumerate()
            .map(|(jm1, a)| a * sine_index(i * (jm1 + 1), n))
            .sum::<f64>();
    }
    Ok(HeightField { values })
}
