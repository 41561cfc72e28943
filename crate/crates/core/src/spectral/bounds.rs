use crate::error::{out_of_range, Error, Result};
use crate::states::{ChainSpec, StateKind};

use super::gamma;

/// A tail bound kept in log space: `λ^{N/2}` overflows binary64 long before
/// the interesting sizes for strongly biased chains.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    /// Natural log of the unclamped bound.
    pub log_raw: f64,
}

impl TailBound {
    /// The unclamped bound; `+∞` if it overflows.
    pub fn raw(&self) -> f64 {
        self.log_raw.exp()
    }

    pub fn overflowed(&self) -> bool {
        !self.raw().is_finite()
    }

    /// The bound as a probability, clamped to `[0,1]`.
    pub fn clamped(&self) -> f64 {
        self.raw().min(1.0)
    }
}

/// `ln` of the number of coalescence events the union bound pays for:
/// `k(N-1)` for exclusion and corner-flip chains, `(N-1)³` for the
/// interchange process (all `N-1` projections must couple).
fn log_prefactor(spec: &ChainSpec) -> Result<f64> {
    let n = spec.n() as f64;
    match spec.model().state_kind() {
        StateKind::Exclusion | StateKind::Path => {
            Ok((spec.particles()? as f64 * (n - 1.0)).ln())
        }
        StateKind::Permutation => Ok(3.0 * (n - 1.0).ln()),
        StateKind::Simplex => Err(Error::WrongModel {
            model: spec.model().to_string(),
        }),
    }
}

/// `(N/2 - 1) ln λ`, the exponential-observable penalty of biased chains.
fn log_bias_penalty(spec: &ChainSpec) -> f64 {
    (spec.n() as f64 / 2.0 - 1.0) * spec.lambda().ln()
}

/// Tail of the coupling time of two ordered chains started anywhere:
/// `k(N-1) e^{-γ_1 t}` (symmetric) or `k(N-1) λ^{N/2-1} e^{-ϱ t}` (biased).
pub fn coupling_tail_bound(spec: &ChainSpec, t: f64) -> Result<TailBound> {
    let mut log_raw = log_prefactor(spec)?;
    if spec.is_symmetric() {
        log_raw -= gamma(spec.n(), 1) * t;
    } else {
        log_raw += log_bias_penalty(spec) - spec.rho() * t;
    }
    Ok(TailBound { log_raw })
}

/// Upper bound on `T_mix(ε)` from the coupling tail bound:
/// `(1/γ_1) ln(2k(N-1)/ε)` or `(1/ϱ)[(N/2-1) ln λ + ln(2k(N-1)/ε)]`.
///
/// These are valid but not sharp: for the symmetric exclusion process the
/// bound is asymptotically `(2N²/π²)(log N + log k)`, up to a factor 4 above
/// the true mixing time, and for the biased case it grows like
/// `N ln λ / (2ϱ)` instead of `N (√α + √(1-α))² / (2p-1)`.
pub fn mixing_upper_bound(spec: &ChainSpec, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(out_of_range("eps", format!("{eps} not in (0,1)")));
    }
    let log_term = 2f64.ln() + log_prefactor(spec)? - eps.ln();
    Ok(if spec.is_symmetric() {
        log_term / gamma(spec.n(), 1)
    } else {
        (log_bias_penalty(spec) + log_term) / spec.rho()
    })
}

/// Decay factor of `Σ u(t,i)²` for `∂_t u = c Δ⁰_D u - ρ₀ u`:
/// `exp(-2(2cγ_1 + ρ₀) t)`. With `c = ½`, `ρ₀ = 0` this is `e^{-2γ_1 t}`.
pub fn contraction_envelope(n: usize, c: f64, rho0: f64, t: f64) -> f64 {
    (-2.0 * (2.0 * c * gamma(n, 1) + rho0) * t).exp()
}
