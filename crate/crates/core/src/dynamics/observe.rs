use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ChainState;
use crate::error::{Error, Result};

/// Statistics an observer can record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Statistic {
    /// Heights on `⟦0,N⟧`.
    HeightProfile,
    /// Occupations on `⟦1,N⟧` (particle models only).
    DensityProfile,
    /// `Φ = Σ_i sin(iπ/N) h(i)`, projection on the slowest Dirichlet mode.
    Phi,
    /// `W = Σ_i λ^{h(i)/2}`.
    W,
}

/// Sample times (sorted) and the statistic to evaluate at each.
#[derive(Clone, Debug, PartialEq)]
pub struct ObserverHook {
    pub times: Vec<f64>,
    pub statistic: Statistic,
}

/// `per_hook[h][j]` is the value of hook `h` at its `j`-th sample time.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Observations {
    pub per_hook: Vec<Vec<Vec<f64>>>,
}

impl Observations {
    pub(crate) fn empty(hooks: &[ObserverHook]) -> Self {
        Self {
            per_hook: hooks.iter().map(|h| vec![Vec::new(); h.times.len()]).collect(),
        }
    }
}

/// `Σ_{i=1}^{N-1} sin(iπ/N) profile[i]` for a profile indexed by `⟦0,N⟧`.
pub fn slowest_mode_statistic(profile: &[f64]) -> f64 {
    let n = profile.len() - 1;
    (1..n)
        .map(|i| (i as f64 * PI / n as f64).sin() * profile[i])
        .sum()
}

pub fn observe<S: ChainState>(stat: Statistic, state: &S, lambda: f64) -> Result<Vec<f64>> {
    Ok(match stat {
        Statistic::HeightProfile => state.height_profile(),
        Statistic::DensityProfile => state.occupation().ok_or(Error::ModelUnsupported {
            model: "non-particle state".into(),
            operation: "density profile",
        })?,
        Statistic::Phi => vec![slowest_mode_statistic(&state.height_profile())],
        Statistic::W => {
            let h = state.height_profile();
            let n = h.len() - 1;
            vec![(1..n).map(|i| lambda.powf(h[i] / 2.0)).sum()]
        }
    })
}
