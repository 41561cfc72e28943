use serde::Serialize;

use super::config::ExperimentConfig;
use super::estimate::{estimate_distance_lower, estimate_distance_upper};
use super::grid::TimeGrid;
use crate::error::{Error, Result};
use crate::exact::{state_space_size, ExactChain};
use crate::states::{ChainSpec, Model};

/// Leading-order mixing time predicted for large `N`.
pub fn theory_mixing_time(spec: &ChainSpec) -> f64 {
    let n = spec.n() as f64;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    match spec.model() {
        Model::Ssep | Model::CornerFlip => {
            let k = spec.k().unwrap_or(1);
            let m = k.min(spec.n() - k).max(1) as f64;
            n * n * m.ln() / pi2
        }
        Model::Asep | Model::BiasedCornerFlip => {
            let alpha = spec.k().unwrap_or(0) as f64 / n;
            (alpha.sqrt() + (1.0 - alpha).sqrt()).powi(2) * n / (2.0 * spec.p() - 1.0)
        }
        Model::BiasedInterchange => 2.0 * n / (2.0 * spec.p() - 1.0),
        Model::Interchange | Model::SimplexRw => n * n * n.ln() / pi2,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CutoffRecord {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: Option<usize>,
    pub t_half_lower: Option<f64>,
    pub t_half_upper: Option<f64>,
    pub theory: f64,
    /// `T_mix(ε) / T_mix(1-ε)` when the state space is small enough.
    pub exact_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutoffScanResult {
    pub model: Model,
    pub eps: (f64, f64),
    pub records: Vec<CutoffRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffOptions {
    /// Bias for biased models; ignored by symmetric ones.
    pub p: f64,
    /// Particle density `k / N` for particle models.
    pub density: f64,
    pub upper_replicas: u64,
    pub lower_replicas: u64,
    /// Grid points per curve.
    pub points: usize,
    /// Grid end as a multiple of the theory value.
    pub horizon: f64,
    /// Largest state space for which the exact ratio is computed.
    pub exact_limit: u128,
    /// Run the Monte-Carlo estimators (otherwise only the exact ratio).
    pub monte_carlo: bool,
}

impl Default for CutoffOptions {
    fn default() -> Self {
        Self {
            p: 0.8,
            density: 0.5,
            upper_replicas: 200,
            lower_replicas: 400,
            points: 40,
            horizon: 4.0,
            exact_limit: 20_000,
            monte_carlo: true,
        }
    }
}

fn spec_for(model: Model, n: usize, opts: &CutoffOptions) -> Result<ChainSpec> {
    let k = model
        .has_particles()
        .then(|| ((opts.density * n as f64).round() as usize).clamp(1, n.saturating_sub(1).max(1)));
    let p = if model.is_biased() { opts.p } else { 0.5 };
    ChainSpec::new(model, n, k, p)
}

/// Half-crossing times of the estimated `d(t)` and the theory value for
/// each `N`, with default options.
pub fn cutoff_scan(model: Model, n_list: &[usize], eps: (f64, f64), seed: u64) -> Result<CutoffScanResult> {
    cutoff_scan_with(model, n_list, eps, seed, &CutoffOptions::default())
}

pub fn cutoff_scan_with(
    model: Model,
    n_list: &[usize],
    eps: (f64, f64),
    seed: u64,
    opts: &CutoffOptions,
) -> Result<CutoffScanResult> {
    if n_list.is_empty() {
        return Err(Error::Config("empty N list".into()));
    }
    for e in [eps.0, eps.1] {
        if !(e > 0.0 && e < 1.0) {
            return Err(crate::error::out_of_range("eps", format!("{e}")));
        }
    }
    let mut records = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let spec = spec_for(model, n, opts)?;
        let theory = theory_mixing_time(&spec);
        let exact_ratio = if model.is_discrete() && state_space_size(&spec)? <= opts.exact_limit {
            let chain = ExactChain::new(&spec)?;
            Some(chain.mixing_time(eps.0)? / chain.mixing_time(eps.1)?)
        } else {
            None
        };
        let (mut t_half_lower, mut t_half_upper) = (None, None);
        if opts.monte_carlo {
            let grid = TimeGrid::linspace(0.0, opts.horizon * theory.max(1.0), opts.points)?;
            let mut lower = ExperimentConfig::new(spec.clone(), grid.clone(), opts.lower_replicas, seed)?;
            lower.stop_below = Some(0.5);
            t_half_lower = estimate_distance_lower(&lower)?.half_crossing();
            if model.is_discrete() {
                let upper = ExperimentConfig::new(spec.clone(), grid, opts.upper_replicas, seed)?;
                t_half_upper = estimate_distance_upper(&upper)?.half_crossing();
            }
        }
        records.push(CutoffRecord {
            n,
            k: spec.k(),
            t_half_lower,
            t_half_upper,
            theory,
            exact_ratio,
        });
    }
    Ok(CutoffScanResult { model, eps, records })
}
