//! Monte-Carlo bounds on `d(t)`.
//!
//! The upper estimate uses the monotone sandwich: every start lies between
//! `∨` and `∧`, so `d(t) ≤ P[τ(∨,∧) > t] + P[τ(π,∧) > t]` with `π` a
//! stationary sample driven by the same clocks. The lower estimate is the
//! total-variation distance between binned laws of the slowest-mode
//! statistic `Φ`, which cannot exceed `d(t)` because TV contracts under
//! mappings.

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::stats::wilson_half_width;
use crate::coupling::{cftp_sample_replica, coupling_time_replica, CouplingMode};
use crate::dynamics::{
    sample_stationary_direct, slowest_mode_statistic, AnyState, ChainState, EventStream, Extreme,
    Trajectory,
};
use crate::error::{Error, Result};
use crate::exact::{CurveKind, DistanceCurve};
use crate::states::ChainSpec;

/// Runs `body` with `$s` bound to the concrete state inside an [`AnyState`].
macro_rules! with_state {
    ($state:expr, $s:ident => $body:expr) => {
        match $state {
            AnyState::Permutation($s) => $body,
            AnyState::Exclusion($s) => $body,
            AnyState::Path($s) => $body,
            AnyState::Simplex($s) => $body,
        }
    };
}

/// Exact stationary sample for `replica`: direct for symmetric models,
/// coupling from the past otherwise.
pub fn stationary_sample(spec: &ChainSpec, seed: u64, replica: u64) -> Result<AnyState> {
    if spec.is_symmetric() {
        sample_stationary_direct(spec, seed, replica)
    } else {
        cftp_sample_replica(spec, seed, replica)
    }
}

/// Advances `replicas` independent copies started at `start` through
/// `times`, handing the observed values at each time to `visit`, which
/// returns `false` to stop early.
pub(crate) fn sweep<S, T, F, V>(
    start: &S,
    spec: &ChainSpec,
    seed: u64,
    replicas: u64,
    times: &[f64],
    observe: F,
    mut visit: V,
) where
    S: ChainState,
    T: Send,
    F: Fn(&S) -> T + Sync,
    V: FnMut(Vec<T>) -> bool,
{
    let p = spec.p();
    let sites = spec.sites();
    let mut trajs: Vec<Trajectory<S>> = (0..replicas)
        .map(|r| Trajectory::new(start.clone(), p, EventStream::for_replica(sites, seed, r)))
        .collect();
    for &t in times {
        let values: Vec<T> = trajs
            .par_iter_mut()
            .map(|tr| {
                tr.advance_to(t);
                observe(tr.state())
            })
            .collect();
        if !visit(values) {
            break;
        }
    }
}

fn check_config(config: &ExperimentConfig) -> Result<()> {
    if config.replicas == 0 {
        return Err(Error::Config("replicas must be >= 1".into()));
    }
    Ok(())
}

/// `t ↦ P̂[τ₁ > t] + P̂[τ₂ > t]`, capped at 1, where `τ₁` couples `(∨, ∧)`
/// and `τ₂` couples a stationary sample with `∧`. The standard error is the
/// sum of the two Wilson half-widths at `z = 1`.
pub fn estimate_distance_upper(config: &ExperimentConfig) -> Result<DistanceCurve> {
    check_config(config)?;
    let spec = &config.spec;
    if !spec.model().is_discrete() {
        return Err(Error::ModelUnsupported {
            model: spec.model().to_string(),
            operation: "the upper distance estimate",
        });
    }
    let bottom = AnyState::extremal(spec, Extreme::Bottom)?;
    let top = AnyState::extremal(spec, Extreme::Top)?;
    let t_max = Some(config.grid.last());
    let taus: Vec<(Option<f64>, Option<f64>)> = (0..config.replicas)
        .into_par_iter()
        .map(|r| {
            let t1 = coupling_time_replica(
                spec,
                &bottom,
                &top,
                config.seed,
                r,
                t_max,
                CouplingMode::Graphical,
            )?;
            let pi = stationary_sample(spec, config.seed, r)?;
            let t2 =
                coupling_time_replica(spec, &pi, &top, config.seed, r, t_max, CouplingMode::Graphical)?;
            Ok((t1.tau, t2.tau))
        })
        .collect::<Result<_>>()?;
    let n = config.replicas;
    let mut values = Vec::with_capacity(config.grid.len());
    let mut errors = Vec::with_capacity(config.grid.len());
    for &t in config.grid.times() {
        let exceeds = |tau: Option<f64>| tau.is_none_or(|x| x > t);
        let a = taus.iter().filter(|(t1, _)| exceeds(*t1)).count() as u64;
        let b = taus.iter().filter(|(_, t2)| exceeds(*t2)).count() as u64;
        values.push(((a + b) as f64 / n as f64).min(1.0));
        errors.push(wilson_half_width(a, n, 1.0) + wilson_half_width(b, n, 1.0));
    }
    Ok(DistanceCurve {
        times: config.grid.times().to_vec(),
        values,
        kind: CurveKind::UpperEstimate,
        std_errors: Some(errors),
    })
}

/// Interior quantile cut points of `sample` for `bins` equal-probability
/// bins, with duplicates removed.
fn bin_edges(sample: &[f64], bins: usize) -> Vec<f64> {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let mut edges: Vec<f64> = (1..bins).map(|j| sorted[(j * m / bins).min(m - 1)]).collect();
    edges.dedup();
    edges
}

fn histogram(values: &[f64], edges: &[f64]) -> Vec<f64> {
    let mut counts = vec![0.0; edges.len() + 1];
    for v in values {
        counts[edges.partition_point(|e| e < v)] += 1.0;
    }
    let n = values.len() as f64;
    counts.iter_mut().for_each(|c| *c /= n);
    counts
}

/// Plug-in TV distance between binned laws of `Φ` from the bottom state and
/// from stationary samples, minus `½(√(B/R) + √(B/M))` for `B` distinct
/// bins, `R` replicas and `M` stationary samples; clamped at 0.
pub fn estimate_distance_lower(config: &ExperimentConfig) -> Result<DistanceCurve> {
    check_config(config)?;
    if config.bins == 0 {
        return Err(Error::Config("bins must be >= 1".into()));
    }
    let spec = &config.spec;
    let m = config.stationary_count().max(1);
    // Stationary samples live on their own lanes, so reusing the seed keeps
    // them independent of the trajectories.
    let stationary: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|r| {
            stationary_sample(spec, config.seed, r)
                .map(|s| slowest_mode_statistic(&s.height_profile()))
        })
        .collect::<Result<_>>()?;
    let edges = bin_edges(&stationary, config.bins);
    let reference = histogram(&stationary, &edges);
    let b = (edges.len() + 1) as f64;
    let r = config.replicas as f64;
    let allowance = 0.5 * ((b / r).sqrt() + (b / m as f64).sqrt());
    let sigma = 0.5 * (1.0 / r + 1.0 / m as f64).sqrt();

    let mut values = Vec::with_capacity(config.grid.len());
    let visit = |phis: Vec<f64>| {
        let law = histogram(&phis, &edges);
        let tv = 0.5 * law.iter().zip(&reference).map(|(a, b)| (a - b).abs()).sum::<f64>();
        let v = (tv - allowance).max(0.0);
        values.push(v);
        config.stop_below.is_none_or(|level| v > level)
    };
    let start = AnyState::extremal(spec, Extreme::Bottom)?;
    with_state!(&start, s => sweep(
        s,
        spec,
        config.seed,
        config.replicas,
        config.grid.times(),
        |x| slowest_mode_statistic(&x.height_profile()),
        visit,
    ));
    let len = values.len();
    Ok(DistanceCurve {
        times: config.grid.times()[..len].to_vec(),
        values,
        kind: CurveKind::LowerEstimate,
        std_errors: Some(vec![sigma; len]),
    })
}
