//! Monotone grand couplings, coupling times and coupling from the past.

mod cftp;
mod ensemble;
mod refined;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cftp::{cftp_sample, cftp_sample_replica, cftp_sample_with, CftpSchedule};
pub use ensemble::{coupled_step_graphical, CoupledEnsemble};
pub use refined::coupled_step_refined;

use crate::dynamics::{stream_rng, AnyState, ChainState, EventStream, Lane};
use crate::error::{out_of_range, Error, Result};
use crate::states::{height_map, ChainSpec, LatticePath, SimplexPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingMode {
    /// Every chain uses the same `(site, mark)`.
    Graphical,
    /// Shared marks where two paths agree, independent marks elsewhere.
    Refined,
}

impl fmt::Display for CouplingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CouplingMode::Graphical => "graphical",
            CouplingMode::Refined => "refined",
        })
    }
}

impl FromStr for CouplingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graphical" => Ok(CouplingMode::Graphical),
            "refined" => Ok(CouplingMode::Refined),
            other => Err(Error::Parse(format!("unknown coupling mode `{other}`"))),
        }
    }
}

/// Outcome of one coupled run. `tau == None` means no coalescence by `t_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CouplingReport {
    pub tau: Option<f64>,
    pub events_used: u64,
    pub mode: CouplingMode,
}

impl CouplingReport {
    pub fn censored(&self) -> bool {
        self.tau.is_none()
    }

    /// Whether the chains were still apart at time `t`.
    pub fn exceeds(&self, t: f64) -> bool {
        self.tau.is_none_or(|tau| tau > t)
    }
}

/// `20 N² ln N` for symmetric models, `20 N / ϱ` for biased ones.
pub fn default_t_max(spec: &ChainSpec) -> f64 {
    let n = spec.n() as f64;
    if spec.is_symmetric() {
        20.0 * n * n * n.ln().max(1.0)
    } else {
        20.0 * n / spec.rho()
    }
}

fn graphical_typed<S: ChainState>(
    mut a: S,
    mut b: S,
    p: f64,
    mut stream: EventStream,
    t_max: f64,
) -> (Option<f64>, u64) {
    let mut mismatch = a.mismatch(&b);
    if mismatch == 0 {
        return (Some(0.0), 0);
    }
    let mut used = 0u64;
    loop {
        let e = stream.next_event();
        if e.time > t_max {
            return (None, used);
        }
        used += 1;
        let before = a.local_mismatch(&b, e.site);
        a.apply(e.site, e.mark, p);
        b.apply(e.site, e.mark, p);
        mismatch = mismatch + a.local_mismatch(&b, e.site) - before;
        if mismatch == 0 {
            return (Some(e.time), used);
        }
    }
}

/// Graphical coupling of two simplex walks.
///
/// With a shared mark, `x_i` of the two walks becomes equal exactly when
/// both neighbours already agree, so agreement is tracked by that rule
/// instead of comparing floats: once the gap drops below one ulp, rounding
/// would merge coordinates that differ in exact arithmetic.
fn simplex_graphical(
    mut a: SimplexPoint,
    mut b: SimplexPoint,
    mut stream: EventStream,
    t_max: f64,
) -> (Option<f64>, u64) {
    let n = a.n();
    let mut equal: Vec<bool> = (0..=n).map(|i| a.coord(i) == b.coord(i)).collect();
    let mut apart = equal.iter().filter(|&&e| !e).count();
    if apart == 0 {
        return (Some(0.0), 0);
    }
    let mut used = 0u64;
    loop {
        let e = stream.next_event();
        if e.time > t_max {
            return (None, used);
        }
        used += 1;
        a.apply(e.site, e.mark, 0.5);
        b.apply(e.site, e.mark, 0.5);
        let now = equal[e.site - 1] && equal[e.site + 1];
        if now != equal[e.site] {
            equal[e.site] = now;
            if now {
                apart -= 1;
            } else {
                apart += 1;
            }
        }
        if apart == 0 {
            return (Some(e.time), used);
        }
    }
}

fn refined_paths<R: Rng>(
    mut lower: LatticePath,
    mut upper: LatticePath,
    p: f64,
    mut stream: EventStream,
    mut marks: R,
    t_max: f64,
) -> (Option<f64>, u64) {
    let mut mismatch = lower.mismatch(&upper);
    if mismatch == 0 {
        return (Some(0.0), 0);
    }
    let mut used = 0u64;
    loop {
        let e = stream.next_event();
        if e.time > t_max {
            return (None, used);
        }
        used += 1;
        let before = lower.local_mismatch(&upper, e.site);
        let independent = if refined::shares_mark(&lower, &upper, e.site) {
            e.mark
        } else {
            marks.random::<f64>()
        };
        refined::refined_update(&mut lower, &mut upper, e.site, e.mark, independent, p);
        mismatch = mismatch + lower.local_mismatch(&upper, e.site) - before;
        if mismatch == 0 {
            return (Some(e.time), used);
        }
    }
}

fn as_path(state: &AnyState) -> Option<LatticePath> {
    match state {
        AnyState::Path(z) => Some(z.clone()),
        AnyState::Exclusion(xi) => Some(height_map(xi)),
        _ => None,
    }
}

/// Coupling time of replica `replica` of `seed`.
pub fn coupling_time_replica(
    spec: &ChainSpec,
    init1: &AnyState,
    init2: &AnyState,
    seed: u64,
    replica: u64,
    t_max: Option<f64>,
    mode: CouplingMode,
) -> Result<CouplingReport> {
    init1.check_for(spec)?;
    init2.check_for(spec)?;
    let t_max = t_max.unwrap_or_else(|| default_t_max(spec));
    if !(t_max >= 0.0) {
        return Err(out_of_range("t_max", format!("{t_max}")));
    }
    let (lower, upper) = if init1.partial_le(init2)? {
        (init1, init2)
    } else if init2.partial_le(init1)? {
        (init2, init1)
    } else if mode == CouplingMode::Refined {
        return Err(Error::Incomparable);
    } else {
        (init1, init2)
    };
    let stream = EventStream::for_replica(spec.sites(), seed, replica);
    let p = spec.p();
    let (tau, events_used) = match mode {
        CouplingMode::Graphical => match (lower.clone(), upper.clone()) {
            (AnyState::Permutation(a), AnyState::Permutation(b)) => {
                graphical_typed(a, b, p, stream, t_max)
            }
            (AnyState::Exclusion(a), AnyState::Exclusion(b)) => {
                graphical_typed(a, b, p, stream, t_max)
            }
            (AnyState::Path(a), AnyState::Path(b)) => graphical_typed(a, b, p, stream, t_max),
            (AnyState::Simplex(a), AnyState::Simplex(b)) => {
                simplex_graphical(a, b, stream, t_max)
            }
            _ => unreachable!("both states were checked against the spec"),
        },
        CouplingMode::Refined => {
            let (Some(a), Some(b)) = (as_path(lower), as_path(upper)) else {
                return Err(Error::WrongModel {
                    model: spec.model().to_string(),
                });
            };
            let marks = stream_rng(seed, replica, Lane::IndependentMarks);
            refined_paths(a, b, p, stream, marks, t_max)
        }
    };
    Ok(CouplingReport {
        tau,
        events_used,
        mode,
    })
}

/// First time the coupled trajectories from `init1` and `init2` agree.
///
/// The pair is swapped if `init2 ≤ init1`. Incomparable pairs still run in
/// graphical mode but are rejected in refined mode. `t_max` defaults to
/// [`default_t_max`].
pub fn coupling_time(
    spec: &ChainSpec,
    init1: &AnyState,
    init2: &AnyState,
    seed: u64,
    t_max: Option<f64>,
    mode: CouplingMode,
) -> Result<CouplingReport> {
    coupling_time_replica(spec, init1, init2, seed, 0, t_max, mode)
}

/// Replicas `0..replicas`, in replica order regardless of scheduling.
pub fn coupling_batch(
    spec: &ChainSpec,
    init1: &AnyState,
    init2: &AnyState,
    seed: u64,
    replicas: u64,
    t_max: Option<f64>,
    mode: CouplingMode,
) -> Result<Vec<CouplingReport>> {
    (0..replicas)
        .into_par_iter()
        .map(|r| coupling_time_replica(spec, init1, init2, seed, r, t_max, mode))
        .collect()
}

/// CSV `replica,mode,tau,censored`; censored rows carry `t_max` as `tau`.
pub fn write_coupling_csv<W: Write>(
    out: &mut W,
    reports: &[CouplingReport],
    t_max: f64,
) -> std::io::Result<()> {
    writeln!(out, "# mixlab-v1")?;
    writeln!(out, "replica,mode,tau,censored")?;
    for (r, rep) in reports.iter().enumerate() {
        writeln!(
            out,
            "{r},{},{},{}",
            rep.mode,
            rep.tau.unwrap_or(t_max),
            rep.censored() as u8
        )?;
    }
    Ok(())
}
