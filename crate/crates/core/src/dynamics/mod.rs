//! Continuous-time simulation through the graphical construction: each site
//! `i ∈ ⟦1,N-1⟧` carries a rate-1 Poisson clock and a sequence of uniform
//! marks, and every ring applies one local update.

mod events;
mod observe;
mod state;
mod stationary;
mod trajectory;

use std::fmt;

pub use events::{stream_rng, EventStream, Lane, UpdateEvent};
pub use observe::{observe, slowest_mode_statistic, ObserverHook, Observations, Statistic};
pub use state::ChainState;
pub use stationary::{
    sample_stationary_direct, sample_stationary_with, uniform_exclusion, uniform_permutation,
    uniform_simplex,
};
pub use trajectory::{read_trajectory, replay, write_trajectory, TrajectoryDump};

use crate::error::{out_of_range, Error, Result};
use crate::states::{
    extremal_paths, ChainSpec, ExclusionConfig, LatticePath, PartialOrderExt, Permutation,
    SimplexPoint, StateKind,
};

/// A state of any of the four representations.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyState {
    Permutation(Permutation),
    Exclusion(ExclusionConfig),
    Path(LatticePath),
    Simplex(SimplexPoint),
}

/// Which extremal state to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extreme {
    /// `∨`, packed-left particles, the reversal permutation, simplex at 0.
    Bottom,
    /// `∧`, packed-right particles, the identity, simplex at N.
    Top,
}

impl AnyState {
    pub fn kind(&self) -> StateKind {
        match self {
            AnyState::Permutation(_) => StateKind::Permutation,
            AnyState::Exclusion(_) => StateKind::Exclusion,
            AnyState::Path(_) => StateKind::Path,
            AnyState::Simplex(_) => StateKind::Simplex,
        }
    }

    /// Checks that the state belongs to the state space of `spec`.
    pub fn check_for(&self, spec: &ChainSpec) -> Result<()> {
        let kind = spec.model().state_kind();
        if self.kind() != kind {
            return Err(Error::ShapeMismatch(format!(
                "{:?} state given to model {}",
                self.kind(),
                spec.model()
            )));
        }
        let (n, k) = match self {
            AnyState::Permutation(s) => (s.len(), None),
            AnyState::Exclusion(s) => (s.len(), Some(s.particles())),
            AnyState::Path(s) => (s.n(), Some(s.k())),
            AnyState::Simplex(s) => (s.n(), None),
        };
        if n != spec.n() || k != spec.k() {
            return Err(Error::ShapeMismatch(format!(
                "state has N = {n}, k = {k:?}; spec has N = {}, k = {:?}",
                spec.n(),
                spec.k()
            )));
        }
        Ok(())
    }

    /// Parses the textual form used by the model's representation.
    pub fn parse(spec: &ChainSpec, text: &str) -> Result<Self> {
        let state = match spec.model().state_kind() {
            StateKind::Permutation => AnyState::Permutation(text.parse()?),
            StateKind::Exclusion => AnyState::Exclusion(text.parse()?),
            StateKind::Path => AnyState::Path(text.parse()?),
            StateKind::Simplex => AnyState::Simplex(text.parse()?),
        };
        state.check_for(spec)?;
        Ok(state)
    }

    /// The minimal or maximal state of the model's partial order.
    pub fn extremal(spec: &ChainSpec, which: Extreme) -> Result<Self> {
        let n = spec.n();
        let top = which == Extreme::Top;
        Ok(match spec.model().state_kind() {
            StateKind::Permutation => AnyState::Permutation(if top {
                Permutation::identity(n)
            } else {
                Permutation::reversal(n)
            }),
            StateKind::Exclusion => {
                let k = spec.particles()?;
                AnyState::Exclusion(if top {
                    ExclusionConfig::packed_right(n, k)?
                } else {
                    ExclusionConfig::packed_left(n, k)?
                })
            }
            StateKind::Path => {
                let (wedge, vee) = extremal_paths(n, spec.particles()?)?;
                AnyState::Path(if top { wedge } else { vee })
            }
            StateKind::Simplex => AnyState::Simplex(if top {
                SimplexPoint::packed_high(n)
            } else {
                SimplexPoint::packed_low(n)
            }),
        })
    }

    pub fn partial_le(&self, other: &Self) -> Result<bool> {
        match (self, other) {
            (AnyState::Permutation(a), AnyState::Permutation(b)) => a.partial_le(b),
            (AnyState::Exclusion(a), AnyState::Exclusion(b)) => a.partial_le(b),
            (AnyState::Path(a), AnyState::Path(b)) => a.partial_le(b),
            (AnyState::Simplex(a), AnyState::Simplex(b)) => a.partial_le(b),
            _ => Err(Error::ShapeMismatch("states of different kinds".into())),
        }
    }

    pub fn height_profile(&self) -> Vec<f64> {
        match self {
            AnyState::Permutation(s) => s.height_profile(),
            AnyState::Exclusion(s) => s.height_profile(),
            AnyState::Path(s) => s.height_profile(),
            AnyState::Simplex(s) => s.height_profile(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AnyState::Permutation(s) => s.validate(),
            AnyState::Exclusion(s) => ChainState::validate(s),
            AnyState::Path(s) => s.validate(),
            AnyState::Simplex(s) => s.validate(),
        }
    }
}

impl fmt::Display for AnyState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyState::Permutation(s) => s.fmt(f),
            AnyState::Exclusion(s) => s.fmt(f),
            AnyState::Path(s) => s.fmt(f),
            AnyState::Simplex(s) => s.fmt(f),
        }
    }
}

fn check_site(spec: &ChainSpec, site: usize) -> Result<()> {
    if site == 0 || site >= spec.n() {
        return Err(out_of_range(
            "site",
            format!("site {site} not in 1..={}", spec.n() - 1),
        ));
    }
    Ok(())
}

/// One update of `state` at `site` with `mark`, returned as a new state.
pub fn local_update(spec: &ChainSpec, state: &AnyState, site: usize, mark: f64) -> Result<AnyState> {
    state.check_for(spec)?;
    check_site(spec, site)?;
    if !(0.0..1.0).contains(&mark) {
        return Err(out_of_range("mark", format!("{mark} not in [0,1)")));
    }
    let p = spec.p();
    let mut next = state.clone();
    match &mut next {
        AnyState::Permutation(s) => {
            s.apply(site, mark, p);
        }
        AnyState::Exclusion(s) => {
            s.apply(site, mark, p);
        }
        AnyState::Path(s) => {
            s.apply(site, mark, p);
        }
        AnyState::Simplex(s) => {
            s.apply(site, mark, p);
        }
    }
    Ok(next)
}

/// A single chain driven by its own event stream. Observing at time `t`
/// sees every event with time `≤ t` (càdlàg convention).
#[derive(Clone, Debug)]
pub struct Trajectory<S> {
    state: S,
    p: f64,
    stream: EventStream,
    pending: UpdateEvent,
    events_applied: u64,
}

impl<S: ChainState> Trajectory<S> {
    pub fn new(state: S, p: f64, mut stream: EventStream) -> Self {
        let pending = stream.next_event();
        Self {
            state,
            p,
            stream,
            pending,
            events_applied: 0,
        }
    }

    /// Applies all events up to and including time `t`.
    pub fn advance_to(&mut self, t: f64) {
        while self.pending.time <= t {
            let e = self.pending;
            self.state.apply(e.site, e.mark, self.p);
            self.events_applied += 1;
            self.pending = self.stream.next_event();
        }
    }

    pub fn state(&self) -> &S {
        &self.state
    }

    pub fn into_state(self) -> S {
        self.state
    }

    pub fn events_applied(&self) -> u64 {
        self.events_applied
    }
}

fn run_typed<S: ChainState>(
    spec: &ChainSpec,
    init: S,
    t_end: f64,
    stream: EventStream,
    observers: &[ObserverHook],
) -> Result<(S, Observations)> {
    let mut schedule: Vec<(f64, usize, usize)> = observers
        .iter()
        .enumerate()
        .flat_map(|(h, hook)| hook.times.iter().enumerate().map(move |(j, &t)| (t, h, j)))
        .collect();
    schedule.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = Observations::empty(observers);
    let mut traj = Trajectory::new(init, spec.p(), stream);
    for (t, h, j) in schedule {
        if t > t_end {
            continue;
        }
        traj.advance_to(t);
        out.per_hook[h][j] = observe(observers[h].statistic, traj.state(), spec.lambda())?;
    }
    traj.advance_to(t_end);
    Ok((traj.into_state(), out))
}

/// Runs `spec` from `init` up to `t_end`, driven by replica `replica` of
/// `seed`, evaluating every observer at its sample times `≤ t_end`.
pub fn simulate_replica(
    spec: &ChainSpec,
    init: &AnyState,
    t_end: f64,
    seed: u64,
    replica: u64,
    observers: &[ObserverHook],
) -> Result<(AnyState, Observations)> {
    init.check_for(spec)?;
    if !(t_end >= 0.0) {
        return Err(out_of_range("t_end", format!("{t_end} < 0")));
    }
    for hook in observers {
        if hook.times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Config("observer sample times must be sorted".into()));
        }
    }
    let stream = EventStream::for_replica(spec.sites(), seed, replica);
    Ok(match init.clone() {
        AnyState::Permutation(s) => {
            let (s, o) = run_typed(spec, s, t_end, stream, observers)?;
            (AnyState::Permutation(s), o)
        }
        AnyState::Exclusion(s) => {
            let (s, o) = run_typed(spec, s, t_end, stream, observers)?;
            (AnyState::Exclusion(s), o)
        }
        AnyState::Path(s) => {
            let (s, o) = run_typed(spec, s, t_end, stream, observers)?;
            (AnyState::Path(s), o)
        }
        AnyState::Simplex(s) => {
            let (s, o) = run_typed(spec, s, t_end, stream, observers)?;
            (AnyState::Simplex(s), o)
        }
    })
}

/// `simulate_replica` for replica 0.
pub fn simulate(
    spec: &ChainSpec,
    init: &AnyState,
    t_end: f64,
    seed: u64,
    observers: &[ObserverHook],
) -> Result<(AnyState, Observations)> {
    simulate_replica(spec, init, t_end, seed, 0, observers)
}
