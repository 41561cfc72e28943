use crate::dynamics::{ChainState, UpdateEvent};
use crate::error::{Error, Result};
use crate::states::ChainSpec;

/// A family of chains driven by one event stream: the grand coupling.
#[derive(Clone, Debug)]
pub struct CoupledEnsemble<S> {
    spec: ChainSpec,
    states: Vec<S>,
}

impl<S: ChainState> CoupledEnsemble<S> {
    pub fn new(spec: ChainSpec, states: Vec<S>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::ShapeMismatch("empty ensemble".into()));
        }
        if let Some(s) = states.iter().find(|s| s.size() != spec.n()) {
            return Err(Error::ShapeMismatch(format!(
                "member of size {} in ensemble for N = {}",
                s.size(),
                spec.n()
            )));
        }
        Ok(Self { spec, states })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn into_states(self) -> Vec<S> {
        self.states
    }

    /// Applies the same `(site, mark)` to every member.
    #[inline]
    pub fn step_graphical(&mut self, event: &UpdateEvent) {
        let p = self.spec.p();
        for s in &mut self.states {
            s.apply(event.site, event.mark, p);
        }
    }

    pub fn all_equal(&self) -> bool {
        self.states.windows(2).all(|w| w[0] == w[1])
    }

    /// Whether `states[i] ≤ states[j]` for every `i < j`.
    pub fn is_chain_ordered(&self) -> Result<bool> {
        for i in 0..self.states.len() {
            for j in i + 1..self.states.len() {
                if !self.states[i].partial_le(&self.states[j])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// One graphical step of the whole ensemble.
pub fn coupled_step_graphical<S: ChainState>(
    mut ensemble: CoupledEnsemble<S>,
    event: &UpdateEvent,
) -> CoupledEnsemble<S> {
    ensemble.step_graphical(event);
    ensemble
}
