//! Monotone coupling from the past.
//!
//! Time `(-∞, 0]` is cut into blocks of fixed length `L`; block `b` covers
//! `[-(b+1)L, -bL)` and its events come from a dedicated random lane. A run
//! from `-BL` starts the bottom and top states there and applies blocks
//! `B-1, …, 0`. The events of a block never depend on `B`, so once the
//! sandwich coalesces the output is the same for every longer lookback,
//! whatever schedule was used to reach it.

use super::default_t_max;
use crate::dynamics::{stream_rng, AnyState, ChainState, EventStream, Extreme, Lane};
use crate::error::{Error, Result};
use crate::states::ChainSpec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CftpSchedule {
    /// Block length `L`.
    pub block_time: f64,
    /// Number of blocks of the first attempt.
    pub initial_blocks: u64,
    /// Factor applied to the block count after each failed attempt (≥ 2).
    pub growth: u64,
    /// Longest lookback `BL` allowed before reporting `Timeout`.
    pub max_lookback: f64,
}

impl CftpSchedule {
    /// Blocks of length `N`, doubling, capped at the default coupling timeout.
    pub fn for_spec(spec: &ChainSpec) -> Self {
        Self {
            block_time: spec.n() as f64,
            initial_blocks: 1,
            growth: 2,
            max_lookback: default_t_max(spec),
        }
    }
}

struct Blocks {
    sites: usize,
    seed: u64,
    replica: u64,
    length: f64,
    events: Vec<Vec<(usize, f64)>>,
}

impl Blocks {
    fn ensure(&mut self, count: usize) {
        while self.events.len() < count {
            let b = self.events.len() as u64;
            let rng = stream_rng(self.seed, self.replica, Lane::Cftp(b));
            let mut stream = EventStream::new(self.sites, rng);
            let mut block = Vec::new();
            loop {
                let e = stream.next_event();
                if e.time >= self.length {
                    break;
                }
                block.push((e.site, e.mark));
            }
            self.events.push(block);
        }
    }
}

fn run_typed<S: ChainState>(
    bottom: S,
    top: S,
    p: f64,
    blocks: &mut Blocks,
    schedule: &CftpSchedule,
) -> Result<S> {
    let mut count = schedule.initial_blocks.max(1);
    let mut attempted = false;
    loop {
        let lookback = count as f64 * schedule.block_time;
        if attempted && lookback > schedule.max_lookback {
            return Err(Error::Timeout { lookback });
        }
        attempted = true;
        blocks.ensure(count as usize);
        let mut lo = bottom.clone();
        let mut hi = top.clone();
        let mut mismatch = lo.mismatch(&hi);
        for b in (0..count as usize).rev() {
            for &(site, mark) in &blocks.events[b] {
                if mismatch == 0 {
                    hi.apply(site, mark, p);
                    continue;
                }
                let before = lo.local_mismatch(&hi, site);
                lo.apply(site, mark, p);
                hi.apply(site, mark, p);
                mismatch = mismatch + hi.local_mismatch(&lo, site) - before;
            }
        }
        if mismatch == 0 {
            return Ok(hi);
        }
        count = count.saturating_mul(schedule.growth.max(2));
    }
}

/// Exact stationary sample by monotone CFTP from the `(∨, ∧)` sandwich.
pub fn cftp_sample(spec: &ChainSpec, seed: u64) -> Result<AnyState> {
    cftp_sample_replica(spec, seed, 0)
}

pub fn cftp_sample_replica(spec: &ChainSpec, seed: u64, replica: u64) -> Result<AnyState> {
    cftp_sample_with(spec, seed, replica, &CftpSchedule::for_spec(spec))
}

pub fn cftp_sample_with(
    spec: &ChainSpec,
    seed: u64,
    replica: u64,
    schedule: &CftpSchedule,
) -> Result<AnyState> {
    if !spec.model().is_discrete() {
        return Err(Error::WrongModel {
            model: spec.model().to_string(),
        });
    }
    if !(schedule.block_time > 0.0) {
        return Err(crate::error::out_of_range("block_time", format!("{}", schedule.block_time)));
    }
    let mut blocks = Blocks {
        sites: spec.sites(),
        seed,
        replica,
        length: schedule.block_time,
        events: Vec::new(),
    };
    let bottom = AnyState::extremal(spec, Extreme::Bottom)?;
    let top = AnyState::extremal(spec, Extreme::Top)?;
    let p = spec.p();
    Ok(match (bottom, top) {
        (AnyState::Permutation(a), AnyState::Permutation(b)) => {
            AnyState::Permutation(run_typed(a, b, p, &mut blocks, schedule)?)
        }
        (AnyState::Exclusion(a), AnyState::Exclusion(b)) => {
            AnyState::Exclusion(run_typed(a, b, p, &mut blocks, schedule)?)
        }
        (AnyState::Path(a), AnyState::Path(b)) => {
            AnyState::Path(run_typed(a, b, p, &mut blocks, schedule)?)
        }
        _ => unreachable!("extremal states share the model's representation"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::height_map;

    #[test]
    fn output_ignores_the_schedule() {
        let spec = ChainSpec::asep(8, 3, 0.7).unwrap();
        for replica in 0..20 {
            let a = cftp_sample_replica(&spec, 5, replica).unwrap();
            let mut s = CftpSchedule::for_spec(&spec);
            s.initial_blocks = 3;
            s.growth = 3;
            let b = cftp_sample_with(&spec, 5, replica, &s).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn corner_flip_is_pushforward_of_exclusion() {
        let ex = ChainSpec::asep(6, 3, 0.8).unwrap();
        let cf = ChainSpec::biased_corner_flip(6, 3, 0.8).unwrap();
        for r in 0..20 {
            let AnyState::Exclusion(xi) = cftp_sample_replica(&ex, 9, r).unwrap() else {
                panic!()
            };
            let AnyState::Path(z) = cftp_sample_replica(&cf, 9, r).unwrap() else {
                panic!()
            };
            assert_eq!(height_map(&xi), z);
        }
    }

    #[test]
    fn timeout_reported() {
        let spec = ChainSpec::ssep(30, 15).unwrap();
        let s = CftpSchedule {
            block_time: 0.01,
            initial_blocks: 1,
            growth: 2,
            max_lookback: 0.1,
        };
        assert!(matches!(
            cftp_sample_with(&spec, 1, 0, &s),
            Err(Error::Timeout { .. })
        ));
        assert!(cftp_sample(&ChainSpec::simplex(3).unwrap(), 1).is_err());
    }
}
