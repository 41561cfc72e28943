use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

/// One ring of a site clock: at `time`, site `site ∈ ⟦1,N-1⟧` is updated
/// with mark `mark ∈ [0,1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpdateEvent {
    pub time: f64,
    pub site: usize,
    pub mark: f64,
}

/// Named random lanes; each replica gets an independent ChaCha stream per lane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lane {
    Events,
    IndependentMarks,
    Stationary,
    Cftp(u64),
}

impl Lane {
    fn tag(self) -> u64 {
        match self {
            Lane::Events => 0,
            Lane::IndependentMarks => 1,
            Lane::Stationary => 2,
            Lane::Cftp(block) => 1024 + block,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic generator for `(seed, replica, lane)`; streams for distinct
/// replicas or lanes never overlap.
pub fn stream_rng(seed: u64, replica: u64, lane: Lane) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(lane.tag())));
    rng.set_stream(replica);
    rng
}

/// The superposition of `N-1` independent rate-1 site clocks, generated as
/// one rate-`(N-1)` clock with a uniformly chosen site per ring.
#[derive(Clone, Debug)]
pub struct EventStream {
    rng: ChaCha8Rng,
    sites: usize,
    rate: f64,
    time: f64,
}

impl EventStream {
    pub fn new(sites: usize, rng: ChaCha8Rng) -> Self {
        Self::starting_at(sites, rng, 0.0)
    }

    pub fn starting_at(sites: usize, rng: ChaCha8Rng, time: f64) -> Self {
        assert!(sites >= 1, "need at least one site clock");
        Self {
            rng,
            sites,
            rate: sites as f64,
            time,
        }
    }

    /// Stream for replica `replica` of a run seeded with `seed`.
    pub fn for_replica(sites: usize, seed: u64, replica: u64) -> Self {
        Self::new(sites, stream_rng(seed, replica, Lane::Events))
    }

    /// Time of the last generated event.
    pub fn time(&self) -> f64 {
        self.time
    }

    #[inline]
    pub fn next_event(&mut self) -> UpdateEvent {
        let gap: f64 = self.rng.sample(Exp1);
        self.time += gap / self.rate;
        let site = self.rng.random_range(1..=self.sites);
        let mark: f64 = self.rng.random();
        UpdateEvent {
            time: self.time,
            site,
            mark,
        }
    }
}

impl Iterator for EventStream {
    type Item = UpdateEvent;

    fn next(&mut self) -> Option<UpdateEvent> {
        Some(self.next_event())
    }
}
