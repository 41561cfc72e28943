use crate::dynamics::AnyState;
use crate::error::{Error, Result};
use crate::states::{height_inverse, height_map, ChainSpec, ExclusionConfig, Permutation, StateKind};

/// Default cap on enumerated state-space sizes.
pub const DEFAULT_STATE_CAP: usize = 300_000;

/// Canonical, dense indexing of a discrete state space.
///
/// Exclusion configurations (and lattice paths through the height map) are
/// listed in colexicographic order of their bitmasks, permutations by
/// Lehmer code. Both orders have closed-form ranks, so lookups need no table.
#[derive(Clone, Debug)]
pub struct StateIndex {
    spec: ChainSpec,
    codes: Vec<u64>,
    binom: Vec<Vec<u64>>,
    factorials: Vec<u64>,
}

fn binomial_table(n: usize) -> Vec<Vec<u64>> {
    let mut c = vec![vec![0u64; n + 2]; n + 2];
    for i in 0..=n + 1 {
        c[i][0] = 1;
        for j in 1..=i {
            c[i][j] = c[i - 1][j - 1].saturating_add(if j < i { c[i - 1][j] } else { 0 });
        }
    }
    c
}

/// `|Ω|` without enumerating, as a `u128` so that `N!` cannot overflow early.
fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn state_space_size(spec: &ChainSpec) -> Result<u128> {
    let n = spec.n() as u128;
    match spec.model().state_kind() {
        StateKind::Exclusion | StateKind::Path => {
            let k = spec.particles()? as u128;
            // C(n, i+1) = C(n, i)·(n−i)/(i+1), with the division done first so
            // that an overflow means the binomial itself does not fit. Binomials
            // grow up to k = n/2, so saturating there is final.
            let k = k.min(n - k);
            let mut c: u128 = 1;
            for i in 0..k {
                let g = gcd(c, i + 1);
                match (c / g).checked_mul((n - i) / ((i + 1) / g)) {
                    Some(v) => c = v,
                    None => return Ok(u128::MAX),
                }
            }
            Ok(c)
        }
        StateKind::Permutation => {
            Ok((1..=n).try_fold(1u128, |acc, i| acc.checked_mul(i)).unwrap_or(u128::MAX))
        }
        StateKind::Simplex => Err(Error::WrongModel {
            model: spec.model().to_string(),
        }),
    }
}

pub fn enumerate_states(spec: &ChainSpec) -> Result<StateIndex> {
    enumerate_states_capped(spec, DEFAULT_STATE_CAP)
}

pub fn enumerate_states_capped(spec: &ChainSpec, cap: usize) -> Result<StateIndex> {
    let size = state_space_size(spec)?;
    if size > cap as u128 {
        return Err(Error::TooLarge { size, cap });
    }
    let n = spec.n();
    let size = size as usize;
    let mut codes = Vec::with_capacity(size);
    match spec.model().state_kind() {
        StateKind::Exclusion | StateKind::Path => {
            let k = spec.particles()?;
            // Gosper's hack walks k-subsets in increasing bitmask order.
            let mut x: u64 = (1u64 << k) - 1;
            let limit: u64 = 1u64 << n;
            while x < limit {
                codes.push(x);
                let c = x & x.wrapping_neg();
                let r = x + c;
                x = (((r ^ x) >> 2) / c) | r;
            }
        }
        StateKind::Permutation => codes.extend(0..size as u64),
        StateKind::Simplex => unreachable!("rejected by state_space_size"),
    }
    debug_assert_eq!(codes.len(), size);
    let factorials = (0..=n)
        .scan(1u64, |acc, i| {
            if i > 0 {
                *acc = acc.saturating_mul(i as u64);
            }
            Some(*acc)
        })
        .collect();
    Ok(StateIndex {
        spec: *spec,
        codes,
        binom: binomial_table(n),
        factorials,
    })
}

impl StateIndex {
    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// State with dense index `idx`.
    pub fn state(&self, idx: usize) -> AnyState {
        let n = self.spec.n();
        let code = self.codes[idx];
        match self.spec.model().state_kind() {
            StateKind::Exclusion => {
                AnyState::Exclusion(ExclusionConfig::from_code(n, code).expect("valid code"))
            }
            StateKind::Path => AnyState::Path(height_map(
                &ExclusionConfig::from_code(n, code).expect("valid code"),
            )),
            StateKind::Permutation => AnyState::Permutation(self.unrank_permutation(code)),
            StateKind::Simplex => unreachable!(),
        }
    }

    /// Dense index of `state`, or `None` if it does not belong to the space.
    pub fn index_of(&self, state: &AnyState) -> Option<usize> {
        if state.check_for(&self.spec).is_err() {
            return None;
        }
        match state {
            AnyState::Exclusion(xi) => Some(self.rank_mask(xi.code()?)),
            AnyState::Path(z) => Some(self.rank_mask(height_inverse(z).code()?)),
            AnyState::Permutation(s) => Some(self.rank_permutation(s)),
            AnyState::Simplex(_) => None,
        }
    }

    /// Colex rank: `Σ_j C(b_j, j+1)` over the set bit positions `b_0 < b_1 < …`.
    pub(crate) fn rank_mask(&self, mut code: u64) -> usize {
        let mut rank = 0u64;
        let mut j = 1;
        while code != 0 {
            let b = code.trailing_zeros() as usize;
            rank += self.binom[b][j];
            code &= code - 1;
            j += 1;
        }
        rank as usize
    }

    fn rank_permutation(&self, sigma: &Permutation) -> usize {
        let s = sigma.as_slice();
        let n = s.len();
        let mut rank = 0u64;
        for i in 0..n {
            let smaller = s[i + 1..].iter().filter(|&&v| v < s[i]).count() as u64;
            rank += smaller * self.factorials[n - 1 - i];
        }
        rank as usize
    }

    fn unrank_permutation(&self, mut rank: u64) -> Permutation {
        let n = self.spec.n();
        let mut pool: Vec<u32> = (1..=n as u32).collect();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let f = self.factorials[n - 1 - i];
            let d = (rank / f) as usize;
            rank %= f;
            out.push(pool.remove(d));
        }
        Permutation::from_one_line(out).expect("Lehmer decoding yields a permutation")
    }
}
