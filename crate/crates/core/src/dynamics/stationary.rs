use rand::seq::{index, SliceRandom};
use rand::Rng;

use super::events::{stream_rng, Lane};
use super::AnyState;
use crate::error::{Error, Result};
use crate::states::{height_map, ChainSpec, ExclusionConfig, Permutation, SimplexPoint, StateKind};

/// Uniform element of `Ω_{N,k}`.
pub fn uniform_exclusion<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> ExclusionConfig {
    let sites = index::sample(rng, n, k).into_iter().map(|i| i + 1);
    ExclusionConfig::from_sites(n, sites).expect("distinct sites in range")
}

/// Uniform element of `S_N`.
pub fn uniform_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut values: Vec<u32> = (1..=n as u32).collect();
    values.shuffle(rng);
    Permutation::from_one_line(values).expect("shuffle of 1..=N")
}

/// Uniform point of the simplex: order statistics of `N-1` uniforms on `[0,N]`.
pub fn uniform_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SimplexPoint {
    let top = n as f64;
    let mut x: Vec<f64> = (0..n - 1).map(|_| rng.random::<f64>() * top).collect();
    x.sort_by(f64::total_cmp);
    SimplexPoint::new(x).expect("sorted values in [0,N)")
}

/// Exact sample from the stationary law of a symmetric model.
pub fn sample_stationary_with<R: Rng + ?Sized>(spec: &ChainSpec, rng: &mut R) -> Result<AnyState> {
    if !spec.is_symmetric() {
        return Err(Error::BiasedModel { p: spec.p() });
    }
    let n = spec.n();
    Ok(match spec.model().state_kind() {
        StateKind::Exclusion => AnyState::Exclusion(uniform_exclusion(n, spec.particles()?, rng)),
        StateKind::Path => {
            AnyState::Path(height_map(&uniform_exclusion(n, spec.particles()?, rng)))
        }
        StateKind::Permutation => AnyState::Permutation(uniform_permutation(n, rng)),
        StateKind::Simplex => AnyState::Simplex(uniform_simplex(n, rng)),
    })
}

/// Exact stationary sample for replica `replica` of `seed`. Biased models
/// must use `coupling::cftp_sample` instead.
pub fn sample_stationary_direct(spec: &ChainSpec, seed: u64, replica: u64) -> Result<AnyState> {
    let mut rng = stream_rng(seed, replica, Lane::Stationary);
    sample_stationary_with(spec, &mut rng)
}
