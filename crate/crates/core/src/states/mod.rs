//! State spaces of the five chains and the maps between them.
//!
//! Indices are 1-based wherever the conventional notation is (`⟦1,N⟧` for
//! sites and permutation positions, `⟦0,N⟧` for path heights).

mod exclusion;
mod path;
mod permutation;
mod simplex;
mod spec;

pub use exclusion::ExclusionConfig;
pub use path::LatticePath;
pub use permutation::Permutation;
pub use simplex::SimplexPoint;
pub use spec::{ChainSpec, Model, StateKind};

use crate::error::{out_of_range, Error, Result};

/// Number of inversions `D(σ) = Σ_{i<j} 1{σ(i) > σ(j)}`, the distance to the
/// identity in the adjacent-transposition Cayley graph.
pub fn inversion_count(sigma: &Permutation) -> u64 {
    // Fenwick tree over values, scanning right to left.
    let n = sigma.len();
    let mut tree = vec![0u32; n + 1];
    let mut inversions = 0u64;
    for &v in sigma.as_slice().iter().rev() {
        let mut i = v as usize - 1;
        while i > 0 {
            inversions += tree[i] as u64;
            i &= i - 1;
        }
        let mut i = v as usize;
        while i <= n {
            tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }
    inversions
}

/// `A(ξ) = Σ_i (N - i) ξ(i) - k(k-1)/2`: particle moves separating `ξ` from
/// the packed-right configuration.
pub fn particle_area(xi: &ExclusionConfig) -> u64 {
    let n = xi.len() as u64;
    let k = xi.particles() as u64;
    let weighted: u64 = xi.sites().into_iter().map(|i| n - i as u64).sum();
    weighted - k * k.saturating_sub(1) / 2
}

/// `A(ζ) = ½ Σ_{i=1}^{N-1} (∧(i) - ζ(i))`.
pub fn path_area(zeta: &LatticePath) -> u64 {
    let n = zeta.n();
    let k = zeta.k();
    let twice: i64 = (1..n)
        .map(|i| (wedge_height(n, k, i) - zeta.height(i)) as i64)
        .sum();
    debug_assert!(twice >= 0 && twice % 2 == 0);
    (twice / 2) as u64
}

#[inline]
fn wedge_height(n: usize, k: usize, i: usize) -> i32 {
    (i as i32).min(2 * (n - k) as i32 - i as i32)
}

#[inline]
fn vee_height(k: usize, i: usize) -> i32 {
    (-(i as i32)).max(i as i32 - 2 * k as i32)
}

/// `h(ξ)(x) = Σ_{y ≤ x} (1 - 2ξ(y))`: a particle is a down-step.
pub fn height_map(xi: &ExclusionConfig) -> LatticePath {
    let mut heights = Vec::with_capacity(xi.len() + 1);
    let mut h = 0i32;
    heights.push(h);
    for b in xi.bits() {
        h += if b { -1 } else { 1 };
        heights.push(h);
    }
    LatticePath::from_heights_unchecked(heights)
}

/// `h^{-1}(ζ)(x) = (1 + ζ(x-1) - ζ(x)) / 2`.
pub fn height_inverse(zeta: &LatticePath) -> ExclusionConfig {
    let bits: Vec<bool> = zeta.heights().windows(2).map(|w| w[1] < w[0]).collect();
    ExclusionConfig::from_bits(&bits).expect("a path has N >= 1")
}

/// `ξ^{(k)}(σ) = 1_{⟦N-k+1,N⟧} ∘ σ`: site `i` is occupied iff `σ(i) > N - k`.
pub fn project_to_exclusion(sigma: &Permutation, k: usize) -> Result<ExclusionConfig> {
    let n = sigma.len();
    if k == 0 || k >= n {
        return Err(out_of_range("k", format!("k = {k}, need 1 <= k <= N-1 = {}", n - 1)));
    }
    Ok(project_level(sigma, k))
}

fn project_level(sigma: &Permutation, k: usize) -> ExclusionConfig {
    let n = sigma.len();
    let threshold = (n - k) as u32;
    let bits: Vec<bool> = sigma.as_slice().iter().map(|&v| v > threshold).collect();
    ExclusionConfig::from_bits(&bits).expect("non-empty permutation")
}

/// All projection levels `ξ^{(0)}, …, ξ^{(N)}`, including the empty and
/// full configurations at the ends.
pub fn projection_levels(sigma: &Permutation) -> Vec<ExclusionConfig> {
    (0..=sigma.len()).map(|k| project_level(sigma, k)).collect()
}

/// Recovers `σ` from its projection levels: `σ(i) = N - k + 1` where `k` is
/// the level at which site `i` first becomes occupied.
pub fn reconstruct_permutation(levels: &[ExclusionConfig]) -> Result<Permutation> {
    if levels.len() < 2 {
        return Err(Error::ShapeMismatch("need levels k = 0..=N with N >= 1".into()));
    }
    let n = levels.len() - 1;
    let mut sigma = vec![0u32; n];
    for (k, level) in levels.iter().enumerate() {
        if level.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "level {k} has {} sites, expected {n}",
                level.len()
            )));
        }
        if level.particles() != k {
            return Err(Error::InconsistentLevels { level: k });
        }
        if k == 0 {
            continue;
        }
        let prev = &levels[k - 1];
        let mut added = None;
        for i in 1..=n {
            match (prev.occupied(i), level.occupied(i)) {
                (true, false) => return Err(Error::InconsistentLevels { level: k }),
                (false, true) => {
                    if added.replace(i).is_some() {
                        return Err(Error::InconsistentLevels { level: k });
                    }
                }
                _ => {}
            }
        }
        let i = added.ok_or(Error::InconsistentLevels { level: k })?;
        sigma[i - 1] = (n - k + 1) as u32;
    }
    Permutation::from_one_line(sigma)
}

/// The maximal and minimal paths `(∧, ∨)` of `Ξ_{N,k}`:
/// `∧(i) = min(i, 2(N-k) - i)` and `∨(i) = max(-i, i - 2k)`.
pub fn extremal_paths(n: usize, k: usize) -> Result<(LatticePath, LatticePath)> {
    if n < 2 || k == 0 || k >= n {
        return Err(out_of_range("k", format!("need 1 <= k <= N-1, got N = {n}, k = {k}")));
    }
    let top = (0..=n).map(|i| wedge_height(n, k, i)).collect();
    let bottom = (0..=n).map(|i| vee_height(k, i)).collect();
    Ok((
        LatticePath::from_heights_unchecked(top),
        LatticePath::from_heights_unchecked(bottom),
    ))
}

/// The coordinate-wise partial order of the height representation.
pub trait PartialOrderExt {
    /// `self ≤ other`; `ShapeMismatch` if the states live in different spaces.
    fn partial_le(&self, other: &Self) -> Result<bool>;
}

impl PartialOrderExt for LatticePath {
    fn partial_le(&self, other: &Self) -> Result<bool> {
        if self.n() != other.n() || self.k() != other.k() {
            return Err(Error::ShapeMismatch(format!(
                "paths in Ξ_{{{},{}}} and Ξ_{{{},{}}}",
                self.n(),
                self.k(),
                other.n(),
                other.k()
            )));
        }
        Ok(self
            .heights()
            .iter()
            .zip(other.heights())
            .all(|(a, b)| a <= b))
    }
}

impl PartialOrderExt for ExclusionConfig {
    /// Compared through `height_map`: `ξ ≤ ξ'` iff every prefix of `ξ`
    /// holds at least as many particles as the same prefix of `ξ'`.
    fn partial_le(&self, other: &Self) -> Result<bool> {
        if self.len() != other.len() || self.particles() != other.particles() {
            return Err(Error::ShapeMismatch(format!(
                "configurations in Ω_{{{},{}}} and Ω_{{{},{}}}",
                self.len(),
                self.particles(),
                other.len(),
                other.particles()
            )));
        }
        let mut a = 0i64;
        let mut b = 0i64;
        for (x, y) in self.bits().zip(other.bits()) {
            a += x as i64;
            b += y as i64;
            if a < b {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl PartialOrderExt for SimplexPoint {
    fn partial_le(&self, other: &Self) -> Result<bool> {
        if self.n() != other.n() {
            return Err(Error::ShapeMismatch(format!(
                "simplex points with N = {} and N = {}",
                self.n(),
                other.n()
            )));
        }
        Ok(self
            .coords()
            .iter()
            .zip(other.coords())
            .all(|(a, b)| a <= b))
    }
}

impl PartialOrderExt for Permutation {
    /// `σ ≤ σ'` iff `h(ξ^{(k)}(σ)) ≤ h(ξ^{(k)}(σ'))` for every level `k`.
    /// The identity is the maximum and the reversal the minimum.
    fn partial_le(&self, other: &Self) -> Result<bool> {
        let n = self.len();
        if n != other.len() {
            return Err(Error::ShapeMismatch(format!(
                "permutations of sizes {n} and {}",
                other.len()
            )));
        }
        // count[k] = #{y <= x : σ(y) > N - k}, maintained as x advances.
        let mut count_a = vec![0u32; n + 1];
        let mut count_b = vec![0u32; n + 1];
        for x in 1..n {
            for k in (n + 1 - self.get(x) as usize)..=n {
                count_a[k] += 1;
            }
            for k in (n + 1 - other.get(x) as usize)..=n {
                count_b[k] += 1;
            }
            if (1..n).any(|k| count_a[k] < count_b[k]) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
