use std::fmt::Debug;

use crate::error::Result;
use crate::states::{
    height_map, project_to_exclusion, ExclusionConfig, LatticePath, PartialOrderExt, Permutation,
    SimplexPoint,
};

/// A state that can be driven by the graphical construction.
///
/// `apply` performs the update at 1-based site `i ∈ ⟦1,N-1⟧` with mark
/// `u ∈ [0,1)`: for the discrete chains `u ≥ 1-p` selects the "+"
/// resolution (higher in the coordinate order of the heights) and `u < 1-p`
/// the "−" resolution; the simplex walk re-samples `x_i` at relative
/// position `u` between its neighbours.
pub trait ChainState: Clone + PartialEq + Debug + Send + Sync + PartialOrderExt {
    /// System size `N`.
    fn size(&self) -> usize;

    /// Applies one update; returns whether the state changed.
    fn apply(&mut self, site: usize, mark: f64, p: f64) -> bool;

    /// Number of differing coordinates among those an update at `site` can touch.
    fn local_mismatch(&self, other: &Self, site: usize) -> usize;

    /// Number of differing coordinates overall.
    fn mismatch(&self, other: &Self) -> usize;

    /// Full invariant check.
    fn validate(&self) -> Result<()>;

    /// Height-like profile on `⟦0,N⟧` used by the observers and the
    /// distinguishing statistic.
    fn height_profile(&self) -> Vec<f64>;

    /// Site occupations on `⟦1,N⟧`, for particle representations.
    fn occupation(&self) -> Option<Vec<f64>> {
        None
    }
}

impl ChainState for LatticePath {
    fn size(&self) -> usize {
        self.n()
    }

    #[inline]
    fn apply(&mut self, site: usize, mark: f64, p: f64) -> bool {
        let changed = if mark >= 1.0 - p {
            self.flip_up(site)
        } else {
            self.flip_down(site)
        };
        debug_assert!(self.locally_valid(site));
        changed
    }

    #[inline]
    fn local_mismatch(&self, other: &Self, site: usize) -> usize {
        (self.height(site) != other.height(site)) as usize
    }

    fn mismatch(&self, other: &Self) -> usize {
        self.heights()
            .iter()
            .zip(other.heights())
            .filter(|(a, b)| a != b)
            .count()
    }

    fn validate(&self) -> Result<()> {
        LatticePath::from_heights(self.heights().to_vec()).map(|_| ())
    }

    fn height_profile(&self) -> Vec<f64> {
        self.heights().iter().map(|&h| h as f64).collect()
    }

    fn occupation(&self) -> Option<Vec<f64>> {
        Some(
            self.heights()
                .windows(2)
                .map(|w| if w[1] < w[0] { 1.0 } else { 0.0 })
                .collect(),
        )
    }
}

impl ChainState for ExclusionConfig {
    fn size(&self) -> usize {
        self.len()
    }

    #[inline]
    fn apply(&mut self, site: usize, mark: f64, p: f64) -> bool {
        let here = self.occupied(site);
        let next = self.occupied(site + 1);
        // "+" moves a particle right (corner up), "−" moves it left.
        let fire = if mark >= 1.0 - p {
            here && !next
        } else {
            !here && next
        };
        if fire {
            self.swap_sites(site);
        }
        fire
    }

    #[inline]
    fn local_mismatch(&self, other: &Self, site: usize) -> usize {
        (self.occupied(site) != other.occupied(site)) as usize
            + (self.occupied(site + 1) != other.occupied(site + 1)) as usize
    }

    fn mismatch(&self, other: &Self) -> usize {
        self.bits().zip(other.bits()).filter(|(a, b)| a != b).count()
    }

    fn validate(&self) -> Result<()> {
        ExclusionConfig::validate(self)
    }

    fn height_profile(&self) -> Vec<f64> {
        height_map(self).height_profile()
    }

    fn occupation(&self) -> Option<Vec<f64>> {
        Some(self.bits().map(|b| if b { 1.0 } else { 0.0 }).collect())
    }
}

impl ChainState for Permutation {
    fn size(&self) -> usize {
        self.len()
    }

    #[inline]
    fn apply(&mut self, site: usize, mark: f64, p: f64) -> bool {
        let a = self.get(site);
        let b = self.get(site + 1);
        // "+" leaves σ(i) < σ(i+1), "−" leaves σ(i) > σ(i+1).
        let fire = if mark >= 1.0 - p { a > b } else { a < b };
        if fire {
            self.swap_positions(site);
        }
        fire
    }

    #[inline]
    fn local_mismatch(&self, other: &Self, site: usize) -> usize {
        (self.get(site) != other.get(site)) as usize
            + (self.get(site + 1) != other.get(site + 1)) as usize
    }

    fn mismatch(&self, other: &Self) -> usize {
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .filter(|(a, b)| a != b)
            .count()
    }

    fn validate(&self) -> Result<()> {
        Permutation::from_one_line(self.as_slice().to_vec()).map(|_| ())
    }

    /// Heights of the middle projection `h(ξ^{(⌊N/2⌋)}(σ))`.
    fn height_profile(&self) -> Vec<f64> {
        let k = (self.len() / 2).max(1);
        project_to_exclusion(self, k)
            .map(|xi| xi.height_profile())
            .unwrap_or_else(|_| vec![0.0; self.len() + 1])
    }
}

impl ChainState for SimplexPoint {
    fn size(&self) -> usize {
        self.n()
    }

    #[inline]
    fn apply(&mut self, site: usize, mark: f64, _p: f64) -> bool {
        let before = self.coord(site);
        self.resample(site, mark);
        debug_assert!(self.locally_valid(site));
        self.coord(site) != before
    }

    #[inline]
    fn local_mismatch(&self, other: &Self, site: usize) -> usize {
        (self.coord(site) != other.coord(site)) as usize
    }

    fn mismatch(&self, other: &Self) -> usize {
        self.coords()
            .iter()
            .zip(other.coords())
            .filter(|(a, b)| a != b)
            .count()
    }

    fn validate(&self) -> Result<()> {
        SimplexPoint::new(self.coords().to_vec()).map(|_| ())
    }

    /// Centered coordinates `x_i - i`.
    fn height_profile(&self) -> Vec<f64> {
        (0..=self.n()).map(|i| self.coord(i) - i as f64).collect()
    }
}
