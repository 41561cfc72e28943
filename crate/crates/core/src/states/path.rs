use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A nearest-neighbour path `ζ : ⟦0,N⟧ → ℤ` with `ζ(0) = 0` and
/// `ζ(N) = N - 2k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LatticePath {
    heights: Vec<i32>,
}

impl LatticePath {
    /// Validates a height vector indexed by `⟦0,N⟧`.
    pub fn from_heights(heights: Vec<i32>) -> Result<Self> {
        if heights.len() < 2 {
            return Err(Error::InvalidState("a path needs N >= 1".into()));
        }
        if heights[0] != 0 {
            return Err(Error::InvalidState(format!("ζ(0) = {} != 0", heights[0])));
        }
        if let Some(i) = heights.windows(2).position(|w| (w[1] - w[0]).abs() != 1) {
            return Err(Error::InvalidState(format!("step {i} -> {} is not ±1", i + 1)));
        }
        Ok(Self { heights })
    }

    pub(crate) fn from_heights_unchecked(heights: Vec<i32>) -> Self {
        debug_assert!(Self::from_heights(heights.clone()).is_ok());
        Self { heights }
    }

    /// System size `N`.
    pub fn n(&self) -> usize {
        self.heights.len() - 1
    }

    /// Number of down-steps `k`, recovered from `ζ(N) = N - 2k`.
    pub fn k(&self) -> usize {
        ((self.n() as i32 - self.heights[self.n()]) / 2) as usize
    }

    /// `ζ(i)` for `i ∈ ⟦0,N⟧`.
    #[inline]
    pub fn height(&self, i: usize) -> i32 {
        self.heights[i]
    }

    pub fn heights(&self) -> &[i32] {
        &self.heights
    }

    #[inline]
    pub fn is_local_min(&self, i: usize) -> bool {
        let h = self.heights[i];
        self.heights[i - 1] == h + 1 && self.heights[i + 1] == h + 1
    }

    #[inline]
    pub fn is_local_max(&self, i: usize) -> bool {
        let h = self.heights[i];
        self.heights[i - 1] == h - 1 && self.heights[i + 1] == h - 1
    }

    /// `ζ^{(i,+)}` in place: raise a local minimum at `i`.
    #[inline]
    pub fn flip_up(&mut self, i: usize) -> bool {
        if self.is_local_min(i) {
            self.heights[i] += 2;
            true
        } else {
            false
        }
    }

    /// `ζ^{(i,-)}` in place: lower a local maximum at `i`.
    #[inline]
    pub fn flip_down(&mut self, i: usize) -> bool {
        if self.is_local_max(i) {
            self.heights[i] -= 2;
            true
        } else {
            false
        }
    }

    /// `ζ^{(i)}` in place: flip whichever corner sits at `i`.
    pub fn flip(&mut self, i: usize) -> bool {
        self.flip_up(i) || self.flip_down(i)
    }

    /// Checks the slope constraint around site `i` only.
    #[inline]
    pub(crate) fn locally_valid(&self, i: usize) -> bool {
        (self.heights[i] - self.heights[i - 1]).abs() == 1
            && (self.heights[i + 1] - self.heights[i]).abs() == 1
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.heights.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{h}")?;
        }
        Ok(())
    }
}

impl FromStr for LatticePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let heights = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i32>()
                    .map_err(|e| Error::Parse(format!("height `{t}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_heights(heights)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(LatticePath::from_heights(vec![0, 1, 0]).is_ok());
        assert!(LatticePath::from_heights(vec![1, 0]).is_err());
        assert!(LatticePath::from_heights(vec![0, 2]).is_err());
        assert!(LatticePath::from_heights(vec![0, 0]).is_err());
    }

    #[test]
    fn corners() {
        let mut p: LatticePath = "0,-1,0,-1".parse().unwrap();
        assert_eq!(p.k(), 2);
        assert!(p.is_local_min(1));
        assert!(p.is_local_max(2));
        assert!(p.flip_up(1));
        assert_eq!(p.to_string(), "0,1,0,-1");
        assert!(!p.flip_up(1));
        assert!(p.flip(1));
        assert_eq!(p.to_string(), "0,-1,0,-1");
    }
}
