use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A point `0 ≤ x_1 ≤ … ≤ x_{N-1} ≤ N` of the simplex.
#[derive(Clone, PartialEq, Debug)]
pub struct SimplexPoint {
    n: usize,
    x: Vec<f64>,
}

impl SimplexPoint {
    /// `x` holds `x_1, …, x_{N-1}`; `N = x.len() + 1`.
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidState("simplex point needs N >= 2".into()));
        }
        let n = x.len() + 1;
        let top = n as f64;
        let mut prev = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            if !(xi >= prev && xi <= top) {
                return Err(Error::InvalidState(format!(
                    "x_{} = {xi} breaks 0 <= x_1 <= ... <= x_{{N-1}} <= {top}",
                    i + 1
                )));
            }
            prev = xi;
        }
        Ok(Self { n, x })
    }

    /// All particles at the origin.
    pub fn packed_low(n: usize) -> Self {
        Self {
            n,
            x: vec![0.0; n - 1],
        }
    }

    /// All particles at `N`.
    pub fn packed_high(n: usize) -> Self {
        Self {
            n,
            x: vec![n as f64; n - 1],
        }
    }

    /// Evenly spaced `x_i = i`, the mean stationary position.
    pub fn equispaced(n: usize) -> Self {
        Self {
            n,
            x: (1..n).map(|i| i as f64).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[f64] {
        &self.x
    }

    /// `x_i` with the conventions `x_0 = 0`, `x_N = N`.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else if i == self.n {
            self.n as f64
        } else {
            self.x[i - 1]
        }
    }

    /// `x^{(u,i)}` in place.
    #[inline]
    pub fn resample(&mut self, i: usize, u: f64) {
        let lo = self.coord(i - 1);
        let hi = self.coord(i + 1);
        self.x[i - 1] = u * hi + (1.0 - u) * lo;
    }

    #[inline]
    pub(crate) fn locally_valid(&self, i: usize) -> bool {
        self.coord(i - 1) <= self.coord(i) && self.coord(i) <= self.coord(i + 1)
    }
}

impl fmt::Display for SimplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.x.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            // 17 significant digits round-trip binary64 exactly.
            write!(f, "{v:.16e}")?;
        }
        Ok(())
    }
}

impl FromStr for SimplexPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let x = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("coordinate `{t}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(x)
    }
}
