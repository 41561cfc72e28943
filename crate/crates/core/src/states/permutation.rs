use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A permutation of `⟦1,N⟧` in one-line notation: `sigma[i-1] = σ(i)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    sigma: Vec<u32>,
}

impl Permutation {
    /// Validates one-line notation with values in `⟦1,N⟧`.
    pub fn from_one_line(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidState("empty permutation".into()));
        }
        let mut seen = vec![false; n];
        for &v in &values {
            let v = v as usize;
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidState(format!(
                    "{values:?} is not a permutation of 1..={n}"
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Self { sigma: values })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            sigma: (1..=n as u32).collect(),
        }
    }

    /// `σ(i) = N + 1 - i`.
    pub fn reversal(n: usize) -> Self {
        Self {
            sigma: (1..=n as u32).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// `σ(i)` for 1-based `i`.
    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        self.sigma[i - 1]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.sigma
    }

    /// `σ ∘ τ_{i,i+1}`: exchanges the values at positions `i` and `i+1`.
    #[inline]
    pub fn swap_positions(&mut self, i: usize) {
        self.sigma.swap(i - 1, i);
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.sigma.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("entry `{t}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_line(values)
    }
}
