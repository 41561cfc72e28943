use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Sorted, finite, nonnegative sample times.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::Config("empty time grid".into()));
        }
        if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::Config("grid times must be finite and >= 0".into()));
        }
        if times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Config("grid times must be sorted".into()));
        }
        Ok(Self { times })
    }

    /// `points` equally spaced times from `start` to `end` inclusive.
    pub fn linspace(start: f64, end: f64, points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::Config("a grid needs at least one point".into()));
        }
        if points == 1 {
            return Self::new(vec![start]);
        }
        let step = (end - start) / (points - 1) as f64;
        Self::new((0..points).map(|j| start + step * j as f64).collect())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn last(&self) -> f64 {
        *self.times.last().expect("non-empty grid")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `start:end:points` or a comma-separated list of times.
impl FromStr for TimeGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Config(format!("grid `{s}`: {what}"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [a, b, n] => {
                let a: f64 = a.trim().parse().map_err(|_| bad("bad start"))?;
                let b: f64 = b.trim().parse().map_err(|_| bad("bad end"))?;
                let n: usize = n.trim().parse().map_err(|_| bad("bad point count"))?;
                Self::linspace(a, b, n)
            }
            [list] => Self::new(
                list.split(',')
                    .map(|t| t.trim().parse::<f64>().map_err(|_| bad("bad time")))
                    .collect::<Result<_>>()?,
            ),
            _ => Err(bad("expected `start:end:points` or a comma list")),
        }
    }
}
