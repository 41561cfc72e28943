use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};

/// The seven chain variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    Interchange,
    BiasedInterchange,
    Ssep,
    Asep,
    CornerFlip,
    BiasedCornerFlip,
    SimplexRw,
}

/// Which state representation a model evolves on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    Permutation,
    Exclusion,
    Path,
    Simplex,
}

impl Model {
    pub const ALL: [Model; 7] = [
        Model::Interchange,
        Model::BiasedInterchange,
        Model::Ssep,
        Model::Asep,
        Model::CornerFlip,
        Model::BiasedCornerFlip,
        Model::SimplexRw,
    ];

    /// Short command-line code.
    pub fn code(self) -> &'static str {
        match self {
            Model::Interchange => "ip",
            Model::BiasedInterchange => "bip",
            Model::Ssep => "ssep",
            Model::Asep => "asep",
            Model::CornerFlip => "cf",
            Model::BiasedCornerFlip => "acf",
            Model::SimplexRw => "simplex",
        }
    }

    pub fn is_biased(self) -> bool {
        matches!(
            self,
            Model::BiasedInterchange | Model::Asep | Model::BiasedCornerFlip
        )
    }

    /// Whether the model carries a particle count `k`.
    pub fn has_particles(self) -> bool {
        matches!(
            self,
            Model::Ssep | Model::Asep | Model::CornerFlip | Model::BiasedCornerFlip
        )
    }

    pub fn is_discrete(self) -> bool {
        self != Model::SimplexRw
    }

    pub fn state_kind(self) -> StateKind {
        match self {
            Model::Interchange | Model::BiasedInterchange => StateKind::Permutation,
            Model::Ssep | Model::Asep => StateKind::Exclusion,
            Model::CornerFlip | Model::BiasedCornerFlip => StateKind::Path,
            Model::SimplexRw => StateKind::Simplex,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .iter()
            .copied()
            .find(|m| m.code() == s)
            .ok_or_else(|| Error::Parse(format!("unknown model `{s}`")))
    }
}

/// A fully specified chain: model family, system size `N`, particle count `k`
/// and bias `p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    model: Model,
    n: usize,
    k: Option<usize>,
    p: f64,
}

impl ChainSpec {
    /// Validates and builds a spec. `k` is required exactly for the
    /// particle models; `p` must be 1/2 for symmetric models and lie in
    /// (1/2, 1) for biased ones.
    pub fn new(model: Model, n: usize, k: Option<usize>, p: f64) -> Result<Self> {
        if n < 2 {
            return Err(out_of_range("N", format!("N = {n}, need N >= 2")));
        }
        match (model.has_particles(), k) {
            (true, Some(k)) if (1..n).contains(&k) => {}
            (true, Some(k)) => {
                return Err(out_of_range(
                    "k",
                    format!("k = {k}, need 1 <= k <= N-1 = {}", n - 1),
                ))
            }
            (true, None) => return Err(out_of_range("k", format!("model {model} needs k"))),
            (false, Some(_)) => {
                return Err(out_of_range("k", format!("model {model} takes no k")))
            }
            (false, None) => {}
        }
        if model.is_biased() {
            if !(p > 0.5 && p < 1.0) {
                return Err(out_of_range("p", format!("p = {p}, need 1/2 < p < 1")));
            }
        } else if p != 0.5 {
            return Err(out_of_range("p", format!("symmetric model {model} needs p = 1/2")));
        }
        Ok(Self { model, n, k, p })
    }

    pub fn ssep(n: usize, k: usize) -> Result<Self> {
        Self::new(Model::Ssep, n, Some(k), 0.5)
    }

    pub fn asep(n: usize, k: usize, p: f64) -> Result<Self> {
        Self::new(Model::Asep, n, Some(k), p)
    }

    pub fn corner_flip(n: usize, k: usize) -> Result<Self> {
        Self::new(Model::CornerFlip, n, Some(k), 0.5)
    }

    pub fn biased_corner_flip(n: usize, k: usize, p: f64) -> Result<Self> {
        Self::new(Model::BiasedCornerFlip, n, Some(k), p)
    }

    pub fn interchange(n: usize) -> Result<Self> {
        Self::new(Model::Interchange, n, None, 0.5)
    }

    pub fn biased_interchange(n: usize, p: f64) -> Result<Self> {
        Self::new(Model::BiasedInterchange, n, None, p)
    }

    pub fn simplex(n: usize) -> Result<Self> {
        Self::new(Model::SimplexRw, n, None, 0.5)
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    /// Particle count, or `WrongModel` for models without one.
    pub fn particles(&self) -> Result<usize> {
        self.k.ok_or_else(|| Error::WrongModel {
            model: self.model.to_string(),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    pub fn is_symmetric(&self) -> bool {
        !self.model.is_biased()
    }

    /// `lambda = p / q`.
    pub fn lambda(&self) -> f64 {
        self.p / self.q()
    }

    /// `rho = (sqrt p - sqrt q)^2 = 1 - 2 sqrt(pq)`.
    pub fn rho(&self) -> f64 {
        1.0 - 2.0 * (self.p * self.q()).sqrt()
    }

    /// Number of update sites, `N - 1`.
    pub fn sites(&self) -> usize {
        self.n - 1
    }
}

impl fmt::Display for ChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} N={}", self.model, self.n)?;
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        if self.model.is_biased() {
            write!(f, " p={}", self.p)?;
        }
        Ok(())
    }
}
