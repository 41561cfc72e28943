use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::grid::TimeGrid;
use crate::coupling::CouplingMode;
use crate::error::{Error, Result};
use crate::states::{ChainSpec, Model};

/// Which Monte-Carlo `d(t)` estimate to produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    Upper,
    Lower,
    Both,
}

impl std::str::FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper" => Ok(Estimator::Upper),
            "lower" => Ok(Estimator::Lower),
            "both" => Ok(Estimator::Both),
            other => Err(Error::Config(format!("unknown estimator `{other}`"))),
        }
    }
}

/// Everything an estimator run depends on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub spec: ChainSpec,
    pub grid: TimeGrid,
    pub replicas: u64,
    pub seed: u64,
    pub estimator: Estimator,
    /// Stationary samples for the lower estimate; defaults to `replicas`.
    pub stationary_samples: Option<u64>,
    /// Equal-probability bins of the distinguishing statistic.
    pub bins: usize,
    /// Stop the lower estimate at the first grid time where it is at or
    /// below this level; later grid points are then omitted.
    pub stop_below: Option<f64>,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(spec: ChainSpec, grid: TimeGrid, replicas: u64, seed: u64) -> Result<Self> {
        if replicas == 0 {
            return Err(Error::Config("replicas must be >= 1".into()));
        }
        Ok(Self {
            spec,
            grid,
            replicas,
            seed,
            estimator: Estimator::Both,
            stationary_samples: None,
            bins: 64,
            stop_below: None,
            output: None,
        })
    }

    pub fn stationary_count(&self) -> u64 {
        self.stationary_samples.unwrap_or(self.replicas)
    }
}

/// The on-disk experiment description: a flat TOML table whose keys mirror
/// the command-line flags.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub experiment: String,
    pub model: Option<String>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub p: Option<f64>,
    pub seed: Option<u64>,
    pub replicas: Option<u64>,
    pub t_max: Option<f64>,
    pub grid: Option<String>,
    pub eps: Option<f64>,
    pub time: Option<f64>,
    pub mode: Option<String>,
    pub estimator: Option<String>,
    pub init: Option<String>,
    pub n_list: Option<Vec<usize>>,
    pub dump: Option<bool>,
    pub bins: Option<usize>,
    pub stationary_samples: Option<u64>,
    pub out: Option<String>,
    pub format: Option<String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn require<T: Clone>(value: &Option<T>, key: &str) -> Result<T> {
        value
            .clone()
            .ok_or_else(|| Error::Config(format!("missing key `{key}`")))
    }

    pub fn model(&self) -> Result<Model> {
        Self::require(&self.model, "model")?
            .parse()
            .map_err(|_| Error::Config(format!("key `model`: unknown model {:?}", self.model)))
    }

    /// The chain spec; `p` defaults to 1/2 for symmetric models.
    pub fn spec(&self) -> Result<ChainSpec> {
        let model = self.model()?;
        let n = Self::require(&self.n, "N")?;
        let p = self.p.unwrap_or(0.5);
        ChainSpec::new(model, n, self.k, p).map_err(|e| Error::Config(format!("chain: {e}")))
    }

    pub fn coupling_mode(&self) -> Result<CouplingMode> {
        match &self.mode {
            None => Ok(CouplingMode::Graphical),
            Some(m) => m.parse().map_err(|_| Error::Config(format!("key `mode`: `{m}`"))),
        }
    }

    pub fn time_grid(&self) -> Result<Option<TimeGrid>> {
        self.grid
            .as_deref()
            .map(|g| g.parse().map_err(|e: Error| Error::Config(format!("key `grid`: {e}"))))
            .transpose()
    }
}
