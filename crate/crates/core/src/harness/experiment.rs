//! Named experiments shared by the command line and config files.
//!
//! Every experiment renders to a list of named files. Contents depend only
//! on the parameters and the seed, never on timing or worker count.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::config::{ConfigFile, Estimator, ExperimentConfig};
use super::cutoff::{cutoff_scan_with, CutoffOptions};
use super::estimate::{estimate_distance_lower, estimate_distance_upper};
use super::grid::TimeGrid;
use super::profile::density_profile;
use super::stats::median;
use crate::coupling::{coupling_batch, default_t_max, CouplingMode};
use crate::dynamics::{
    simulate_replica, write_trajectory, AnyState, EventStream, Extreme, ObserverHook, Statistic,
};
use crate::error::{out_of_range, Error, Result};
use crate::exact::ExactChain;
use crate::spectral::dirichlet_spectrum;
use crate::states::{ChainSpec, Model};

pub const CSV_HEADER: &str = "# mixlab-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("key `format`: unknown format `{other}`"))),
        }
    }
}

/// Start for simulations and couplings: `bottom`, `top` or a literal state.
#[derive(Clone, Debug, PartialEq)]
pub enum InitSpec {
    Bottom,
    Top,
    Literal(String),
}

impl InitSpec {
    pub fn parse(text: &str) -> Self {
        match text.trim() {
            "bottom" | "vee" => InitSpec::Bottom,
            "top" | "wedge" => InitSpec::Top,
            other => InitSpec::Literal(other.to_string()),
        }
    }

    pub fn resolve(&self, spec: &ChainSpec) -> Result<AnyState> {
        match self {
            InitSpec::Bottom => AnyState::extremal(spec, Extreme::Bottom),
            InitSpec::Top => AnyState::extremal(spec, Extreme::Top),
            InitSpec::Literal(s) => AnyState::parse(spec, s),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Experiment {
    Spectrum {
        n: usize,
    },
    Exact {
        spec: ChainSpec,
        eps: f64,
        grid: Option<TimeGrid>,
    },
    Simulate {
        spec: ChainSpec,
        init: InitSpec,
        time: f64,
        seed: u64,
        grid: Option<TimeGrid>,
        dump: bool,
    },
    Couple {
        spec: ChainSpec,
        init: (InitSpec, InitSpec),
        replicas: u64,
        seed: u64,
        t_max: Option<f64>,
        mode: CouplingMode,
    },
    Dtv(ExperimentConfig),
    Profile {
        config: ExperimentConfig,
        time: f64,
    },
    Cutoff {
        model: Model,
        n_list: Vec<usize>,
        eps: f64,
        seed: u64,
        options: CutoffOptions,
    },
}

/// Column names plus rows of JSON scalars; renders to CSV or JSON.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Table {
    fn csv(&self) -> String {
        let mut out = format!("{CSV_HEADER}\n{}\n", self.columns.join(","));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(cell).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.clone()))
                        .collect(),
                )
            })
            .collect();
        Value::Array(rows)
    }
}

fn opt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, |x| json!(x))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Spectrum { .. } => "spectrum",
            Experiment::Exact { .. } => "exact",
            Experiment::Simulate { .. } => "simulate",
            Experiment::Couple { .. } => "couple",
            Experiment::Dtv(_) => "dtv",
            Experiment::Profile { .. } => "profile",
            Experiment::Cutoff { .. } => "cutoff",
        }
    }

    /// Builds an experiment from the flat key-value description.
    pub fn from_config(c: &ConfigFile) -> Result<Self> {
        let seed = c.seed.unwrap_or(0);
        let replicas = c.replicas.unwrap_or(100);
        let grid = c.time_grid()?;
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| Error::Config(format!("missing key `{key}`")))
        };
        Ok(match c.experiment.as_str() {
            "spectrum" => Experiment::Spectrum {
                n: c.n.ok_or_else(|| Error::Config("missing key `N`".into()))?,
            },
            "exact" => Experiment::Exact {
                spec: c.spec()?,
                eps: c.eps.unwrap_or(0.25),
                grid,
            },
            "simulate" => Experiment::Simulate {
                spec: c.spec()?,
                init: InitSpec::parse(c.init.as_deref().unwrap_or("bottom")),
                time: need(c.time.or(c.t_max), "time")?,
                seed,
                grid,
                dump: c.dump.unwrap_or(false),
            },
            "couple" => {
                let pair = c.init.as_deref().unwrap_or("bottom;top");
                let Some((a, b)) = pair.split_once(';') else {
                    return Err(Error::Config(format!(
                        "key `init`: expected `first;second`, got `{pair}`"
                    )));
                };
                Experiment::Couple {
                    spec: c.spec()?,
                    init: (InitSpec::parse(a), InitSpec::parse(b)),
                    replicas,
                    seed,
                    t_max: c.t_max,
                    mode: c.coupling_mode()?,
                }
            }
            "dtv" | "profile" => {
                let spec = c.spec()?;
                let grid = match grid {
                    Some(g) => g,
                    None => {
                        let t_max = c.t_max.unwrap_or_else(|| default_t_max(&spec) / 10.0);
                        TimeGrid::linspace(0.0, t_max, 41)?
                    }
                };
                let mut config = ExperimentConfig::new(spec, grid, replicas, seed)?;
                if let Some(e) = &c.estimator {
                    config.estimator = e
                        .parse()
                        .map_err(|_| Error::Config(format!("key `estimator`: `{e}`")))?;
                }
                config.stationary_samples = c.stationary_samples;
                if let Some(b) = c.bins {
                    config.bins = b;
                }
                if c.experiment == "dtv" {
                    Experiment::Dtv(config)
                } else {
                    Experiment::Profile {
                        config,
                        time: need(c.time, "time")?,
                    }
                }
            }
            "cutoff" => {
                let mut options = CutoffOptions::default();
                if let Some(p) = c.p {
                    options.p = p;
                }
                if let (Some(k), Some(n)) = (c.k, c.n) {
                    options.density = k as f64 / n as f64;
                }
                if let Some(r) = c.replicas {
                    options.upper_replicas = r;
                    options.lower_replicas = r;
                }
                if let Some(m) = c.stationary_samples {
                    options.lower_replicas = m;
                }
                Experiment::Cutoff {
                    model: c.model()?,
                    n_list: c
                        .n_list
                        .clone()
                        .or_else(|| c.n.map(|n| vec![n]))
                        .ok_or_else(|| Error::Config("missing key `n_list`".into()))?,
                    eps: c.eps.unwrap_or(0.25),
                    seed,
                    options,
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "key `experiment`: unknown experiment `{other}`"
                )))
            }
        })
    }

    /// Runs the experiment and returns `(file name, contents)` pairs.
    pub fn execute(&self, format: Format) -> Result<Vec<(String, String)>> {
        let (table, summary, extra) = self.run()?;
        let name = self.name();
        let mut files = match format {
            Format::Csv => vec![
                (format!("{name}.csv"), table.csv()),
                (format!("{name}.json"), pretty(&summary)),
            ],
            Format::Json => {
                let mut doc = summary;
                doc["rows"] = table.json();
                vec![(format!("{name}.json"), pretty(&doc))]
            }
        };
        files.extend(extra);
        Ok(files)
    }

    fn run(&self) -> Result<(Table, Value, Vec<(String, String)>)> {
        let mut extra = Vec::new();
        let (table, summary) = match self {
            Experiment::Spectrum { n } => {
                let s = dirichlet_spectrum(*n)?;
                let rows = (1..*n).map(|j| vec![json!(j), json!(s.gamma(j))]).collect();
                (
                    Table { columns: vec!["j", "gamma_j"], rows },
                    json!({ "N": n, "gap": s.gap() }),
                )
            }
            Experiment::Exact { spec, eps, grid } => {
                let chain = ExactChain::new(spec)?;
                let tmix = chain.mixing_time(*eps)?;
                let grid = match grid {
                    Some(g) => g.clone(),
                    None => TimeGrid::linspace(0.0, 3.0 * tmix, 61)?,
                };
                let curve = chain.distance_curve(grid.times())?;
                let rows = curve
                    .times
                    .iter()
                    .zip(&curve.values)
                    .map(|(t, d)| vec![json!(t), json!(d)])
                    .collect();
                (
                    Table { columns: vec!["t", "d_exact"], rows },
                    json!({ "tmix": tmix, "states": chain.len(), "eps": eps }),
                )
            }
            Experiment::Simulate { spec, init, time, seed, grid, dump } => {
                if !(*time >= 0.0 && time.is_finite()) {
                    return Err(out_of_range("time", format!("{time}")));
                }
                let start = init.resolve(spec)?;
                let grid = match grid {
                    Some(g) => g.clone(),
                    None => TimeGrid::linspace(0.0, *time, 11)?,
                };
                let hook = ObserverHook {
                    times: grid.times().to_vec(),
                    statistic: Statistic::Phi,
                };
                let (end, obs) = simulate_replica(spec, &start, *time, *seed, 0, &[hook])?;
                let rows = grid
                    .times()
                    .iter()
                    .zip(&obs.per_hook[0])
                    .filter(|(_, v)| !v.is_empty())
                    .map(|(t, v)| vec![json!(t), json!(v[0])])
                    .collect();
                if *dump {
                    let mut stream = EventStream::for_replica(spec.sites(), *seed, 0);
                    let mut events = Vec::new();
                    loop {
                        let e = stream.next_event();
                        if e.time > *time {
                            break;
                        }
                        events.push(e);
                    }
                    let mut buf = Vec::new();
                    write_trajectory(&mut buf, spec, &start, &events)
                        .map_err(|e| Error::Resource(e.to_string()))?;
                    extra.push((
                        "trajectory.csv".to_string(),
                        String::from_utf8(buf).expect("UTF-8 dump"),
                    ));
                }
                (
                    Table { columns: vec!["t", "phi"], rows },
                    json!({ "init": start.to_string(), "final_state": end.to_string(), "time": time }),
                )
            }
            Experiment::Couple { spec, init, replicas, seed, t_max, mode } => {
                let a = init.0.resolve(spec)?;
                let b = init.1.resolve(spec)?;
                let reports = coupling_batch(spec, &a, &b, *seed, *replicas, *t_max, *mode)?;
                let cap = t_max.unwrap_or_else(|| default_t_max(spec));
                let rows = reports
                    .iter()
                    .enumerate()
                    .map(|(r, rep)| {
                        vec![
                            json!(r),
                            json!(rep.mode.to_string()),
                            json!(rep.tau.unwrap_or(cap)),
                            json!(rep.censored() as u8),
                        ]
                    })
                    .collect();
                let taus: Vec<f64> = reports.iter().map(|r| r.tau.unwrap_or(cap)).collect();
                let censored = reports.iter().filter(|r| r.censored()).count();
                (
                    Table { columns: vec!["replica", "mode", "tau", "censored"], rows },
                    json!({
                        "replicas": replicas,
                        "censored": censored,
                        "median_tau": median(&taus),
                        "t_max": cap,
                    }),
                )
            }
            Experiment::Dtv(config) => {
                let upper = matches!(config.estimator, Estimator::Upper | Estimator::Both)
                    .then(|| estimate_distance_upper(config))
                    .transpose()?;
                let lower = matches!(config.estimator, Estimator::Lower | Estimator::Both)
                    .then(|| estimate_distance_lower(config))
                    .transpose()?;
                let at = |c: &Option<crate::exact::DistanceCurve>, j: usize| -> (Value, Value) {
                    match c {
                        Some(c) if j < c.values.len() => (
                            json!(c.values[j]),
                            opt(c.std_errors.as_ref().map(|e| e[j])),
                        ),
                        _ => (Value::Null, Value::Null),
                    }
                };
                let rows = config
                    .grid
                    .times()
                    .iter()
                    .enumerate()
                    .map(|(j, t)| {
                        let (u, su) = at(&upper, j);
                        let (l, sl) = at(&lower, j);
                        vec![json!(t), u, su, l, sl]
                    })
                    .collect();
                (
                    Table {
                        columns: vec!["t", "d_upper", "se_upper", "d_lower", "se_lower"],
                        rows,
                    },
                    json!({
                        "t_half_upper": opt(upper.as_ref().and_then(|c| c.half_crossing())),
                        "t_half_lower": opt(lower.as_ref().and_then(|c| c.half_crossing())),
                        "replicas": config.replicas,
                    }),
                )
            }
            Experiment::Profile { config, time } => {
                let prof = density_profile(config, *time)?;
                let rows = prof
                    .iter()
                    .enumerate()
                    .map(|(i, d)| vec![json!(i + 1), json!(d)])
                    .collect();
                (
                    Table { columns: vec!["site", "density"], rows },
                    json!({ "time": time, "replicas": config.replicas }),
                )
            }
            Experiment::Cutoff { model, n_list, eps, seed, options } => {
                let res = cutoff_scan_with(*model, n_list, (*eps, 1.0 - eps), *seed, options)?;
                let rows = res
                    .records
                    .iter()
                    .map(|r| {
                        vec![
                            json!(r.n),
                            r.k.map_or(Value::Null, |k| json!(k)),
                            opt(r.t_half_lower),
                            opt(r.t_half_upper),
                            json!(r.theory),
                            opt(r.exact_ratio),
                        ]
                    })
                    .collect();
                (
                    Table {
                        columns: vec!["N", "k", "t_half_lower", "t_half_upper", "theory", "exact_ratio"],
                        rows,
                    },
                    json!({ "model": model.code(), "eps": [eps, 1.0 - eps] }),
                )
            }
        };
        Ok((table, summary, extra))
    }
}

/// Process exit status for an error: 2 for bad input, 3 for resources.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::Parse(_)
        | Error::OutOfRange { .. }
        | Error::ShapeMismatch(_)
        | Error::InvalidState(_)
        | Error::WrongModel { .. }
        | Error::ModelUnsupported { .. }
        | Error::BiasedModel { .. }
        | Error::Incomparable
        | Error::NotOrdered => 2,
        Error::Resource(_) | Error::TooLarge { .. } => 3,
        _ => 1,
    }
}

/// Writes every file through a temporary name and a rename. On failure all
/// files written so far are removed.
pub fn write_outputs(dir: &Path, files: &[(String, String)]) -> Result<Vec<PathBuf>> {
    let io = |e: std::io::Error| Error::Resource(e.to_string());
    fs::create_dir_all(dir).map_err(io)?;
    let mut written: Vec<PathBuf> = Vec::new();
    for (name, contents) in files {
        let target = dir.join(name);
        let tmp = dir.join(format!(".{name}.tmp"));
        let res = fs::write(&tmp, contents).and_then(|_| fs::rename(&tmp, &target));
        if let Err(e) = res {
            let _ = fs::remove_file(&tmp);
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(io(e));
        }
        written.push(target);
    }
    Ok(written)
}

/// Loads, runs and writes the experiment described by `path`. Outputs go
/// to the `out` directory (relative to the config file) or next to it.
pub fn run_experiment_files(path: &Path) -> Result<Vec<PathBuf>> {
    let config = ConfigFile::load(path)?;
    let experiment = Experiment::from_config(&config)?;
    let format = match &config.format {
        Some(f) => f.parse()?,
        None => Format::Csv,
    };
    let base = path.parent().unwrap_or(Path::new("."));
    let dir = match &config.out {
        Some(o) => base.join(o),
        None => base.to_path_buf(),
    };
    let files = experiment.execute(format)?;
    write_outputs(&dir, &files)
}

/// Exit status of running the config at `path`: 0 on success, 2 for
/// configuration errors, 3 for resource errors, 1 otherwise. Diagnostics
/// go to standard error.
pub fn run_experiment(path: &Path) -> i32 {
    super::configure_workers();
    match run_experiment_files(path) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
