//! Monte-Carlo `d(t)` estimators, density profiles, cutoff scans and the
//! experiment runner behind the command line.

mod config;
mod cutoff;
mod estimate;
mod experiment;
mod grid;
mod profile;
pub mod stats;

pub use config::{ConfigFile, Estimator, ExperimentConfig};
pub use cutoff::{
    cutoff_scan, cutoff_scan_with, theory_mixing_time, CutoffOptions, CutoffRecord,
    CutoffScanResult,
};
pub use estimate::{estimate_distance_lower, estimate_distance_upper, stationary_sample};
pub use experiment::{
    exit_code, run_experiment, run_experiment_files, write_outputs, Experiment, Format, InitSpec,
    CSV_HEADER,
};
pub use grid::TimeGrid;
pub use profile::density_profile;

/// Sizes the global worker pool from `MIXLAB_WORKERS` when set. Later calls
/// have no effect.
pub fn configure_workers() {
    let Some(n) = std::env::var("MIXLAB_WORKERS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    else {
        return;
    };
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}
