use super::config::ExperimentConfig;
use super::estimate::sweep;
use crate::dynamics::{AnyState, ChainState, Extreme};
use crate::error::{out_of_range, Error, Result};

fn mean_occupation<S: ChainState>(start: &S, config: &ExperimentConfig, t: f64) -> Vec<f64> {
    let mut mean = vec![0.0; start.size()];
    sweep(
        start,
        &config.spec,
        config.seed,
        config.replicas,
        &[t],
        |s| s.occupation().expect("particle representation"),
        |rows: Vec<Vec<f64>>| {
            for row in &rows {
                for (m, v) in mean.iter_mut().zip(row) {
                    *m += v;
                }
            }
            false
        },
    );
    let r = config.replicas as f64;
    mean.iter_mut().for_each(|m| *m /= r);
    mean
}

/// Empirical `P[ξ_t(i) = 1]` for `i = 1..=N` over the configured replicas,
/// started from the packed-left configuration `1_{⟦1,k⟧}`.
pub fn density_profile(config: &ExperimentConfig, t: f64) -> Result<Vec<f64>> {
    let spec = &config.spec;
    if !spec.model().has_particles() {
        return Err(Error::ModelUnsupported {
            model: spec.model().to_string(),
            operation: "density profiles",
        });
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(out_of_range("t", format!("{t}")));
    }
    if config.replicas == 0 {
        return Err(Error::Config("replicas must be >= 1".into()));
    }
    Ok(match AnyState::extremal(spec, Extreme::Bottom)? {
        AnyState::Exclusion(xi) => mean_occupation(&xi, config, t),
        AnyState::Path(z) => mean_occupation(&z, config, t),
        _ => unreachable!("particle models use exclusion or path states"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::grid::TimeGrid;
    use crate::states::ChainSpec;

    fn config(spec: ChainSpec, replicas: u64) -> ExperimentConfig {
        ExperimentConfig::new(spec, TimeGrid::new(vec![1.0]).unwrap(), replicas, 7).unwrap()
    }

    #[test]
    fn time_zero_is_the_start() {
        let prof = density_profile(&config(ChainSpec::ssep(6, 2).unwrap(), 10), 0.0).unwrap();
        assert_eq!(prof, vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let prof = density_profile(&config(ChainSpec::corner_flip(6, 2).unwrap(), 10), 0.0).unwrap();
        assert_eq!(prof, vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let ip = config(ChainSpec::interchange(4).unwrap(), 3);
        assert!(matches!(density_profile(&ip, 1.0), Err(Error::ModelUnsupported { .. })));
    }

    #[test]
    fn mass_is_conserved() {
        let prof = density_profile(&config(ChainSpec::asep(10, 4, 0.8).unwrap(), 50), 3.0).unwrap();
        assert!((prof.iter().sum::<f64>() - 4.0).abs() < 1e-12);
    }
}
