use mixlab::dynamics::{
    read_trajectory, replay, sample_stationary_direct, simulate_replica, write_trajectory,
    AnyState, EventStream, Extreme, ObserverHook, Statistic,
};
use mixlab::exact::enumerate_states;
use mixlab::states::ChainSpec;

fn assert_uniform(counts: &[u64], total: u64) {
    let p = 1.0 / counts.len() as f64;
    let sigma = (p * (1.0 - p) / total as f64).sqrt();
    for &c in counts {
        let f = c as f64 / total as f64;
        assert!((f - p).abs() < 3.0 * sigma, "{f} vs {p} (σ = {sigma})");
    }
}

#[test]
fn two_site_transition_probability() {
    let spec = ChainSpec::ssep(2, 1).unwrap();
    let start = AnyState::parse(&spec, "10").unwrap();
    let target = AnyState::parse(&spec, "01").unwrap();
    let n = 100_000u64;
    for t in [0.3, 1.0] {
        let hits = (0..n)
            .filter(|&r| simulate_replica(&spec, &start, t, 5, r, &[]).unwrap().0 == target)
            .count() as f64;
        let exact = (1.0 - (-t as f64).exp()) / 2.0;
        let sigma = (exact * (1.0 - exact) / n as f64).sqrt();
        assert!((hits / n as f64 - exact).abs() < 3.0 * sigma, "t = {t}");
    }
}

#[test]
fn direct_samplers_are_uniform() {
    let spec = ChainSpec::ssep(4, 2).unwrap();
    let index = enumerate_states(&spec).unwrap();
    let n = 600_000u64;
    let mut counts = vec![0u64; index.len()];
    for r in 0..n {
        let s = sample_stationary_direct(&spec, 1, r).unwrap();
        counts[index.index_of(&s).unwrap()] += 1;
    }
    assert_uniform(&counts, n);

    let spec = ChainSpec::interchange(3).unwrap();
    let index = enumerate_states(&spec).unwrap();
    let n = 60_000u64;
    let mut counts = vec![0u64; index.len()];
    for r in 0..n {
        let s = sample_stationary_direct(&spec, 2, r).unwrap();
        counts[index.index_of(&s).unwrap()] += 1;
    }
    assert_uniform(&counts, n);
}

#[test]
fn simplex_sampler_mean() {
    let spec = ChainSpec::simplex(3).unwrap();
    let n = 100_000u64;
    let xs: Vec<f64> = (0..n)
        .map(|r| match sample_stationary_direct(&spec, 3, r).unwrap() {
            AnyState::Simplex(x) => x.coord(1),
            _ => unreachable!(),
        })
        .collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    // x_1 is the minimum of two uniforms on [0, 3]: mean 1, variance 1/2.
    let sigma = (0.5 / n as f64).sqrt();
    assert!((mean - 1.0).abs() < 3.0 * sigma, "{mean}");
}

#[test]
fn biased_sampling_needs_cftp() {
    let spec = ChainSpec::asep(4, 2, 0.8).unwrap();
    assert!(sample_stationary_direct(&spec, 0, 0).is_err());
}

#[test]
fn dump_and_replay_reproduce_the_run() {
    for spec in [
        ChainSpec::asep(9, 4, 0.7).unwrap(),
        ChainSpec::biased_interchange(6, 0.8).unwrap(),
        ChainSpec::simplex(5).unwrap(),
    ] {
        let init = AnyState::extremal(&spec, Extreme::Bottom).unwrap();
        let t = 7.5;
        let mut stream = EventStream::for_replica(spec.sites(), 4, 2);
        let mut events = Vec::new();
        loop {
            let e = stream.next_event();
            if e.time > t {
                break;
            }
            events.push(e);
        }
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &spec, &init, &events).unwrap();
        let dump = read_trajectory(&buf[..]).unwrap();
        assert_eq!(dump.spec, spec);
        assert_eq!(dump.init, init);
        let (end, _) = simulate_replica(&spec, &init, t, 4, 2, &[]).unwrap();
        assert_eq!(replay(&spec, &init, &dump.events).unwrap(), end);
    }
}

#[test]
fn observers_see_conserved_mass() {
    let spec = ChainSpec::ssep(12, 5).unwrap();
    let init = AnyState::extremal(&spec, Extreme::Top).unwrap();
    let hook = ObserverHook {
        times: vec![0.0, 1.0, 10.0, 100.0],
        statistic: Statistic::DensityProfile,
    };
    let (_, obs) = simulate_replica(&spec, &init, 100.0, 9, 0, &[hook]).unwrap();
    for row in &obs.per_hook[0] {
        assert_eq!(row.iter().sum::<f64>(), 5.0);
    }
    assert_eq!(obs.per_hook[0][0][11], 1.0);
}
