//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` line
//! straight to the process stdout (bypassing the test harness capture) and
//! then asserts.

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mixlab::coupling::{
    cftp_sample_replica, coupled_step_refined, coupling_batch, CoupledEnsemble, CouplingMode,
};
use mixlab::dynamics::{
    sample_stationary_with, simulate_replica, slowest_mode_statistic, stream_rng, AnyState,
    ChainState, EventStream, Extreme, Lane,
};
use mixlab::exact::{enumerate_states, ExactChain};
use mixlab::harness::stats::{ks_p_value, median};
use mixlab::harness::{
    cutoff_scan_with, density_profile, estimate_distance_lower, estimate_distance_upper,
    theory_mixing_time, CutoffOptions, ExperimentConfig, TimeGrid,
};
use mixlab::spectral::{
    coupling_tail_bound, dirichlet_laplacian, dirichlet_spectrum, generator_identity_residual,
    heat_solve, HeightField,
};
use mixlab::states::{height_map, ChainSpec, LatticePath, Model};

fn report(id: u32, name: &str, pass: bool, detail: &str, started: Instant) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "acceptance {id:>2} {verdict} {name}: {detail} ({:.1} s)",
        started.elapsed().as_secs_f64()
    );
    let _ = out.flush();
    assert!(pass, "criterion {id} failed: {detail}");
}

fn path_of(state: AnyState) -> LatticePath {
    match state {
        AnyState::Path(z) => z,
        AnyState::Exclusion(xi) => height_map(&xi),
        _ => panic!("not a path model"),
    }
}

#[test]
fn c01_two_state_ground_truth() {
    let started = Instant::now();
    let chain = ExactChain::new(&ChainSpec::ssep(2, 1).unwrap()).unwrap();
    let times: Vec<f64> = (0..50).map(|j| j as f64 * 0.2).collect();
    let curve = chain.distance_curve(&times).unwrap();
    let err = times
        .iter()
        .zip(&curve.values)
        .map(|(t, d)| (d - (-t).exp() / 2.0).abs())
        .fold(0.0, f64::max);
    let tmix = chain.mixing_time(0.25).unwrap();
    let pass = err < 1e-9 && (tmix - 2f64.ln()).abs() < 1e-6;
    report(
        1,
        "two-state d(t) and T_mix",
        pass,
        &format!("max |d - e^-t/2| = {err:.2e}, T_mix(1/4) - ln 2 = {:.2e}", tmix - 2f64.ln()),
        started,
    );
}

#[test]
fn c02_reversibility() {
    let started = Instant::now();
    let mut specs = Vec::new();
    for n in 2..=8 {
        for k in 1..n {
            specs.push(ChainSpec::ssep(n, k).unwrap());
            specs.push(ChainSpec::asep(n, k, 0.8).unwrap());
            specs.push(ChainSpec::corner_flip(n, k).unwrap());
            specs.push(ChainSpec::biased_corner_flip(n, k, 0.8).unwrap());
        }
    }
    for n in 2..=5 {
        specs.push(ChainSpec::interchange(n).unwrap());
        specs.push(ChainSpec::biased_interchange(n, 0.8).unwrap());
    }
    let (mut db, mut bal) = (0.0f64, 0.0f64);
    for spec in &specs {
        let chain = ExactChain::new(spec).unwrap();
        db = db.max(chain.detailed_balance_residual());
        bal = bal.max(chain.balance_residual());
    }
    report(
        2,
        "reversibility",
        db < 1e-12 && bal < 1e-10,
        &format!("{} chains, detailed balance {db:.2e}, πL {bal:.2e}", specs.len()),
        started,
    );
}

#[test]
fn c03_spectrum() {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for n in 3..=512 {
        let s = dirichlet_spectrum(n).unwrap();
        for j in 1..n {
            let mode = s.mode(j);
            let lap = dirichlet_laplacian(&mode);
            for i in 1..n {
                worst = worst.max((lap[i - 1] + 2.0 * s.gamma(j) * mode[i]).abs());
            }
        }
    }
    report(
        3,
        "Dirichlet eigenpairs",
        worst < 1e-12,
        &format!("max residual {worst:.2e} over N = 3..512"),
        started,
    );
}

#[test]
fn c04_cole_hopf_identity() {
    let started = Instant::now();
    let small = ChainSpec::biased_corner_flip(8, 4, 0.8).unwrap();
    let index = enumerate_states(&small).unwrap();
    let mut worst = 0.0f64;
    for x in 0..index.len() {
        let z = path_of(index.state(x));
        worst = worst.max(generator_identity_residual(&small, &z).unwrap());
    }
    let big = ChainSpec::biased_corner_flip(64, 32, 0.8).unwrap();
    let sym = ChainSpec::corner_flip(64, 32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let z = path_of(sample_stationary_with(&sym, &mut rng).unwrap());
        worst = worst.max(generator_identity_residual(&big, &z).unwrap());
    }
    report(
        4,
        "Cole-Hopf generator identity",
        worst < 1e-10,
        &format!("max residual {worst:.2e} ({} exhaustive + 1000 random)", index.len()),
        started,
    );
}

#[test]
fn c05_heat_equation() {
    let started = Instant::now();
    let spec = ChainSpec::corner_flip(6, 3).unwrap();
    let chain = ExactChain::new(&spec).unwrap();
    let bottom = path_of(AnyState::extremal(&spec, Extreme::Bottom).unwrap());
    let start = chain.index().index_of(&AnyState::Path(bottom.clone())).unwrap();
    let times = [0.5, 2.0, 8.0];
    let mut worst = 0.0f64;
    for i in 0..=6 {
        let f: Vec<f64> = (0..chain.len())
            .map(|x| path_of(chain.index().state(x)).height(i) as f64)
            .collect();
        let mean = chain.expectation_from(start, &f, &times).unwrap();
        for (t, m) in times.iter().zip(mean) {
            let u = heat_solve(&HeightField::from_path(&bottom), *t, 0.5).unwrap();
            worst = worst.max((u.values()[i] - m).abs());
        }
    }
    report(
        5,
        "mean heights solve the heat equation",
        worst < 1e-6,
        &format!("max error {worst:.2e}"),
        started,
    );
}

/// `(t, P̂[τ > t], σ, bound)` rows where the estimate exceeds bound + 3σ.
fn tail_violations(spec: &ChainSpec, replicas: u64, t_end: f64) -> (usize, String) {
    let lo = AnyState::extremal(spec, Extreme::Bottom).unwrap();
    let hi = AnyState::extremal(spec, Extreme::Top).unwrap();
    let reports = coupling_batch(spec, &lo, &hi, 6, replicas, None, CouplingMode::Graphical).unwrap();
    let mut bad = 0;
    let mut tightest = f64::INFINITY;
    for j in 1..=20 {
        let t = t_end * j as f64 / 20.0;
        let p = reports.iter().filter(|r| r.exceeds(t)).count() as f64 / replicas as f64;
        let sigma = (p * (1.0 - p) / replicas as f64).sqrt();
        let bound = coupling_tail_bound(spec, t).unwrap().raw();
        if p > bound + 3.0 * sigma {
            bad += 1;
        }
        tightest = tightest.min(bound + 3.0 * sigma - p);
    }
    (bad, format!("{} violations, min slack {tightest:.3}", bad))
}

#[test]
fn c06_coupling_tail_bound() {
    let started = Instant::now();
    let sym = ChainSpec::corner_flip(32, 16).unwrap();
    let g1 = dirichlet_spectrum(32).unwrap().gap();
    let (bad_s, msg_s) = tail_violations(&sym, 10_000, 2.0 * (16.0f64 * 31.0).ln() / g1);
    let asym = ChainSpec::biased_corner_flip(32, 16, 0.8).unwrap();
    let horizon = 2.0 * ((16.0f64 * 31.0).ln() + 15.0 * 4f64.ln()) / asym.rho();
    let (bad_a, msg_a) = tail_violations(&asym, 10_000, horizon);
    report(
        6,
        "coupling tail below the spectral bound",
        bad_s == 0 && bad_a == 0,
        &format!("symmetric: {msg_s}; p = 0.8: {msg_a}"),
        started,
    );
}

#[test]
fn c07_coupling_time_scaling() {
    let started = Instant::now();
    let mut ratios = Vec::new();
    for (n, replicas) in [(64usize, 200u64), (128, 120), (256, 100)] {
        let k = n / 2;
        let spec = ChainSpec::corner_flip(n, k).unwrap();
        let lo = AnyState::extremal(&spec, Extreme::Bottom).unwrap();
        let hi = AnyState::extremal(&spec, Extreme::Top).unwrap();
        let reports =
            coupling_batch(&spec, &lo, &hi, 7, replicas, None, CouplingMode::Graphical).unwrap();
        let taus: Vec<f64> = reports.iter().map(|r| r.tau.unwrap_or(f64::INFINITY)).collect();
        let scale = 2.0 / (PI * PI) * (n * n) as f64 * (k as f64).ln();
        ratios.push((n, median(&taus).unwrap() / scale));
    }
    let pass = ratios.iter().all(|(_, r)| (0.6..=1.6).contains(r));
    let detail: Vec<String> = ratios.iter().map(|(n, r)| format!("N={n}: {r:.3}")).collect();
    report(
        7,
        "median coupling time / (2/π²)N² log k",
        pass,
        &detail.join(", "),
        started,
    );
}

#[test]
fn c08_symmetric_cutoff_trend() {
    let started = Instant::now();
    let exact_only = CutoffOptions {
        monte_carlo: false,
        ..CutoffOptions::default()
    };
    let scan = cutoff_scan_with(Model::Ssep, &[6, 8, 10], (0.25, 0.75), 1, &exact_only).unwrap();
    let ratios: Vec<f64> = scan.records.iter().map(|r| r.exact_ratio.unwrap()).collect();
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);

    let mc = CutoffOptions {
        upper_replicas: 100,
        lower_replicas: 1000,
        points: 40,
        horizon: 4.0,
        ..CutoffOptions::default()
    };
    let big = cutoff_scan_with(Model::Ssep, &[256], (0.25, 0.75), 8, &mc).unwrap();
    let r = big.records[0];
    let (lo, hi) = (0.5 * r.theory, 2.5 * r.theory);
    let bracket = (
        r.t_half_lower.unwrap_or(0.0),
        r.t_half_upper.unwrap_or(f64::INFINITY),
    );
    let intersects = bracket.0 <= hi && bracket.1 >= lo;
    report(
        8,
        "symmetric exclusion cutoff",
        decreasing && intersects,
        &format!(
            "exact ratios {ratios:.4?}; N=256 bracket [{:.0}, {:.0}] vs [{lo:.0}, {hi:.0}]",
            bracket.0, bracket.1
        ),
        started,
    );
}

#[test]
fn c09_asymmetric_cutoff() {
    let started = Instant::now();
    let spec = ChainSpec::asep(256, 128, 0.8).unwrap();
    let theory = theory_mixing_time(&spec);
    let mc = CutoffOptions {
        upper_replicas: 400,
        lower_replicas: 1000,
        points: 40,
        horizon: 3.0,
        ..CutoffOptions::default()
    };
    let scan = cutoff_scan_with(Model::Asep, &[256], (0.25, 0.75), 9, &mc).unwrap();
    let r = scan.records[0];
    let (lo, hi) = (0.8 * theory, 1.2 * theory);
    let bracket = (
        r.t_half_lower.unwrap_or(0.0),
        r.t_half_upper.unwrap_or(f64::INFINITY),
    );
    let intersects = bracket.0 <= hi && bracket.1 >= lo;

    let cfg = ExperimentConfig::new(spec, TimeGrid::new(vec![0.0]).unwrap(), 200, 10).unwrap();
    let prof = density_profile(&cfg, 1.1 * theory).unwrap();
    let l1: f64 = prof
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let step = if (i + 1) as f64 / 256.0 > 0.5 { 1.0 } else { 0.0 };
            (d - step).abs()
        })
        .sum();
    report(
        9,
        "asymmetric exclusion cutoff constant",
        intersects && l1 < 0.1 * 256.0,
        &format!(
            "bracket [{:.0}, {:.0}] vs [{lo:.0}, {hi:.0}]; profile L1 {l1:.2} (limit 25.6)",
            bracket.0, bracket.1
        ),
        started,
    );
}

#[test]
fn c10_sandwich() {
    let started = Instant::now();
    let mut specs = Vec::new();
    for n in 2..=8 {
        for k in 1..n {
            specs.push(ChainSpec::ssep(n, k).unwrap());
            specs.push(ChainSpec::asep(n, k, 0.8).unwrap());
            specs.push(ChainSpec::corner_flip(n, k).unwrap());
            specs.push(ChainSpec::biased_corner_flip(n, k, 0.8).unwrap());
        }
    }
    for n in 2..=5 {
        specs.push(ChainSpec::interchange(n).unwrap());
        specs.push(ChainSpec::biased_interchange(n, 0.8).unwrap());
    }
    let mut failures = Vec::new();
    let mut points = 0;
    for (i, spec) in specs.iter().enumerate() {
        let chain = ExactChain::new(spec).unwrap();
        let horizon = 2.0 * chain.mixing_time(0.05).unwrap();
        let grid = TimeGrid::linspace(0.0, horizon, 12).unwrap();
        let exact = chain.distance_curve(grid.times()).unwrap();
        let cfg = ExperimentConfig::new(spec.clone(), grid, 2000, 100 + i as u64).unwrap();
        let upper = estimate_distance_upper(&cfg).unwrap();
        let lower = estimate_distance_lower(&cfg).unwrap();
        let (su, sl) = (upper.std_errors.unwrap(), lower.std_errors.unwrap());
        for j in 0..exact.values.len() {
            points += 1;
            let d = exact.values[j];
            if lower.values[j] - 3.0 * sl[j] > d || d > upper.values[j] + 3.0 * su[j] {
                failures.push(format!("{spec} t={:.3}", exact.times[j]));
            }
        }
    }
    report(
        10,
        "lower ≤ exact ≤ upper on enumerable chains",
        failures.is_empty(),
        &format!("{} chains, {points} points, failures: {failures:?}", specs.len()),
        started,
    );
}

/// A random state and a state above it, obtained by pushing the first one
/// up with a run of "+" updates.
fn ordered_pair(spec: &ChainSpec, rng: &mut ChaCha8Rng) -> (AnyState, AnyState) {
    let shape = match spec.model() {
        Model::BiasedInterchange => ChainSpec::interchange(spec.n()).unwrap(),
        Model::Asep => ChainSpec::ssep(spec.n(), spec.k().unwrap()).unwrap(),
        Model::BiasedCornerFlip => ChainSpec::corner_flip(spec.n(), spec.k().unwrap()).unwrap(),
        _ => spec.clone(),
    };
    let lo = sample_stationary_with(&shape, rng).unwrap();
    let mut hi = lo.clone();
    for _ in 0..rng.random_range(0..4 * spec.n()) {
        let site = rng.random_range(1..spec.n());
        hi = mixlab::dynamics::local_update(spec, &hi, site, 0.999_999).unwrap();
    }
    (lo, hi)
}

fn order_holds<S: ChainState>(spec: &ChainSpec, lo: S, hi: S, seed: u64, events: usize) -> bool {
    let mut ens = CoupledEnsemble::new(spec.clone(), vec![lo, hi]).unwrap();
    let mut stream = EventStream::for_replica(spec.sites(), seed, 0);
    for _ in 0..events {
        ens.step_graphical(&stream.next_event());
        if !ens.is_chain_ordered().unwrap() {
            return false;
        }
    }
    true
}

#[test]
fn c11_order_preservation_and_refined_marginals() {
    let started = Instant::now();
    let specs = [
        ChainSpec::interchange(16).unwrap(),
        ChainSpec::biased_interchange(16, 0.8).unwrap(),
        ChainSpec::ssep(24, 10).unwrap(),
        ChainSpec::asep(24, 10, 0.8).unwrap(),
        ChainSpec::corner_flip(24, 10).unwrap(),
        ChainSpec::biased_corner_flip(24, 10, 0.8).unwrap(),
        ChainSpec::simplex(16).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut violations = 0;
    let mut runs = 0;
    for spec in &specs {
        for pair in 0..5u64 {
            let (lo, hi) = ordered_pair(spec, &mut rng);
            assert!(lo.partial_le(&hi).unwrap());
            runs += 1;
            let ok = match (lo, hi) {
                (AnyState::Permutation(a), AnyState::Permutation(b)) => {
                    order_holds(spec, a, b, pair, 100_000)
                }
                (AnyState::Exclusion(a), AnyState::Exclusion(b)) => {
                    order_holds(spec, a, b, pair, 100_000)
                }
                (AnyState::Path(a), AnyState::Path(b)) => order_holds(spec, a, b, pair, 100_000),
                (AnyState::Simplex(a), AnyState::Simplex(b)) => {
                    order_holds(spec, a, b, pair, 100_000)
                }
                _ => unreachable!(),
            };
            violations += (!ok) as usize;
        }
    }

    // Refined coupling of (∨, ∧) in Ξ_{32,16}: each coordinate must be a
    // corner-flip chain on its own. Compare Φ at t = N² with solo runs.
    let spec = ChainSpec::corner_flip(32, 16).unwrap();
    let t = 1024.0;
    let bottom = path_of(AnyState::extremal(&spec, Extreme::Bottom).unwrap());
    let top = path_of(AnyState::extremal(&spec, Extreme::Top).unwrap());
    let replicas = 2000u64;
    let (mut lo_phi, mut hi_phi) = (Vec::new(), Vec::new());
    for r in 0..replicas {
        let mut stream = EventStream::for_replica(spec.sites(), 31, r);
        let mut marks = stream_rng(31, r, Lane::IndependentMarks);
        let mut pair = (bottom.clone(), top.clone());
        loop {
            let e = stream.next_event();
            if e.time > t {
                break;
            }
            pair = coupled_step_refined(pair, e, marks.random::<f64>(), 0.5).unwrap();
        }
        lo_phi.push(slowest_mode_statistic(&pair.0.height_profile()));
        hi_phi.push(slowest_mode_statistic(&pair.1.height_profile()));
    }
    let solo = |start: &LatticePath| -> Vec<f64> {
        (0..replicas)
            .map(|r| {
                let (end, _) =
                    simulate_replica(&spec, &AnyState::Path(start.clone()), t, 77, r, &[]).unwrap();
                slowest_mode_statistic(&end.height_profile())
            })
            .collect()
    };
    let p_lo = ks_p_value(&lo_phi, &solo(&bottom));
    let p_hi = ks_p_value(&hi_phi, &solo(&top));
    report(
        11,
        "order preservation and refined marginals",
        violations == 0 && p_lo >= 0.01 && p_hi >= 0.01,
        &format!(
            "{runs} runs of 1e5 events, {violations} violations; KS p-values {p_lo:.3} (bottom), {p_hi:.3} (top)"
        ),
        started,
    );
}

#[test]
fn c12_cftp_law() {
    let started = Instant::now();
    let spec = ChainSpec::asep(4, 2, 0.8).unwrap();
    let chain = ExactChain::new(&spec).unwrap();
    let pi = chain.stationary();
    let n = 100_000u64;
    let mut counts = vec![0u64; chain.len()];
    for r in 0..n {
        let s = cftp_sample_replica(&spec, 12, r).unwrap();
        counts[chain.index().index_of(&s).unwrap()] += 1;
    }
    let mut worst = 0.0f64;
    for (c, p) in counts.iter().zip(pi) {
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        worst = worst.max((*c as f64 / n as f64 - p).abs() / sigma);
    }
    report(
        12,
        "CFTP reproduces the stationary law",
        worst < 3.0,
        &format!("max deviation {worst:.2}σ over {} states", chain.len()),
        started,
    );
}
