use mixlab::dynamics::{AnyState, Extreme};
use mixlab::exact::{
    detailed_balance_residual, enumerate_states, CurveKind, ExactChain, DENSE_CHECK_LIMIT,
};
use mixlab::spectral::{heat_solve, mixing_upper_bound, HeightField};
use mixlab::states::{project_to_exclusion, ChainSpec};

fn small_specs() -> Vec<ChainSpec> {
    let mut v = Vec::new();
    for n in 2..=8 {
        for k in 1..n {
            v.push(ChainSpec::ssep(n, k).unwrap());
            v.push(ChainSpec::asep(n, k, 0.8).unwrap());
            v.push(ChainSpec::corner_flip(n, k).unwrap());
            v.push(ChainSpec::biased_corner_flip(n, k, 0.8).unwrap());
        }
    }
    for n in 2..=5 {
        v.push(ChainSpec::interchange(n).unwrap());
        v.push(ChainSpec::biased_interchange(n, 0.8).unwrap());
    }
    v
}

#[test]
fn reversibility_on_small_instances() {
    for spec in small_specs() {
        let chain = ExactChain::new(&spec).unwrap();
        assert!(chain.len() <= DENSE_CHECK_LIMIT);
        assert!(chain.generator().row_sum_residual() < 1e-12, "{spec}");
        assert!(chain.generator().is_irreducible(), "{spec}");
        assert!(chain.detailed_balance_residual() < 1e-12, "{spec}");
        assert!(chain.balance_residual() < 1e-10, "{spec}");
    }
    assert!(detailed_balance_residual(&ChainSpec::ssep(4, 2).unwrap()).unwrap() < 1e-12);
}

#[test]
fn uniformization_matches_dense_exponential() {
    for spec in [
        ChainSpec::asep(5, 2, 0.8).unwrap(),
        ChainSpec::corner_flip(6, 3).unwrap(),
        ChainSpec::biased_interchange(4, 0.7).unwrap(),
    ] {
        let chain = ExactChain::new(&spec).unwrap();
        assert!(chain.len() <= 50);
        let dense = chain.generator().to_dense();
        let times = [0.0, 0.4, 1.7, 6.0, 25.0];
        for x in [0, chain.len() / 2, chain.len() - 1] {
            let rows = chain.transient_row(x, &times).unwrap();
            for (t, row) in times.iter().zip(&rows) {
                let e = (&dense * *t).exp();
                for y in 0..chain.len() {
                    assert!((row[y] - e[(x, y)]).abs() < 1e-8, "{spec} t={t}");
                }
            }
        }
    }
}

#[test]
fn exact_mean_heights_solve_heat_equation() {
    let spec = ChainSpec::corner_flip(6, 3).unwrap();
    let chain = ExactChain::new(&spec).unwrap();
    let AnyState::Path(bottom) = AnyState::extremal(&spec, Extreme::Bottom).unwrap() else {
        panic!()
    };
    let start = chain.index().index_of(&AnyState::Path(bottom.clone())).unwrap();
    let times = [0.5, 2.0, 8.0];
    for i in 0..=6 {
        let f: Vec<f64> = (0..chain.len())
            .map(|x| match chain.index().state(x) {
                AnyState::Path(z) => z.height(i) as f64,
                _ => unreachable!(),
            })
            .collect();
        let mean = chain.expectation_from(start, &f, &times).unwrap();
        for (t, m) in times.iter().zip(mean) {
            let u = heat_solve(&HeightField::from_path(&bottom), *t, 0.5).unwrap();
            assert!((u.values()[i] - m).abs() < 1e-6, "i={i} t={t}");
        }
    }
}

#[test]
fn curves_are_nonincreasing_and_start_at_one_minus_min_pi() {
    for spec in [
        ChainSpec::ssep(6, 2).unwrap(),
        ChainSpec::asep(6, 3, 0.8).unwrap(),
        ChainSpec::biased_interchange(4, 0.8).unwrap(),
    ] {
        let chain = ExactChain::new(&spec).unwrap();
        let times: Vec<f64> = (0..40).map(|j| j as f64 * 0.5).collect();
        let c = chain.distance_curve(&times).unwrap();
        assert_eq!(c.kind, CurveKind::Exact);
        assert!(c.is_nonincreasing(1e-12));
        let min_pi = chain.stationary().iter().copied().fold(1.0, f64::min);
        assert!((c.values[0] - (1.0 - min_pi)).abs() < 1e-12);
    }
}

#[test]
fn worst_start_is_extremal_for_corner_flip() {
    // An observation on small instances rather than a theorem.
    for (n, k) in [(4, 2), (6, 3), (7, 2), (8, 4)] {
        for spec in [
            ChainSpec::corner_flip(n, k).unwrap(),
            ChainSpec::biased_corner_flip(n, k, 0.8).unwrap(),
        ] {
            let chain = ExactChain::new(&spec).unwrap();
            let times = [0.5, 2.0, 5.0, 10.0];
            let all = chain.distances_from_all(&times).unwrap();
            let extremes: Vec<usize> = [Extreme::Top, Extreme::Bottom]
                .iter()
                .map(|&e| chain.index().index_of(&AnyState::extremal(&spec, e).unwrap()).unwrap())
                .collect();
            for j in 0..times.len() {
                let best = all.iter().map(|d| d[j]).fold(0.0, f64::max);
                let ext = extremes.iter().map(|&x| all[x][j]).fold(0.0, f64::max);
                assert!(best - ext < 1e-12, "{spec} t={}", times[j]);
            }
        }
    }
}

#[test]
fn projection_contracts_distance() {
    for n in 3..=5 {
        let ip = ExactChain::new(&ChainSpec::interchange(n).unwrap()).unwrap();
        let times = [0.5, 1.0, 3.0, 6.0];
        let d_ip = ip.distance_curve(&times).unwrap();
        for k in 1..n {
            let ex = ExactChain::new(&ChainSpec::ssep(n, k).unwrap()).unwrap();
            let d_ex = ex.distance_curve(&times).unwrap();
            for j in 0..times.len() {
                assert!(d_ip.values[j] >= d_ex.values[j] - 1e-12);
            }
        }
        // The projection of each permutation lands in the exclusion space.
        let ex = enumerate_states(&ChainSpec::ssep(n, 1).unwrap()).unwrap();
        for x in 0..ip.len() {
            let AnyState::Permutation(s) = ip.index().state(x) else { panic!() };
            let xi = project_to_exclusion(&s, 1).unwrap();
            assert!(ex.index_of(&AnyState::Exclusion(xi)).is_some());
        }
    }
}

#[test]
fn mixing_time_respects_upper_bound() {
    for n in 2..=8 {
        for k in 1..n {
            for spec in [
                ChainSpec::ssep(n, k).unwrap(),
                ChainSpec::asep(n, k, 0.8).unwrap(),
            ] {
                let t = ExactChain::new(&spec).unwrap().mixing_time(0.25).unwrap();
                assert!(t <= mixing_upper_bound(&spec, 0.25).unwrap(), "{spec}");
            }
        }
    }
}
