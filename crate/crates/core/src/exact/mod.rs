//! Brute-force ground truth on enumerable state spaces.

mod distance;
mod generator;
mod index;
mod uniformization;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

pub use distance::{tv_distance, CurveKind, DistanceCurve};
pub use generator::GeneratorMatrix;
pub use index::{
    enumerate_states, enumerate_states_capped, state_space_size, StateIndex, DEFAULT_STATE_CAP,
};

use crate::dynamics::AnyState;
use crate::error::{out_of_range, Error, Result};
use crate::states::{inversion_count, particle_area, path_area, ChainSpec};
use distance::half_l1;

/// Largest space on which the dense null-space solve cross-checks the
/// closed-form stationary law.
pub const DENSE_CHECK_LIMIT: usize = 2_000;

/// Tolerance for the closed-form versus linear-solve comparison.
const STATIONARY_AGREEMENT: f64 = 1e-12;

/// An enumerated chain: state index, generator and stationary law.
#[derive(Clone, Debug)]
pub struct ExactChain {
    index: StateIndex,
    generator: GeneratorMatrix,
    pi: Vec<f64>,
}

pub fn build_generator(spec: &ChainSpec) -> Result<GeneratorMatrix> {
    generator::generator_on(&enumerate_states(spec)?)
}

/// Normalized `λ^{-A}` (exclusion and paths) or `λ^{-D}` (permutations).
pub fn stationary_closed_form(index: &StateIndex) -> Vec<f64> {
    let log_lambda = index.spec().lambda().ln();
    let weights: Vec<f64> = (0..index.len())
        .map(|x| {
            let energy = match index.state(x) {
                AnyState::Exclusion(xi) => particle_area(&xi),
                AnyState::Path(z) => path_area(&z),
                AnyState::Permutation(s) => inversion_count(&s),
                AnyState::Simplex(_) => unreachable!("simplex is not enumerable"),
            };
            (-(energy as f64) * log_lambda).exp()
        })
        .collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Solves `π L = 0`, `Σ π = 1` densely by replacing the last balance equation
/// with the normalization.
pub fn stationary_solve(gen: &GeneratorMatrix) -> Result<Vec<f64>> {
    let n = gen.size();
    let mut a: DMatrix<f64> = gen.to_dense().transpose();
    a.row_mut(n - 1).fill(1.0);
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let x = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::SolveFailure("singular balance system".into()))?;
    Ok(x.iter().copied().collect())
}

impl ExactChain {
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        Self::with_cap(spec, DEFAULT_STATE_CAP)
    }

    /// Enumerates the space, builds `L` and the stationary law. On spaces up
    /// to `DENSE_CHECK_LIMIT` states the closed form is checked against a
    /// linear solve of `π L = 0`.
    pub fn with_cap(spec: &ChainSpec, cap: usize) -> Result<Self> {
        let index = enumerate_states_capped(spec, cap)?;
        let generator = generator::generator_on(&index)?;
        let pi = stationary_closed_form(&index);
        if index.len() <= DENSE_CHECK_LIMIT {
            let solved = stationary_solve(&generator)?;
            let gap = pi
                .iter()
                .zip(&solved)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            if gap >= STATIONARY_AGREEMENT {
                return Err(Error::SolveFailure(format!(
                    "closed-form and solved stationary laws differ by {gap:e}"
                )));
            }
        }
        Ok(Self {
            index,
            generator,
            pi,
        })
    }

    pub fn spec(&self) -> &ChainSpec {
        self.index.spec()
    }

    pub fn index(&self) -> &StateIndex {
        &self.index
    }

    pub fn generator(&self) -> &GeneratorMatrix {
        &self.generator
    }

    pub fn stationary(&self) -> &[f64] {
        &self.pi
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    /// `‖π L‖_∞`.
    pub fn balance_residual(&self) -> f64 {
        self.generator.left_residual(&self.pi)
    }

    /// `max_{x,y} |π(x) L(x,y) - π(y) L(y,x)|`.
    pub fn detailed_balance_residual(&self) -> f64 {
        detailed_balance_of(&self.generator, &self.pi)
    }

    /// `μ e^{tL}` at each time.
    pub fn transient_from(&self, mu: &[f64], times: &[f64]) -> Result<Vec<Vec<f64>>> {
        if mu.len() != self.len() {
            return Err(Error::ShapeMismatch(format!(
                "initial law on {} states, space has {}",
                mu.len(),
                self.len()
            )));
        }
        check_times(times)?;
        Ok(uniformization::transient(&self.generator, mu, times))
    }

    /// Row `x` of `e^{tL}` at each time.
    pub fn transient_row(&self, x: usize, times: &[f64]) -> Result<Vec<Vec<f64>>> {
        let mut mu = vec![0.0; self.len()];
        mu[x] = 1.0;
        self.transient_from(&mu, times)
    }

    /// `‖δ_x e^{tL} - π‖_TV` at each time.
    pub fn distances_from(&self, x: usize, times: &[f64]) -> Result<Vec<f64>> {
        Ok(self
            .transient_row(x, times)?
            .iter()
            .map(|row| half_l1(row, &self.pi).min(1.0))
            .collect())
    }

    /// `d_x(t)` for every state `x`, indexed `[x][time]`.
    pub fn distances_from_all(&self, times: &[f64]) -> Result<Vec<Vec<f64>>> {
        check_times(times)?;
        (0..self.len())
            .into_par_iter()
            .map(|x| self.distances_from(x, times))
            .collect()
    }

    /// `d(t) = max_x d_x(t)`; the supremum over initial laws is attained at
    /// point masses since the distance is convex in the initial law.
    pub fn distance_curve(&self, times: &[f64]) -> Result<DistanceCurve> {
        let all = self.distances_from_all(times)?;
        let values = (0..times.len())
            .map(|j| all.iter().map(|d| d[j]).fold(0.0, f64::max))
            .collect();
        Ok(DistanceCurve {
            times: times.to_vec(),
            values,
            kind: CurveKind::Exact,
            std_errors: None,
        })
    }

    /// An initial state attaining `d(t)` at each time.
    pub fn worst_states(&self, times: &[f64]) -> Result<Vec<usize>> {
        let all = self.distances_from_all(times)?;
        Ok((0..times.len())
            .map(|j| {
                (0..self.len())
                    .max_by(|&a, &b| all[a][j].total_cmp(&all[b][j]).then(b.cmp(&a)))
                    .expect("non-empty space")
            })
            .collect())
    }

    /// `E_x[f(X_t)]` at each time.
    pub fn expectation_from(&self, x: usize, f: &[f64], times: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.len() {
            return Err(Error::ShapeMismatch("observable length".into()));
        }
        Ok(self
            .transient_row(x, times)?
            .iter()
            .map(|row| row.iter().zip(f).map(|(p, v)| p * v).sum())
            .collect())
    }

    /// `T_mix(ε) = inf{t : d(t) ≤ ε}` to relative precision `1e-10`.
    ///
    /// Since every `d_x` is nonincreasing, `T_mix = max_x T_x` with
    /// `T_x = inf{t : d_x(t) ≤ ε}`. Once `d_x(s) ≤ ε` is seen, `T_x ≤ s` and
    /// `x` can no longer realize the maximum above `s`; the bisection only
    /// follows the states still above threshold.
    pub fn mixing_time(&self, eps: f64) -> Result<f64> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(out_of_range("eps", format!("{eps} not in (0,1)")));
        }
        let min_pi = self.pi.iter().copied().fold(f64::INFINITY, f64::min);
        if 1.0 - min_pi <= eps {
            return Ok(0.0);
        }
        let above = |cands: &[usize], t: f64| -> Result<Vec<usize>> {
            let d: Vec<f64> = cands
                .par_iter()
                .map(|&x| self.distances_from(x, &[t]).map(|v| v[0]))
                .collect::<Result<_>>()?;
            Ok(cands
                .iter()
                .zip(d)
                .filter(|&(_, v)| v > eps)
                .map(|(&x, _)| x)
                .collect())
        };
        let mut candidates: Vec<usize> = (0..self.len()).collect();
        let mut lo = 0.0;
        let mut hi = 1.0 / self.generator.max_exit_rate();
        loop {
            let still = above(&candidates, hi)?;
            if still.is_empty() {
                break;
            }
            if hi > 1e12 {
                return Err(Error::SolveFailure(format!("d(t) above {eps} at t = {hi:e}")));
            }
            candidates = still;
            lo = hi;
            hi *= 2.0;
        }
        while hi - lo > 1e-10 * hi {
            let mid = 0.5 * (lo + hi);
            let still = above(&candidates, mid)?;
            if still.is_empty() {
                hi = mid;
            } else {
                candidates = still;
                lo = mid;
            }
        }
        Ok(hi)
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if let Some(t) = times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(out_of_range("t", format!("{t}")));
    }
    Ok(())
}

pub(crate) fn detailed_balance_of(gen: &GeneratorMatrix, pi: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for x in 0..gen.size() {
        for (y, r) in gen.row(x) {
            worst = worst.max((pi[x] * r - pi[y] * gen.rate(y, x)).abs());
        }
    }
    worst
}

/// Stationary law of an enumerable chain (closed form, solve-checked).
pub fn stationary_exact(spec: &ChainSpec) -> Result<Vec<f64>> {
    Ok(ExactChain::new(spec)?.pi)
}

pub fn detailed_balance_residual(spec: &ChainSpec) -> Result<f64> {
    Ok(ExactChain::new(spec)?.detailed_balance_residual())
}

/// Residual of an arbitrary candidate law, e.g. a deliberately perturbed one.
pub fn detailed_balance_residual_for(gen: &GeneratorMatrix, pi: &[f64]) -> Result<f64> {
    if pi.len() != gen.size() {
        return Err(Error::ShapeMismatch("law and generator sizes differ".into()));
    }
    Ok(detailed_balance_of(gen, pi))
}

pub fn distance_curve_exact(spec: &ChainSpec, times: &[f64]) -> Result<DistanceCurve> {
    ExactChain::new(spec)?.distance_curve(times)
}

pub fn mixing_time_exact(spec: &ChainSpec, eps: f64) -> Result<f64> {
    ExactChain::new(spec)?.mixing_time(eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_site_asep_stationary() {
        let pi = stationary_exact(&ChainSpec::asep(2, 1, 0.8).unwrap()).unwrap();
        // Index 0 is "10" (packed left), index 1 is "01" (packed right).
        assert!((pi[0] - 0.2).abs() < 1e-15);
        assert!((pi[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn biased_interchange_weights() {
        let spec = ChainSpec::biased_interchange(3, 0.8).unwrap();
        let chain = ExactChain::new(&spec).unwrap();
        let z: f64 = [0, 1, 1, 2, 2, 3].iter().map(|&d| 4f64.powi(-d)).sum();
        for x in 0..6 {
            let AnyState::Permutation(s) = chain.index().state(x) else {
                panic!()
            };
            let d = inversion_count(&s) as i32;
            assert!((chain.stationary()[x] - 4f64.powi(-d) / z).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetric_laws_are_uniform() {
        for spec in [ChainSpec::ssep(6, 3).unwrap(), ChainSpec::interchange(4).unwrap()] {
            let chain = ExactChain::new(&spec).unwrap();
            let u = 1.0 / chain.len() as f64;
            assert!(chain.stationary().iter().all(|&p| (p - u).abs() < 1e-15));
        }
    }

    #[test]
    fn perturbed_law_breaks_detailed_balance() {
        let chain = ExactChain::new(&ChainSpec::asep(4, 2, 0.8).unwrap()).unwrap();
        assert!(chain.detailed_balance_residual() < 1e-12);
        let mut bad = chain.stationary().to_vec();
        bad[0] += 0.01;
        bad[1] -= 0.01;
        let r = detailed_balance_residual_for(chain.generator(), &bad).unwrap();
        assert!(r > 1e-4);
    }

    #[test]
    fn two_state_distance_and_mixing() {
        let spec = ChainSpec::ssep(2, 1).unwrap();
        let times: Vec<f64> = (0..50).map(|j| j as f64 * 0.2).collect();
        let c = distance_curve_exact(&spec, &times).unwrap();
        for (t, d) in times.iter().zip(&c.values) {
            assert!((d - 0.5 * (-t).exp()).abs() < 1e-9);
        }
        let t = mixing_time_exact(&spec, 0.25).unwrap();
        assert!((t - 2f64.ln()).abs() < 1e-6);
        assert_eq!(mixing_time_exact(&spec, 0.6).unwrap(), 0.0);
    }

    #[test]
    fn distance_at_zero_is_one_minus_min_pi() {
        let chain = ExactChain::new(&ChainSpec::asep(5, 2, 0.7).unwrap()).unwrap();
        let c = chain.distance_curve(&[0.0]).unwrap();
        let min_pi = chain.stationary().iter().copied().fold(1.0, f64::min);
        assert!((c.values[0] - (1.0 - min_pi)).abs() < 1e-12);
    }

    #[test]
    fn mixing_time_is_monotone_in_eps() {
        let chain = ExactChain::new(&ChainSpec::corner_flip(6, 3).unwrap()).unwrap();
        let a = chain.mixing_time(0.1).unwrap();
        let b = chain.mixing_time(0.25).unwrap();
        let c = chain.mixing_time(0.5).unwrap();
        assert!(a >= b && b >= c && c > 0.0);
        let curve = chain.distance_curve(&[b * (1.0 - 1e-6), b]).unwrap();
        assert!(curve.values[0] > 0.25 && curve.values[1] <= 0.25);
    }
}
