use serde::Serialize;

use crate::error::{Error, Result};

/// `½ Σ_x |α(x) - β(x)|`, which equals `max_A |α(A) - β(A)|`.
pub fn tv_distance(alpha: &[f64], beta: &[f64]) -> Result<f64> {
    if alpha.len() != beta.len() {
        return Err(Error::ShapeMismatch(format!(
            "laws on {} and {} states",
            alpha.len(),
            beta.len()
        )));
    }
    for law in [alpha, beta] {
        let sum: f64 = law.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || law.iter().any(|&v| v < -1e-12 || !v.is_finite()) {
            return Err(Error::NotNormalized { sum });
        }
    }
    Ok(half_l1(alpha, beta).clamp(0.0, 1.0))
}

#[inline]
pub(crate) fn half_l1(alpha: &[f64], beta: &[f64]) -> f64 {
    0.5 * alpha.iter().zip(beta).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Exact,
    UpperEstimate,
    LowerEstimate,
}

/// `t ↦ d(t)` on a time grid, exact or estimated. Estimates carry one
/// standard error per grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: CurveKind,
    pub std_errors: Option<Vec<f64>>,
}

impl DistanceCurve {
    /// First time the curve reaches `level` or below, linearly interpolated
    /// between grid points; `None` if it never does on the grid.
    pub fn crossing(&self, level: f64) -> Option<f64> {
        let j = self.values.iter().position(|&v| v <= level)?;
        if j == 0 {
            return Some(self.times[0]);
        }
        let (t0, t1) = (self.times[j - 1], self.times[j]);
        let (v0, v1) = (self.values[j - 1], self.values[j]);
        Some(if v0 == v1 {
            t1
        } else {
            t0 + (t1 - t0) * (v0 - level) / (v0 - v1)
        })
    }

    pub fn half_crossing(&self) -> Option<f64> {
        self.crossing(0.5)
    }

    /// Whether successive values never increase by more than `slack`.
    pub fn is_nonincreasing(&self, slack: f64) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0] + slack)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `max_A |α(A) - β(A)|` over all `2^|Ω|` events.
    fn tv_by_events(alpha: &[f64], beta: &[f64]) -> f64 {
        let n = alpha.len();
        (0u32..1 << n)
            .map(|mask| {
                (0..n)
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| alpha[i] - beta[i])
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn examples() {
        let a = [0.5, 0.5];
        let b = [0.25, 0.75];
        assert_eq!(tv_distance(&a, &a).unwrap(), 0.0);
        assert!((tv_distance(&a, &b).unwrap() - 0.25).abs() < 1e-15);
        assert!((tv_by_events(&a, &b) - 0.25).abs() < 1e-15);
        assert_eq!(tv_distance(&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]).unwrap(), 1.0);
        assert!(matches!(tv_distance(&a, &[1.0]), Err(Error::ShapeMismatch(_))));
        assert!(matches!(tv_distance(&a, &[0.5, 0.6]), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn agrees_with_subset_supremum() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for size in 1..=12 {
            for _ in 0..20 {
                let mut a: Vec<f64> = (0..size).map(|_| rng.random::<f64>()).collect();
                let mut b: Vec<f64> = (0..size).map(|_| rng.random::<f64>()).collect();
                for v in [&mut a, &mut b] {
                    let s: f64 = v.iter().sum();
                    v.iter_mut().for_each(|x| *x /= s);
                }
                let d = tv_distance(&a, &b).unwrap();
                assert!((d - tv_by_events(&a, &b)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn crossing_interpolates() {
        let c = DistanceCurve {
            times: vec![0.0, 1.0, 2.0],
            values: vec![1.0, 0.6, 0.2],
            kind: CurveKind::Exact,
            std_errors: None,
        };
        assert!((c.half_crossing().unwrap() - 1.25).abs() < 1e-12);
        assert_eq!(c.crossing(0.1), None);
        assert!(c.is_nonincreasing(0.0));
    }
}
