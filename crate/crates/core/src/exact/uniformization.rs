//! Transient laws `μ e^{tL}` as Poisson mixtures of powers of the jump
//! kernel `P = I + L/Λ`:
//! `μ e^{tL} = Σ_n e^{-Λt} (Λt)^n / n! · μ Pⁿ`.

use super::generator::GeneratorMatrix;

/// Total Poisson mass discarded from both tails, per time point.
pub const TRUNCATION: f64 = 1e-11;

/// Poisson weights of one time point, restricted to `[lo, lo + w.len())`.
#[derive(Clone, Debug)]
pub(crate) struct PoissonWindow {
    pub lo: usize,
    pub weights: Vec<f64>,
}

impl PoissonWindow {
    pub fn hi(&self) -> usize {
        self.lo + self.weights.len()
    }
}

/// Poisson(`mean`) weights with at most `TRUNCATION` total mass dropped.
///
/// Weights are built outward from the mode through the ratios
/// `w_{n+1}/w_n = mean/(n+1)`, in log space relative to the mode, and then
/// normalized. Each ratio is close to one near the mode, so rounding does not
/// accumulate the way a recursion started at `e^{-mean}` would.
pub(crate) fn poisson_window(mean: f64) -> PoissonWindow {
    if mean <= 0.0 {
        return PoissonWindow {
            lo: 0,
            weights: vec![1.0],
        };
    }
    let log_mean = mean.ln();
    let mode = mean.floor() as usize;
    // Relative tail budget; the mode weight is at most one.
    let budget = TRUNCATION / 4.0;

    let mut right = Vec::new();
    let mut log_w = 0.0f64;
    let mut n = mode;
    loop {
        let ratio = mean / (n + 1) as f64;
        if ratio < 1.0 && log_w.exp() * ratio / (1.0 - ratio) < budget {
            break;
        }
        n += 1;
        log_w += log_mean - (n as f64).ln();
        right.push(log_w);
    }

    let mut left = Vec::new();
    let mut log_w = 0.0f64;
    let mut n = mode;
    while n > 0 {
        let ratio = n as f64 / mean;
        if ratio < 1.0 && log_w.exp() * ratio / (1.0 - ratio) < budget {
            break;
        }
        log_w += (n as f64).ln() - log_mean;
        n -= 1;
        left.push(log_w);
    }

    let lo = mode - left.len();
    let mut weights: Vec<f64> = left
        .iter()
        .rev()
        .chain(std::iter::once(&0.0))
        .chain(right.iter())
        .map(|l| l.exp())
        .collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    PoissonWindow { lo, weights }
}

/// `μ e^{tL}` for each `t` in `times`, sharing one sequence `μ Pⁿ` across
/// all time points.
pub(crate) fn transient(gen: &GeneratorMatrix, mu: &[f64], times: &[f64]) -> Vec<Vec<f64>> {
    let size = gen.size();
    let rate = gen.max_exit_rate();
    let mut out = vec![vec![0.0; size]; times.len()];
    if rate == 0.0 {
        for row in &mut out {
            row.copy_from_slice(mu);
        }
        return out;
    }
    let windows: Vec<PoissonWindow> = times.iter().map(|&t| poisson_window(rate * t)).collect();
    let n_max = windows.iter().map(PoissonWindow::hi).max().unwrap_or(0);
    let inv_rate = 1.0 / rate;
    let mut v = mu.to_vec();
    let mut next = vec![0.0; size];
    for n in 0..n_max {
        for (w, row) in windows.iter().zip(out.iter_mut()) {
            if n >= w.lo && n < w.hi() {
                let weight = w.weights[n - w.lo];
                for (o, &x) in row.iter_mut().zip(&v) {
                    *o += weight * x;
                }
            }
        }
        if n + 1 < n_max {
            gen.uniformized_step(&v, inv_rate, &mut next);
            std::mem::swap(&mut v, &mut next);
        }
    }
    out
}
