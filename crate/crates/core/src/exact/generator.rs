use std::collections::VecDeque;

use nalgebra::DMatrix;

use super::index::StateIndex;
use crate::dynamics::{AnyState, ChainState};
use crate::error::Result;

/// Sparse rate matrix `L` in compressed-row form. Off-diagonal entries are
/// stored per row; the diagonal is `-Σ_y L(x,y)`.
#[derive(Clone, Debug)]
pub struct GeneratorMatrix {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    rates: Vec<f64>,
    diag: Vec<f64>,
}

impl GeneratorMatrix {
    /// Builds `L` from `(from, to, rate)` triples; repeated pairs are summed
    /// and self-loops dropped.
    pub fn from_triples(size: usize, mut triples: Vec<(usize, usize, f64)>) -> Self {
        triples.retain(|&(x, y, r)| x != y && r != 0.0);
        triples.sort_by_key(|&(x, y, _)| (x, y));
        let mut row_ptr = vec![0usize; size + 1];
        let mut cols = Vec::with_capacity(triples.len());
        let mut rates: Vec<f64> = Vec::with_capacity(triples.len());
        let mut last: Option<(usize, usize)> = None;
        for (x, y, r) in triples {
            if last == Some((x, y)) {
                *rates.last_mut().expect("previous entry") += r;
                continue;
            }
            cols.push(y);
            rates.push(r);
            row_ptr[x + 1] += 1;
            last = Some((x, y));
        }
        for x in 0..size {
            row_ptr[x + 1] += row_ptr[x];
        }
        let diag = (0..size)
            .map(|x| -rates[row_ptr[x]..row_ptr[x + 1]].iter().sum::<f64>())
            .collect();
        Self {
            row_ptr,
            cols,
            rates,
            diag,
        }
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// Number of stored off-diagonal entries.
    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    /// Off-diagonal entries `(y, L(x,y))` of row `x`.
    pub fn row(&self, x: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[x]..self.row_ptr[x + 1];
        self.cols[r.clone()].iter().copied().zip(self.rates[r].iter().copied())
    }

    pub fn diag(&self, x: usize) -> f64 {
        self.diag[x]
    }

    /// `L(x,y)`, including the diagonal.
    pub fn rate(&self, x: usize, y: usize) -> f64 {
        if x == y {
            return self.diag[x];
        }
        let r = self.row_ptr[x]..self.row_ptr[x + 1];
        match self.cols[r.clone()].binary_search(&y) {
            Ok(j) => self.rates[r.start + j],
            Err(_) => 0.0,
        }
    }

    /// `max_x -L(x,x)`.
    pub fn max_exit_rate(&self) -> f64 {
        self.diag.iter().fold(0.0f64, |m, &d| m.max(-d))
    }

    /// `max_x |Σ_y L(x,y)|`.
    pub fn row_sum_residual(&self) -> f64 {
        (0..self.size())
            .map(|x| (self.row(x).map(|(_, r)| r).sum::<f64>() + self.diag[x]).abs())
            .fold(0.0, f64::max)
    }

    /// `‖μ L‖_∞`.
    pub fn left_residual(&self, mu: &[f64]) -> f64 {
        let mut out: Vec<f64> = mu.iter().zip(&self.diag).map(|(m, d)| m * d).collect();
        for (x, &m) in mu.iter().enumerate() {
            for (y, r) in self.row(x) {
                out[y] += m * r;
            }
        }
        out.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// `out = μ P` for the uniformized kernel `P = I + L/Λ`.
    pub(crate) fn uniformized_step(&self, mu: &[f64], inv_rate: f64, out: &mut [f64]) {
        for (o, (&m, &d)) in out.iter_mut().zip(mu.iter().zip(&self.diag)) {
            *o = m * (1.0 + d * inv_rate);
        }
        for (x, &m) in mu.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            let w = m * inv_rate;
            for (y, r) in self.row(x) {
                out[y] += w * r;
            }
        }
    }

    /// Whether the positive-rate graph is strongly connected.
    pub fn is_irreducible(&self) -> bool {
        let n = self.size();
        if n == 0 {
            return false;
        }
        let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            for (y, r) in self.row(x) {
                if r > 0.0 {
                    reverse[y].push(x);
                }
            }
        }
        let reach = |next: &dyn Fn(usize) -> Vec<usize>| {
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            let mut count = 1;
            while let Some(x) = queue.pop_front() {
                for y in next(x) {
                    if !seen[y] {
                        seen[y] = true;
                        count += 1;
                        queue.push_back(y);
                    }
                }
            }
            count
        };
        let forward = |x: usize| self.row(x).filter(|&(_, r)| r > 0.0).map(|(y, _)| y).collect();
        let backward = |x: usize| reverse[x].clone();
        reach(&forward) == n && reach(&backward) == n
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.size();
        let mut m = DMatrix::zeros(n, n);
        for x in 0..n {
            m[(x, x)] = self.diag[x];
            for (y, r) in self.row(x) {
                m[(x, y)] = r;
            }
        }
        m
    }
}

/// Generator of the chain on the enumerated space: at each site the "+"
/// resolution fires at rate `p` and the "−" one at rate `q`.
pub(crate) fn generator_on(index: &StateIndex) -> Result<GeneratorMatrix> {
    let spec = index.spec();
    let (p, q) = (spec.p(), spec.q());
    // A mark of exactly 1-p selects "+", a mark of 0 selects "−" (p < 1).
    let plus_mark = 1.0 - p;
    let mut triples = Vec::with_capacity(index.len() * spec.sites());
    for x in 0..index.len() {
        let state = index.state(x);
        for site in 1..spec.n() {
            for (mark, rate) in [(plus_mark, p), (0.0, q)] {
                let mut next = state.clone();
                let changed = match &mut next {
                    AnyState::Permutation(s) => s.apply(site, mark, p),
                    AnyState::Exclusion(s) => s.apply(site, mark, p),
                    AnyState::Path(s) => s.apply(site, mark, p),
                    AnyState::Simplex(_) => unreachable!("simplex is not enumerable"),
                };
                if changed {
                    let y = index.index_of(&next).expect("moves stay in the space");
                    triples.push((x, y, rate));
                }
            }
        }
    }
    Ok(GeneratorMatrix::from_triples(index.len(), triples))
}
