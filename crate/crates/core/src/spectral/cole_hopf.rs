use crate::error::{out_of_range, Error, Result};
use crate::states::{ChainSpec, LatticePath, Model};

/// `V(ζ,i) = λ^{ζ(i)/2}` for `i ∈ ⟦1,N-1⟧`.
pub fn cole_hopf(zeta: &LatticePath, lambda: f64) -> Result<Vec<f64>> {
    if !(lambda > 1.0) {
        return Err(out_of_range("lambda", format!("{lambda}, need lambda > 1")));
    }
    Ok(exp_heights(zeta, lambda)[1..zeta.n()].to_vec())
}

/// `W(ζ) = Σ_{i=1}^{N-1} λ^{ζ(i)/2}`, strictly increasing in the partial order.
pub fn w_functional(zeta: &LatticePath, lambda: f64) -> Result<f64> {
    Ok(cole_hopf(zeta, lambda)?.iter().sum())
}

/// `base^{ζ(i)/2}` on `⟦0,N⟧`.
fn exp_heights(zeta: &LatticePath, base: f64) -> Vec<f64> {
    let root = base.sqrt();
    zeta.heights().iter().map(|&h| root.powi(h)).collect()
}

/// Max-norm residual of the generator identities of the corner-flip chain.
///
/// Symmetric case: `𝔏 ζ(i) = ½ Δ_D ζ(i)`, boundary `ζ(0) = 0`, `ζ(N) = N-2k`.
///
/// Biased case: with up-flips at rate `p` and down-flips at rate `q`, the
/// observable `Ṽ(ζ,i) = λ^{-ζ(i)/2}` satisfies
/// `𝔏^{(p)} Ṽ(ζ,i) = √(pq) Δ_D Ṽ(ζ,i) - ϱ Ṽ(ζ,i)` with boundary values
/// `1` and `λ^{-(N/2-k)}`. Equivalently `λ^{ζ(i)/2}` satisfies it for the
/// chain whose up-flips have rate `q`. Each site's residual is divided by
/// `Ṽ(ζ,i)`, since the values span `λ^{±N/2}`.
pub fn generator_identity_residual(spec: &ChainSpec, zeta: &LatticePath) -> Result<f64> {
    if !matches!(spec.model(), Model::CornerFlip | Model::BiasedCornerFlip) {
        return Err(Error::WrongModel {
            model: spec.model().to_string(),
        });
    }
    let n = spec.n();
    if zeta.n() != n || zeta.k() != spec.particles()? {
        return Err(Error::ShapeMismatch(format!(
            "path in Ξ_{{{},{}}} for spec {spec}",
            zeta.n(),
            zeta.k()
        )));
    }

    let resolved = |i: usize, up: bool| -> i32 {
        let mut z = zeta.clone();
        if up {
            z.flip_up(i);
        } else {
            z.flip_down(i);
        }
        z.height(i)
    };

    let mut worst = 0.0f64;
    if spec.is_symmetric() {
        let h: Vec<f64> = zeta.heights().iter().map(|&v| v as f64).collect();
        for i in 1..n {
            let mut flipped = zeta.clone();
            flipped.flip(i);
            let lhs = 0.5 * (flipped.height(i) - zeta.height(i)) as f64;
            let rhs = 0.5 * (h[i + 1] + h[i - 1] - 2.0 * h[i]);
            worst = worst.max((lhs - rhs).abs());
        }
    } else {
        let (p, q) = (spec.p(), spec.q());
        let base = spec.lambda().recip();
        let v = exp_heights(zeta, base);
        let at = |height: i32| base.sqrt().powi(height);
        let sqrt_pq = (p * q).sqrt();
        let rho = spec.rho();
        for i in 1..n {
            let lhs = p * (at(resolved(i, true)) - v[i]) + q * (at(resolved(i, false)) - v[i]);
            let rhs = sqrt_pq * (v[i + 1] + v[i - 1] - 2.0 * v[i]) - rho * v[i];
            worst = worst.max((lhs - rhs).abs() / v[i]);
        }
    }
    Ok(worst)
}
