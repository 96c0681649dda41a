//! WENO-Z nonlinear weights, smoothness indicators and point reconstruction
//! for the unequal-sized stencil family.

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::poly::{Polynomial, MAX_COEFFS};
use crate::quadrature::TriangleQuadrature;
use crate::stencil::{CellOperator, Member, BIG_STENCIL_SIZE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WenoConfig {
    /// Linear weights: big stencil, three sectors, central.
    pub gamma: [f64; 5],
    pub epsilon: f64,
    /// Cells in the big stencil before conditioning growth.
    pub big_stencil: usize,
}

impl Default for WenoConfig {
    fn default() -> Self {
        WenoConfig {
            gamma: [0.96, 0.01, 0.01, 0.01, 0.01],
            epsilon: 1e-6,
            big_stencil: BIG_STENCIL_SIZE,
        }
    }
}

impl WenoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gamma.iter().any(|&g| !(g > 0.0)) {
            return Err(Error::Config("linear weights must be positive".into()));
        }
        if (self.gamma.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::Config("linear weights must sum to 1".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Config("epsilon must be positive".into()));
        }
        if !(15..=64).contains(&self.big_stencil) {
            return Err(Error::Config(format!(
                "big stencil size must be in 15..=64, got {}",
                self.big_stencil
            )));
        }
        Ok(())
    }
}

/// WENO-Z weights for the available stencils. Index 0 is the big stencil;
/// `τ` is the squared mean of `|β₀ − β_k|` over the others.
pub fn nonlinear_weights(gammas: &[f64], betas: &[f64], epsilon: f64) -> [f64; 5] {
    debug_assert_eq!(gammas.len(), betas.len());
    let n = betas.len();
    let mut omega = [0.0; 5];
    if n == 1 {
        omega[0] = 1.0;
        return omega;
    }
    let spread: f64 = betas[1..].iter().map(|b| (betas[0] - b).abs()).sum::<f64>() / (n - 1) as f64;
    let tau = spread * spread;
    let mut sum = 0.0;
    for k in 0..n {
        omega[k] = gammas[k] * (1.0 + tau / (epsilon + betas[k]));
        sum += omega[k];
    }
    for w in &mut omega[..n] {
        *w /= sum;
    }
    omega
}

/// `β = Σ_{1≤|α|≤r} ∫ |Δ|^{|α|−1} (D^α p)²` on the triangle `vertices`, with
/// `r` the polynomial degree.
pub fn smoothness_indicator(p: &Polynomial, vertices: &[Vec2; 3], area: f64) -> f64 {
    let mut beta = 0.0;
    for (x, w) in TriangleQuadrature::DEGREE6.nodes(vertices) {
        for order in 1..=p.degree {
            let scale = area.powi(order as i32 - 1);
            for a in 0..=order {
                let d = p.frame.basis_derivative(x, a as u8, (order - a) as u8);
                let v: f64 = d.iter().zip(&p.coeffs).map(|(d, c)| d * c).sum();
                beta += w * area * scale * v * v;
            }
        }
    }
    beta
}

/// Evaluate monomial coefficients at a point of the operator's cell.
pub fn evaluate<const N: usize>(
    op: &CellOperator,
    coeffs: &[[f64; MAX_COEFFS]; N],
    point: Vec2,
) -> [f64; N] {
    let basis = op.frame.basis(point);
    coeffs.map(|c| c.iter().zip(&basis).map(|(a, b)| a * b).sum())
}

/// Nonlinear WENO reconstruction of the target cell's data at `point`,
/// componentwise.
pub fn reconstruct_point<const N: usize>(
    cfg: &WenoConfig,
    op: &CellOperator,
    target: &[f64; N],
    avg: impl Fn(Member) -> [f64; N],
    point: Vec2,
) -> [f64; N] {
    let coeffs = op.reconstruct(cfg, target, avg);
    evaluate(op, &coeffs, point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Frame;

    #[test]
    fn equal_betas_give_linear_weights() {
        let g = WenoConfig::default().gamma;
        let w = nonlinear_weights(&g, &[0.3; 5], 1e-6);
        assert_eq!(w, g.map(|x| x / g.iter().sum::<f64>()));
        for k in 0..5 {
            assert!((w[k] - g[k]).abs() < 1e-16);
        }
    }

    #[test]
    fn weights_for_isolated_big_indicator() {
        let g = WenoConfig::default().gamma;
        let w = nonlinear_weights(&g, &[1.0, 0.0, 0.0, 0.0, 0.0], 1e-6);
        // τ = 1; hand substitution into the Z-weight formula
        let w1 = 0.96 * (1.0 + 1.0 / (1e-6 + 1.0));
        let wk = 0.01 * (1.0 + 1.0 / 1e-6);
        let sum = w1 + 4.0 * wk;
        assert!((w[0] - w1 / sum).abs() < 1e-15);
        for k in 1..5 {
            assert!((w[k] - wk / sum).abs() < 1e-15);
        }
        assert!((wk - 10000.01).abs() < 1e-9);
    }

    #[test]
    fn weights_settle_for_large_indicators() {
        // τ grows like s² while β grows like s, so the weights tend to γ_k/β_k
        // (normalized) as the data scale s grows
        let g = WenoConfig::default().gamma;
        let base = [1.0, 2.0, 3.0, 4.0, 5.0];
        let limit: Vec<f64> = {
            let raw: Vec<f64> = g.iter().zip(&base).map(|(g, b)| g / b).collect();
            let s: f64 = raw.iter().sum();
            raw.iter().map(|r| r / s).collect()
        };
        let mut prev = f64::INFINITY;
        for k in 0..=6 {
            let s = 10f64.powi(k);
            let w = nonlinear_weights(&g, &base.map(|b| b * s), 1e-6);
            let dist: f64 = (0..5).map(|j| (w[j] - limit[j]).abs()).sum();
            assert!(dist < prev);
            prev = dist;
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
        assert!(prev < 1e-6);
    }

    #[test]
    fn single_stencil_gets_all_the_weight() {
        let w = nonlinear_weights(&[1.0], &[3.0], 1e-6);
        assert_eq!(w[0], 1.0);
    }

    #[test]
    fn linear_indicator_is_area_times_gradient_squared() {
        let v = [Vec2::new(0.0, 0.0), Vec2::new(0.5, 0.1), Vec2::new(0.2, 0.7)];
        let area = crate::geom::signed_area(v[0], v[1], v[2]);
        let c = Vec2::new(0.7 / 3.0, 0.8 / 3.0);
        let frame = Frame::new(c, area);
        // physical gradient (b, c) = (2, -3): ξ-coefficient is b·h
        let p = Polynomial::new(1, vec![1.0, 2.0 * frame.h, -3.0 * frame.h], frame, 0);
        let beta = smoothness_indicator(&p, &v, area);
        assert!((beta - area * 13.0).abs() < 1e-14);
        let shifted = Polynomial::new(1, vec![10.0, 2.0 * frame.h, -3.0 * frame.h], frame, 0);
        assert_eq!(smoothness_indicator(&shifted, &v, area), beta);
        let constant = Polynomial::constant(4.0, frame, 0);
        assert_eq!(smoothness_indicator(&constant, &v, area), 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(WenoConfig::default().validate().is_ok());
        let mut bad = WenoConfig::default();
        bad.gamma[0] = 0.5;
        assert!(bad.validate().is_err());
        bad = WenoConfig::default();
        bad.epsilon = 0.0;
        assert!(bad.validate().is_err());
    }
}
