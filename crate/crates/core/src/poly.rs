//! Bivariate polynomials in scaled local coordinates.
//!
//! A cell's frame maps `(x, y)` to `ξ = (x − x_c)/h`, `η = (y − y_c)/h` with
//! `x_c` the centroid and `h = √area`. Monomials are ordered by total degree,
//! then by decreasing power of `ξ`: `1, ξ, η, ξ², ξη, η², ξ³, …, η⁴`.

use crate::geom::Vec2;

pub const MAX_DEGREE: usize = 4;
/// Number of monomials of degree ≤ 4.
pub const MAX_COEFFS: usize = 15;

/// `(power of ξ, power of η)` for each basis index.
pub const EXPONENTS: [(u8, u8); MAX_COEFFS] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
    (4, 0),
    (3, 1),
    (2, 2),
    (1, 3),
    (0, 4),
];

pub const fn num_coeffs(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub origin: Vec2,
    pub h: f64,
}

impl Frame {
    pub fn new(origin: Vec2, area: f64) -> Frame {
        Frame {
            origin,
            h: area.sqrt(),
        }
    }

    pub fn local(&self, p: Vec2) -> (f64, f64) {
        ((p.x - self.origin.x) / self.h, (p.y - self.origin.y) / self.h)
    }

    /// All 15 basis monomials at `p`.
    pub fn basis(&self, p: Vec2) -> [f64; MAX_COEFFS] {
        let (xi, eta) = self.local(p);
        let (x2, y2) = (xi * xi, eta * eta);
        let (x3, y3) = (x2 * xi, y2 * eta);
        [
            1.0,
            xi,
            eta,
            x2,
            xi * eta,
            y2,
            x3,
            x2 * eta,
            xi * y2,
            y3,
            x2 * x2,
            x3 * eta,
            x2 * y2,
            xi * y3,
            y2 * y2,
        ]
    }

    /// Physical-coordinate derivative `∂^{a+b}/∂x^a ∂y^b` of every basis monomial at `p`.
    pub fn basis_derivative(&self, p: Vec2, a: u8, b: u8) -> [f64; MAX_COEFFS] {
        let (xi, eta) = self.local(p);
        let scale = self.h.powi(-(i32::from(a) + i32::from(b)));
        let mut out = [0.0; MAX_COEFFS];
        for (j, &(i, k)) in EXPONENTS.iter().enumerate() {
            if i < a || k < b {
                continue;
            }
            let fa: f64 = ((i - a + 1)..=i).map(f64::from).product();
            let fb: f64 = ((k - b + 1)..=k).map(f64::from).product();
            out[j] = fa * fb * xi.powi(i32::from(i - a)) * eta.powi(i32::from(k - b)) * scale;
        }
        out
    }
}

/// Polynomial of degree ≤ 4 attached to one cell's frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub degree: usize,
    /// Length `num_coeffs(degree)`.
    pub coeffs: Vec<f64>,
    pub frame: Frame,
    pub cell: usize,
}

impl Polynomial {
    pub fn new(degree: usize, coeffs: Vec<f64>, frame: Frame, cell: usize) -> Polynomial {
        assert!(degree <= MAX_DEGREE);
        assert_eq!(coeffs.len(), num_coeffs(degree));
        Polynomial {
            degree,
            coeffs,
            frame,
            cell,
        }
    }

    pub fn constant(c: f64, frame: Frame, cell: usize) -> Polynomial {
        Polynomial::new(0, vec![c], frame, cell)
    }

    /// Horner evaluation: `Σ_a ξ^a (Σ_b c_ab η^b)`, nested in both variables.
    pub fn eval(&self, p: Vec2) -> f64 {
        let (xi, eta) = self.frame.local(p);
        let d = self.degree;
        let mut outer = 0.0;
        for a in (0..=d).rev() {
            let mut inner = 0.0;
            for b in (0..=(d - a)).rev() {
                inner = inner * eta + self.coeffs[index_of(a, b)];
            }
            outer = outer * xi + inner;
        }
        outer
    }
}

/// Basis index of `ξ^a η^b`.
pub const fn index_of(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + (d - a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame() -> Frame {
        Frame::new(Vec2::new(0.4, -0.2), 0.09)
    }

    #[test]
    fn exponent_table_matches_index_of() {
        for (j, &(a, b)) in EXPONENTS.iter().enumerate() {
            assert_eq!(index_of(a as usize, b as usize), j);
        }
        assert_eq!(num_coeffs(1), 3);
        assert_eq!(num_coeffs(4), 15);
    }

    #[test]
    fn constant_evaluates_to_itself() {
        let p = Polynomial::constant(3.25, frame(), 0);
        assert_eq!(p.eval(Vec2::new(17.0, -4.0)), 3.25);
    }

    #[test]
    fn xi_vanishes_at_the_origin() {
        let f = frame();
        let p = Polynomial::new(1, vec![0.0, 1.0, 0.0], f, 0);
        assert_eq!(p.eval(f.origin), 0.0);
    }

    #[test]
    fn horner_matches_term_by_term_sum() {
        let f = frame();
        let coeffs: Vec<f64> = (0..15).map(|j| ((j * 7 + 3) % 11) as f64 * 0.37 - 1.5).collect();
        let p = Polynomial::new(4, coeffs.clone(), f, 0);
        for pt in [Vec2::new(0.5, -0.1), Vec2::new(0.1, 0.3), Vec2::new(0.77, -0.61)] {
            let (xi, eta) = f.local(pt);
            let direct: f64 = EXPONENTS
                .iter()
                .zip(&coeffs)
                .map(|(&(a, b), c)| c * xi.powi(a as i32) * eta.powi(b as i32))
                .sum();
            assert!((p.eval(pt) - direct).abs() <= 1e-13 * direct.abs().max(1.0));
            let basis: f64 = f.basis(pt).iter().zip(&coeffs).map(|(b, c)| b * c).sum();
            assert!((basis - direct).abs() <= 1e-13 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let f = frame();
        let p0 = Vec2::new(0.47, -0.13);
        let eps = 1e-5;
        let dx = f.basis_derivative(p0, 1, 0);
        let dy = f.basis_derivative(p0, 0, 1);
        let fwd = f.basis(p0 + Vec2::new(eps, 0.0));
        let bwd = f.basis(p0 - Vec2::new(eps, 0.0));
        let up = f.basis(p0 + Vec2::new(0.0, eps));
        let dn = f.basis(p0 - Vec2::new(0.0, eps));
        for j in 0..MAX_COEFFS {
            assert!((dx[j] - (fwd[j] - bwd[j]) / (2.0 * eps)).abs() < 1e-6, "dx {j}");
            assert!((dy[j] - (up[j] - dn[j]) / (2.0 * eps)).abs() < 1e-6, "dy {j}");
        }
        let dxxyy = f.basis_derivative(p0, 2, 2);
        assert!((dxxyy[12] - 4.0 / f.h.powi(4)).abs() < 1e-12 * dxxyy[12]);
        assert!(dxxyy.iter().enumerate().all(|(j, &v)| j == 12 || v == 0.0));
    }
}
