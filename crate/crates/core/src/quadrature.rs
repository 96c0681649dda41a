//! Edge and triangle quadrature rules.

use crate::error::{Error, Result};
use crate::geom::Vec2;

/// Three-point Gauss-Legendre rule mapped onto a segment. Weights are
/// normalized to sum to one; multiply by the edge length to integrate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeQuadrature {
    pub points: [Vec2; 3],
    pub weights: [f64; 3],
}

pub const GAUSS3_WEIGHTS: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];

/// Gauss-Legendre nodes on the segment `p0 -> p1`, ordered from `p0` to `p1`.
pub fn edge_quadrature(p0: Vec2, p1: Vec2) -> Result<EdgeQuadrature> {
    let d = p1 - p0;
    if d.norm() == 0.0 {
        return Err(Error::ZeroLengthEdge);
    }
    let mid = p0.midpoint(p1);
    let offset = d * (0.5 * 0.6f64.sqrt());
    Ok(EdgeQuadrature {
        points: [mid - offset, mid, mid + offset],
        weights: GAUSS3_WEIGHTS,
    })
}

impl EdgeQuadrature {
    /// Mean value of `f` over the segment.
    pub fn average(&self, f: impl Fn(Vec2) -> f64) -> f64 {
        self.points
            .iter()
            .zip(self.weights)
            .map(|(&p, w)| w * f(p))
            .sum()
    }
}

/// Symmetric 12-point rule, exact for polynomials of total degree 6 on any triangle.
#[derive(Debug, Clone, Copy)]
pub struct TriangleQuadrature {
    /// Barycentric coordinates.
    pub points: [[f64; 3]; 12],
    /// Normalized to sum to one.
    pub weights: [f64; 12],
}

pub const TRIANGLE_RULE_DEGREE: usize = 6;

const A: f64 = 0.063_089_014_491_502_228_340_331_602_870_819;
const WA: f64 = 0.050_844_906_370_206_816_920_936_809_106_869;
const B: f64 = 0.249_286_745_170_910_421_291_638_553_107_019;
const WB: f64 = 0.116_786_275_726_379_366_030_690_538_880_600;
const C1: f64 = 0.053_145_049_844_816_947_353_249_671_631_398;
const C2: f64 = 0.310_352_451_033_784_405_416_607_733_956_552;
const WC: f64 = 0.082_851_075_618_373_575_193_553_456_420_442;

impl TriangleQuadrature {
    pub const DEGREE6: TriangleQuadrature = {
        let a2 = 1.0 - 2.0 * A;
        let b2 = 1.0 - 2.0 * B;
        let c3 = 1.0 - C1 - C2;
        TriangleQuadrature {
            points: [
                [a2, A, A],
                [A, a2, A],
                [A, A, a2],
                [b2, B, B],
                [B, b2, B],
                [B, B, b2],
                [C1, C2, c3],
                [C1, c3, C2],
                [C2, C1, c3],
                [C2, c3, C1],
                [c3, C1, C2],
                [c3, C2, C1],
            ],
            weights: [WA, WA, WA, WB, WB, WB, WC, WC, WC, WC, WC, WC],
        }
    };

    /// Physical quadrature points and normalized weights on the triangle.
    pub fn nodes(&self, v: &[Vec2; 3]) -> impl Iterator<Item = (Vec2, f64)> + '_ {
        let v = *v;
        self.points.iter().zip(self.weights).map(move |(l, w)| {
            (
                Vec2::new(
                    l[0] * v[0].x + l[1] * v[1].x + l[2] * v[2].x,
                    l[0] * v[0].y + l[1] * v[1].y + l[2] * v[2].y,
                ),
                w,
            )
        })
    }

    /// Mean value of `f` over the triangle.
    pub fn average(&self, v: &[Vec2; 3], f: impl Fn(Vec2) -> f64) -> f64 {
        self.nodes(v).map(|(p, w)| w * f(p)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    #[test]
    fn gauss_nodes_on_unit_segment() {
        let q = edge_quadrature(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)).unwrap();
        let s = 0.5 * 0.6f64.sqrt();
        assert!((q.points[0].x - (0.5 - s)).abs() < 1e-16);
        assert_eq!(q.points[1].x, 0.5);
        assert!((q.points[2].x - (0.5 + s)).abs() < 1e-16);
        assert_eq!(q.weights, [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0]);
        assert!(q.points.iter().all(|p| p.y == 0.0));
    }

    #[test]
    fn gauss_rule_is_exact_to_degree_five() {
        let q = edge_quadrature(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)).unwrap();
        for k in 0..=5 {
            let got = q.average(|p| p.x.powi(k));
            let exact = 1.0 / (k as f64 + 1.0);
            assert!((got - exact).abs() < 1e-15, "x^{k}: {got} vs {exact}");
        }
        assert!((q.average(|p| p.x.powi(5)) - 1.0 / 6.0).abs() < 1e-16);
        // degree 6 is not integrated exactly
        assert!((q.average(|p| p.x.powi(6)) - 1.0 / 7.0).abs() > 1e-6);
    }

    #[test]
    fn gauss_points_lie_on_a_skew_segment() {
        let p0 = Vec2::new(-1.5, 2.0);
        let p1 = Vec2::new(3.0, -0.25);
        let q = edge_quadrature(p0, p1).unwrap();
        assert!((q.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        for p in q.points {
            let t = (p - p0).dot(p1 - p0) / (p1 - p0).dot(p1 - p0);
            assert!((0.0..=1.0).contains(&t));
            assert!((p - p0).cross(p1 - p0).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_length_edge_is_rejected() {
        let p = Vec2::new(1.0, 1.0);
        assert!(matches!(edge_quadrature(p, p), Err(Error::ZeroLengthEdge)));
    }

    #[test]
    fn triangle_rule_integrates_monomials_to_degree_six() {
        let q = TriangleQuadrature::DEGREE6;
        assert!((q.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        let tri = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        for i in 0..=6u32 {
            for j in 0..=(6 - i) {
                let got = q.average(&tri, |p| p.x.powi(i as i32) * p.y.powi(j as i32));
                // ∫∫ x^i y^j over the reference triangle = i! j! / (i+j+2)!, area 1/2
                let exact = 2.0 * factorial(i) * factorial(j) / factorial(i + j + 2);
                assert!(
                    ((got - exact) / exact).abs() < 1e-13,
                    "x^{i} y^{j}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn triangle_rule_is_affine_invariant() {
        // x^4 on an arbitrary triangle against a fine midpoint-subdivision sum
        let q = TriangleQuadrature::DEGREE6;
        let tri = [Vec2::new(0.2, -0.1), Vec2::new(1.3, 0.4), Vec2::new(0.1, 0.9)];
        let f = |p: Vec2| p.x.powi(4) - 2.0 * p.x * p.y.powi(3) + p.y;
        let got = q.average(&tri, f);
        let n = 400;
        let mut sum = 0.0;
        for a in 0..n {
            for b in 0..(n - a) {
                // upward and downward sub-triangles, each integrated with the rule itself
                let s = |u: f64, v: f64| {
                    tri[0] + (tri[1] - tri[0]) * (u / n as f64) + (tri[2] - tri[0]) * (v / n as f64)
                };
                let (a, b) = (a as f64, b as f64);
                sum += q.average(&[s(a, b), s(a + 1.0, b), s(a, b + 1.0)], f);
                if a + b + 2.0 <= n as f64 {
                    sum += q.average(&[s(a + 1.0, b), s(a + 1.0, b + 1.0), s(a, b + 1.0)], f);
                }
            }
        }
        let brute = sum / (n * n) as f64;
        assert!((got - brute).abs() < 1e-12, "{got} vs {brute}");
    }
}
