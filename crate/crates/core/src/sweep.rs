//! Alternating sweep orderings from centroid distances to reference points.

use crate::geom::Vec2;
use crate::mesh::Mesh;

/// Corners of the mesh bounding box: lower-left, upper-left, lower-right, upper-right.
pub fn default_reference_points(mesh: &Mesh) -> [Vec2; 4] {
    let b = mesh.bounding_box();
    [
        Vec2::new(b.min.x, b.min.y),
        Vec2::new(b.min.x, b.max.y),
        Vec2::new(b.max.x, b.min.y),
        Vec2::new(b.max.x, b.max.y),
    ]
}

/// Eight cell orderings: ascending and descending centroid distance to each
/// of four reference points.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOrderings {
    pub reference_points: [Vec2; 4],
    pub ascending: [Vec<usize>; 4],
    pub descending: [Vec<usize>; 4],
}

impl SweepOrderings {
    pub fn build(mesh: &Mesh, reference_points: [Vec2; 4]) -> SweepOrderings {
        let centroids: Vec<Vec2> = (0..mesh.num_cells())
            .map(|i| mesh.geometry(i).centroid)
            .collect();
        Self::from_centroids(&centroids, reference_points)
    }

    pub fn from_centroids(centroids: &[Vec2], reference_points: [Vec2; 4]) -> SweepOrderings {
        let order = |r: Vec2, descending: bool| {
            let dist: Vec<f64> = centroids.iter().map(|c| c.distance(r)).collect();
            let mut idx: Vec<usize> = (0..centroids.len()).collect();
            // ties resolve to the lower cell index in both directions
            idx.sort_by(|&a, &b| {
                let key = if descending {
                    dist[b].total_cmp(&dist[a])
                } else {
                    dist[a].total_cmp(&dist[b])
                };
                key.then(a.cmp(&b))
            });
            idx
        };
        SweepOrderings {
            reference_points,
            ascending: reference_points.map(|r| order(r, false)),
            descending: reference_points.map(|r| order(r, true)),
        }
    }

    /// Ordering used by directional sweep number `n` (0-based): S₁⁺, S₁⁻, S₂⁺, …, S₄⁻, repeating.
    pub fn schedule(&self, n: usize) -> &[usize] {
        let k = n % 8;
        if k % 2 == 0 {
            &self.ascending[k / 2]
        } else {
            &self.descending[k / 2]
        }
    }

    /// Name of the schedule entry, e.g. `S2-`.
    pub fn label(n: usize) -> String {
        let k = n % 8;
        format!("S{}{}", k / 2 + 1, if k % 2 == 0 { '+' } else { '-' })
    }

    /// Text dump: a header row `S1+ S1- … S4-` then one row per position.
    pub fn dump(&self) -> String {
        let mut s = (0..8).map(SweepOrderings::label).collect::<Vec<_>>().join(" ");
        s.push('\n');
        let m = self.ascending[0].len();
        for pos in 0..m {
            let row: Vec<String> = (0..8).map(|n| self.schedule(n)[pos].to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}
