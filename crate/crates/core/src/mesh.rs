//! Triangular meshes: text I/O, edge adjacency, cell geometry and uniform refinement.
//!
//! Mesh file layout (`#` starts a comment, blank lines ignored):
//!
//! ```text
//! N_v M B
//! x y            (N_v lines)
//! i0 i1 i2       (M lines, 0-based node indices)
//! i0 i1 TAG      (B lines, boundary edges, node order irrelevant)
//! ```
//!
//! `TAG` is one of `DIRICHLET_LEFT`, `DIRICHLET_TOP`, `WALL`, `OUTFLOW`, `EXACT`.
//! Every boundary edge of the triangulation must be listed.

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geom::{signed_area, Vec2};
use crate::quadrature::{edge_quadrature, EdgeQuadrature, TriangleQuadrature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryTag {
    DirichletLeft,
    DirichletTop,
    Wall,
    Outflow,
    Exact,
}

impl BoundaryTag {
    pub const ALL: [BoundaryTag; 5] = [
        BoundaryTag::DirichletLeft,
        BoundaryTag::DirichletTop,
        BoundaryTag::Wall,
        BoundaryTag::Outflow,
        BoundaryTag::Exact,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryTag::DirichletLeft => "DIRICHLET_LEFT",
            BoundaryTag::DirichletTop => "DIRICHLET_TOP",
            BoundaryTag::Wall => "WALL",
            BoundaryTag::Outflow => "OUTFLOW",
            BoundaryTag::Exact => "EXACT",
        }
    }
}

impl fmt::Display for BoundaryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundaryTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        BoundaryTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown boundary tag '{s}'"))
    }
}

/// What lies across one edge of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighbor {
    Cell(usize),
    Boundary(BoundaryTag),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeGeometry {
    pub length: f64,
    /// Outward unit normal.
    pub normal: Vec2,
    pub quadrature: EdgeQuadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGeometry {
    pub area: f64,
    pub centroid: Vec2,
    /// Edge `k` runs from vertex `k` to vertex `(k + 1) % 3`.
    pub edges: [EdgeGeometry; 3],
}

impl CellGeometry {
    /// Geometry of a triangle given counter-clockwise vertices. Fails when the
    /// area does not exceed `min_area`.
    pub fn from_vertices(v: &[Vec2; 3], min_area: f64) -> Result<CellGeometry> {
        let area = signed_area(v[0], v[1], v[2]);
        if area <= min_area {
            return Err(Error::DegenerateCell(usize::MAX));
        }
        let centroid = Vec2::new(
            (v[0].x + v[1].x + v[2].x) / 3.0,
            (v[0].y + v[1].y + v[2].y) / 3.0,
        );
        let edge = |k: usize| -> Result<EdgeGeometry> {
            let (p0, p1) = (v[k], v[(k + 1) % 3]);
            let d = p1 - p0;
            let length = d.norm();
            Ok(EdgeGeometry {
                length,
                normal: Vec2::new(d.y / length, -d.x / length),
                quadrature: edge_quadrature(p0, p1)?,
            })
        };
        Ok(CellGeometry {
            area,
            centroid,
            edges: [edge(0)?, edge(1)?, edge(2)?],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: Vec2,
    pub max: Vec2,
}

impl BoundingBox {
    pub fn diagonal(&self) -> f64 {
        self.min.distance(self.max)
    }
}

/// Immutable triangulation with validated topology and cached geometry.
#[derive(Debug, Clone)]
pub struct Mesh {
    nodes: Vec<Vec2>,
    cells: Vec<[usize; 3]>,
    neighbors: Vec<[Neighbor; 3]>,
    geometry: Vec<CellGeometry>,
    boundary: Vec<(usize, usize, BoundaryTag)>,
    bbox: BoundingBox,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Mesh {
    /// Validate and build a mesh. Clockwise cells are flipped.
    pub fn new(
        nodes: Vec<Vec2>,
        mut cells: Vec<[usize; 3]>,
        boundary: Vec<(usize, usize, BoundaryTag)>,
    ) -> Result<Mesh> {
        let count = nodes.len();
        for (c, tri) in cells.iter().enumerate() {
            if let Some(&node) = tri.iter().find(|&&n| n >= count) {
                return Err(Error::IndexOutOfRange { cell: c, node, count });
            }
        }
        for &(a, b, _) in &boundary {
            if a >= count || b >= count {
                return Err(Error::IndexOutOfRange {
                    cell: usize::MAX,
                    node: a.max(b),
                    count,
                });
            }
        }

        let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &nodes {
            min = Vec2::new(min.x.min(p.x), min.y.min(p.y));
            max = Vec2::new(max.x.max(p.x), max.y.max(p.y));
        }
        let bbox = BoundingBox { min, max };
        let min_area = 1e-14 * bbox.diagonal().powi(2);

        let mut geometry = Vec::with_capacity(cells.len());
        for (c, tri) in cells.iter_mut().enumerate() {
            let mut v = tri.map(|n| nodes[n]);
            if signed_area(v[0], v[1], v[2]) < 0.0 {
                tri.swap(1, 2);
                v.swap(1, 2);
            }
            let g = CellGeometry::from_vertices(&v, min_area).map_err(|e| match e {
                Error::DegenerateCell(_) | Error::ZeroLengthEdge => Error::DegenerateCell(c),
                other => other,
            })?;
            geometry.push(g);
        }

        let mut edges: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for (c, tri) in cells.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let slot = edges.entry(edge_key(a, b)).or_default();
                slot.push((c, k));
                if slot.len() > 2 {
                    return Err(Error::NonManifoldEdge(a.min(b), a.max(b)));
                }
            }
        }

        let mut tags: HashMap<(usize, usize), BoundaryTag> = HashMap::new();
        for &(a, b, tag) in &boundary {
            tags.insert(edge_key(a, b), tag);
        }

        let mut neighbors = vec![[Neighbor::Boundary(BoundaryTag::Exact); 3]; cells.len()];
        let mut boundary_sorted = Vec::new();
        for (&(a, b), incident) in &edges {
            match incident.as_slice() {
                &[(c0, k0), (c1, k1)] => {
                    if cells[c0][k0] == cells[c1][k1] {
                        return Err(Error::InconsistentEdge(a, b));
                    }
                    if tags.contains_key(&(a, b)) {
                        return Err(Error::NotABoundaryEdge(a, b));
                    }
                    neighbors[c0][k0] = Neighbor::Cell(c1);
                    neighbors[c1][k1] = Neighbor::Cell(c0);
                }
                &[(c0, k0)] => {
                    let tag = *tags.get(&(a, b)).ok_or(Error::MissingBoundaryTag(a, b))?;
                    neighbors[c0][k0] = Neighbor::Boundary(tag);
                    boundary_sorted.push((a, b, tag));
                }
                _ => unreachable!(),
            }
        }
        for &(a, b, _) in &boundary {
            if !edges.contains_key(&edge_key(a, b)) {
                return Err(Error::NotABoundaryEdge(a, b));
            }
        }
        boundary_sorted.sort();

        Ok(Mesh {
            nodes,
            cells,
            neighbors,
            geometry,
            boundary: boundary_sorted,
            bbox,
        })
    }

    pub fn parse(text: &str) -> Result<Mesh> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        fn field<T: FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
            let tok = tok.ok_or_else(|| Error::Parse {
                line,
                msg: format!("missing {what}"),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid {what} '{tok}'"),
            })
        }
        fn finish(line: usize, mut toks: std::str::SplitWhitespace<'_>) -> Result<()> {
            match toks.next() {
                Some(extra) => Err(Error::Parse {
                    line,
                    msg: format!("unexpected trailing token '{extra}'"),
                }),
                None => Ok(()),
            }
        }
        let mut next = |what: &str| {
            lines.next().ok_or_else(|| Error::Parse {
                line: text.lines().count(),
                msg: format!("unexpected end of file, expected {what}"),
            })
        };

        let (ln, header) = next("header")?;
        let mut toks = header.split_whitespace();
        let nv: usize = field(ln, toks.next(), "node count")?;
        let m: usize = field(ln, toks.next(), "cell count")?;
        let b: usize = field(ln, toks.next(), "boundary edge count")?;
        finish(ln, toks)?;

        let mut nodes = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (ln, l) = next("node")?;
            let mut toks = l.split_whitespace();
            let x: f64 = field(ln, toks.next(), "x coordinate")?;
            let y: f64 = field(ln, toks.next(), "y coordinate")?;
            finish(ln, toks)?;
            nodes.push(Vec2::new(x, y));
        }
        let mut cells = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, l) = next("cell")?;
            let mut toks = l.split_whitespace();
            let tri = [
                field(ln, toks.next(), "node index")?,
                field(ln, toks.next(), "node index")?,
                field(ln, toks.next(), "node index")?,
            ];
            finish(ln, toks)?;
            cells.push(tri);
        }
        let mut boundary = Vec::with_capacity(b);
        for _ in 0..b {
            let (ln, l) = next("boundary edge")?;
            let mut toks = l.split_whitespace();
            let a: usize = field(ln, toks.next(), "node index")?;
            let c: usize = field(ln, toks.next(), "node index")?;
            let tag = toks.next().ok_or_else(|| Error::Parse {
                line: ln,
                msg: "missing boundary tag".into(),
            })?;
            let tag = tag
                .parse::<BoundaryTag>()
                .map_err(|msg| Error::Parse { line: ln, msg })?;
            finish(ln, toks)?;
            boundary.push((a, c, tag));
        }
        if let Some((ln, l)) = lines.next() {
            return Err(Error::Parse {
                line: ln,
                msg: format!("unexpected content after boundary section: '{l}'"),
            });
        }
        Mesh::new(nodes, cells, boundary)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Mesh> {
        Mesh::parse(&std::fs::read_to_string(path)?)
    }

    /// Serialize in the mesh file format. Coordinates use shortest round-trip
    /// formatting, so `parse(to_text())` reproduces the mesh exactly.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} {} {}",
            self.nodes.len(),
            self.cells.len(),
            self.boundary.len()
        );
        for p in &self.nodes {
            let _ = writeln!(s, "{:?} {:?}", p.x, p.y);
        }
        for c in &self.cells {
            let _ = writeln!(s, "{} {} {}", c[0], c[1], c[2]);
        }
        for (a, b, t) in &self.boundary {
            let _ = writeln!(s, "{a} {b} {t}");
        }
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    /// Split every triangle into four similar children through its edge
    /// midpoints. Children of cell `c` are `4c..4c+4`, the last one central.
    pub fn refine_uniform(&self) -> Result<Mesh> {
        let mut nodes = self.nodes.clone();
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, nodes: &mut Vec<Vec2>| -> usize {
            *midpoints.entry(edge_key(a, b)).or_insert_with(|| {
                nodes.push(nodes[a].midpoint(nodes[b]));
                nodes.len() - 1
            })
        };
        let mut cells = Vec::with_capacity(4 * self.cells.len());
        for &[a, b, c] in &self.cells {
            let ab = midpoint(a, b, &mut nodes);
            let bc = midpoint(b, c, &mut nodes);
            let ca = midpoint(c, a, &mut nodes);
            cells.push([a, ab, ca]);
            cells.push([ab, b, bc]);
            cells.push([ca, bc, c]);
            cells.push([ab, bc, ca]);
        }
        let mut boundary = Vec::with_capacity(2 * self.boundary.len());
        for &(a, b, tag) in &self.boundary {
            let m = midpoint(a, b, &mut nodes);
            boundary.push((a, m, tag));
            boundary.push((m, b, tag));
        }
        Mesh::new(nodes, cells, boundary)
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Vec2] {
        &self.nodes
    }

    pub fn cells(&self) -> &[[usize; 3]] {
        &self.cells
    }

    pub fn neighbors(&self, i: usize) -> &[Neighbor; 3] {
        &self.neighbors[i]
    }

    /// Boundary edges as sorted `(a, b, tag)` with `a < b`.
    pub fn boundary_edges(&self) -> &[(usize, usize, BoundaryTag)] {
        &self.boundary
    }

    pub fn geometry(&self, i: usize) -> &CellGeometry {
        &self.geometry[i]
    }

    pub fn cell_vertices(&self, i: usize) -> [Vec2; 3] {
        self.cells[i].map(|n| self.nodes[n])
    }

    pub fn bounding_box(&self) -> BoundingBox {
        self.bbox
    }

    pub fn total_area(&self) -> f64 {
        self.geometry.iter().map(|g| g.area).sum()
    }

    /// Mean of `f` over cell `i`, by the degree-6 triangle rule.
    pub fn cell_average(&self, i: usize, f: impl Fn(Vec2) -> f64) -> f64 {
        TriangleQuadrature::DEGREE6.average(&self.cell_vertices(i), f)
    }
}

/// Geometry of cell `i` (also available as [`Mesh::geometry`]).
pub fn cell_geometry(mesh: &Mesh, i: usize) -> &CellGeometry {
    mesh.geometry(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIT_SQUARE: &str = "\
# unit square, one diagonal
4 2 4
0 0
1 0
1 1
0 1
0 1 2
0 2 3
0 1 WALL
1 2 OUTFLOW
2 3 DIRICHLET_TOP
3 0 DIRICHLET_LEFT
";

    #[test]
    fn loads_unit_square() {
        let mesh = Mesh::parse(UNIT_SQUARE).unwrap();
        assert_eq!(mesh.num_cells(), 2);
        for i in 0..2 {
            assert!((mesh.geometry(i).area - 0.5).abs() < 1e-15);
        }
        let interior: usize = (0..2)
            .map(|i| {
                mesh.neighbors(i)
                    .iter()
                    .filter(|n| matches!(n, Neighbor::Cell(_)))
                    .count()
            })
            .sum();
        assert_eq!(interior, 2);
        assert!(mesh.neighbors(0).contains(&Neighbor::Cell(1)));
        assert!(mesh.neighbors(0).contains(&Neighbor::Boundary(BoundaryTag::Wall)));
    }

    #[test]
    fn reference_triangle_geometry() {
        let v = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        let g = CellGeometry::from_vertices(&v, 0.0).unwrap();
        assert_eq!(g.area, 0.5);
        assert!((g.centroid.x - 1.0 / 3.0).abs() < 1e-16);
        assert!((g.centroid.y - 1.0 / 3.0).abs() < 1e-16);
        let h = g.edges[1].normal;
        let s = 1.0 / 2f64.sqrt();
        assert!((h.x - s).abs() < 1e-15 && (h.y - s).abs() < 1e-15);
        assert_eq!(g.edges[0].normal, Vec2::new(0.0, -1.0));
        assert_eq!(g.edges[2].normal, Vec2::new(-1.0, 0.0));
        let closure = g
            .edges
            .iter()
            .fold(Vec2::default(), |acc, e| acc + e.normal * e.length);
        assert!(closure.norm() < 1e-14);
    }

    #[test]
    fn clockwise_cells_are_flipped() {
        let text = UNIT_SQUARE.replace("0 1 2\n0 2 3", "0 2 1\n0 3 2");
        let mesh = Mesh::parse(&text).unwrap();
        for i in 0..2 {
            assert!(mesh.geometry(i).area > 0.0);
        }
    }

    #[test]
    fn node_index_out_of_range() {
        let text = UNIT_SQUARE.replace("0 2 3\n", "0 2 4\n");
        assert!(matches!(
            Mesh::parse(&text),
            Err(Error::IndexOutOfRange { node: 4, count: 4, .. })
        ));
    }

    #[test]
    fn collinear_cell_is_degenerate() {
        let text = "3 1 3\n0 0\n1 0\n2 0\n0 1 2\n0 1 WALL\n1 2 WALL\n0 2 WALL\n";
        assert!(matches!(Mesh::parse(text), Err(Error::DegenerateCell(0))));
    }

    #[test]
    fn non_manifold_edge() {
        let text = "\
5 3 0
0 0
1 0
0 1
0 -1
1 1
0 1 2
0 3 1
1 4 0
";
        assert!(matches!(Mesh::parse(text), Err(Error::NonManifoldEdge(0, 1))));
    }

    #[test]
    fn untagged_boundary_edge() {
        let text = UNIT_SQUARE.replace("4 2 4", "4 2 3").replace("3 0 DIRICHLET_LEFT\n", "");
        assert!(matches!(
            Mesh::parse(&text),
            Err(Error::MissingBoundaryTag(0, 3))
        ));
    }

    #[test]
    fn malformed_lines() {
        let bad_tag = UNIT_SQUARE.replace("WALL", "SLIP");
        assert!(matches!(Mesh::parse(&bad_tag), Err(Error::Parse { line: 9, .. })));
        let bad_coord = UNIT_SQUARE.replace("1 1\n", "1 x\n");
        assert!(matches!(Mesh::parse(&bad_coord), Err(Error::Parse { line: 5, .. })));
        assert!(matches!(Mesh::parse("4 2"), Err(Error::Parse { .. })));
        let truncated: String = UNIT_SQUARE.lines().take(8).collect::<Vec<_>>().join("\n");
        assert!(matches!(Mesh::parse(&truncated), Err(Error::Parse { .. })));
    }

    #[test]
    fn refine_splits_into_similar_quarters() {
        let mesh = Mesh::parse(UNIT_SQUARE).unwrap();
        let fine = mesh.refine_uniform().unwrap();
        assert_eq!(fine.num_cells(), 8);
        assert_eq!(fine.num_nodes(), 9);
        assert_eq!(fine.boundary_edges().len(), 8);
        for c in 0..mesh.num_cells() {
            for child in 4 * c..4 * c + 4 {
                assert!((fine.geometry(child).area - mesh.geometry(c).area / 4.0).abs() < 1e-16);
            }
        }
        let walls = fine
            .boundary_edges()
            .iter()
            .filter(|e| e.2 == BoundaryTag::Wall)
            .count();
        assert_eq!(walls, 2);
    }

    #[test]
    fn cell_average_of_monomials() {
        let text = "3 1 3\n0 0\n1 0\n0 1\n0 1 2\n0 1 WALL\n1 2 WALL\n2 0 WALL\n";
        let mesh = Mesh::parse(text).unwrap();
        assert!((mesh.cell_average(0, |_| 2.5) - 2.5).abs() < 1e-15);
        assert!((mesh.cell_average(0, |p| p.x) - 1.0 / 3.0).abs() < 1e-15);
        // ∫∫ x^4 over the reference triangle is 1/30; divided by the area 1/2
        assert!((mesh.cell_average(0, |p| p.x.powi(4)) - 1.0 / 15.0).abs() < 1e-15);
    }
}
