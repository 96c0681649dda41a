//! Reconstruction stencils and precomputed constrained least-squares operators.
//!
//! Each cell gets a big stencil (target plus roughly 15 neighbors over three
//! layers) supporting a quartic, three sectorial stencils and one central
//! stencil supporting linears. Across boundary edges the mesh is continued by
//! mirror images ("ghost" cells). `GhostKind` records how the caller fills
//! them: from the exact solution, from a Dirichlet state, or from the source
//! cell with momentum reflected at walls.
//!
//! A big stencil whose quartic fit has a large Lebesgue constant at the edge
//! quadrature points is grown by nearest cells until the constant drops.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{Isometry, Vec2};
use crate::mesh::{BoundaryTag, Mesh, Neighbor};
use crate::poly::{num_coeffs, Frame, Polynomial, MAX_COEFFS};
use crate::quadrature::TriangleQuadrature;
use crate::weno::{nonlinear_weights, WenoConfig};

/// Default minimum size of the big stencil before deficiency extension stops.
pub const BIG_STENCIL_SIZE: usize = 16;
/// Big stencils whose quartic fit amplifies data by more than this at an edge
/// quadrature point grow by nearest cells, at most `MAX_GROWTH` of them.
pub const LEBESGUE_LIMIT: f64 = 10.0;
pub const MAX_GROWTH: usize = 8;
/// Relative singular-value cutoff for the reduced least-squares systems.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// A stencil entry: a mesh cell or a mirrored ghost cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Member {
    Cell(usize),
    Ghost(usize),
}

/// Mirror image of mesh cell `source` under `transform`.
#[derive(Debug, Clone)]
pub struct Ghost {
    pub source: usize,
    pub transform: Isometry,
    /// Counter-clockwise.
    pub vertices: [Vec2; 3],
    pub centroid: Vec2,
    pub kind: GhostKind,
}

/// What a ghost cell's average is made of.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GhostKind {
    /// Analytic average; reached through an `EXACT` edge.
    Exact,
    /// The fixed state of the Dirichlet boundary it lies behind.
    Fixed(BoundaryTag),
    /// Source cell state with momentum mapped by the matrix: walls reflect it,
    /// outflow edges copy it.
    Mirror([[f64; 2]; 2]),
}

impl GhostKind {
    fn cross(self, tag: BoundaryTag, r: &Isometry) -> GhostKind {
        match (self, tag) {
            (GhostKind::Exact, _) | (_, BoundaryTag::Exact) => GhostKind::Exact,
            (GhostKind::Fixed(t), _) => GhostKind::Fixed(t),
            (_, BoundaryTag::DirichletLeft | BoundaryTag::DirichletTop) => GhostKind::Fixed(tag),
            (GhostKind::Mirror(m), BoundaryTag::Wall) => GhostKind::Mirror(mat_mul(&m, &r.m)),
            (GhostKind::Mirror(m), BoundaryTag::Outflow) => GhostKind::Mirror(m),
        }
    }
}

fn mat_mul(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    std::array::from_fn(|r| std::array::from_fn(|c| a[r][0] * b[0][c] + a[r][1] * b[1][c]))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CellStencils {
    /// Target first.
    pub big: Vec<Member>,
    /// Sector `k` is bounded by the rays from the centroid through vertices
    /// `k` and `k + 1`; empty when the neighbor across edge `k` is missing.
    pub sectors: [Vec<Member>; 3],
    /// Target and its edge neighbors.
    pub central: Vec<Member>,
}

#[derive(Debug, Clone)]
pub struct StencilSet {
    pub cells: Vec<CellStencils>,
    pub ghosts: Vec<Ghost>,
}

struct Builder<'a> {
    mesh: &'a Mesh,
    ghosts: Vec<Ghost>,
    by_source: HashMap<usize, Vec<usize>>,
    scale: f64,
    min_big: usize,
}

impl<'a> Builder<'a> {
    fn canonical(&mut self, cell: usize, t: Isometry, kind: GhostKind) -> Member {
        if t.approx_eq(&Isometry::IDENTITY, self.scale) {
            return Member::Cell(cell);
        }
        let bucket = self.by_source.entry(cell).or_default();
        if let Some(&g) = bucket
            .iter()
            .find(|&&g| self.ghosts[g].transform.approx_eq(&t, self.scale))
        {
            return Member::Ghost(g);
        }
        let mut vertices = self.mesh.cell_vertices(cell).map(|p| t.apply(p));
        if t.is_orientation_reversing() {
            vertices.swap(1, 2);
        }
        let centroid = t.apply(self.mesh.geometry(cell).centroid);
        self.ghosts.push(Ghost {
            source: cell,
            transform: t,
            vertices,
            centroid,
            kind,
        });
        bucket.push(self.ghosts.len() - 1);
        Member::Ghost(self.ghosts.len() - 1)
    }

    fn source(&self, m: Member) -> (usize, Isometry, GhostKind) {
        match m {
            Member::Cell(c) => (c, Isometry::IDENTITY, GhostKind::Mirror(Isometry::IDENTITY.m)),
            Member::Ghost(g) => {
                let g = &self.ghosts[g];
                (g.source, g.transform, g.kind)
            }
        }
    }

    fn centroid(&self, m: Member) -> Vec2 {
        match m {
            Member::Cell(c) => self.mesh.geometry(c).centroid,
            Member::Ghost(g) => self.ghosts[g].centroid,
        }
    }

    /// Members across the three edges of `m` (in the source cell's edge order).
    fn neighbors(&mut self, m: Member) -> [Option<Member>; 3] {
        let (c, t, kind) = self.source(m);
        let verts = self.mesh.cell_vertices(c);
        let mut out = [None; 3];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = match self.mesh.neighbors(c)[k] {
                Neighbor::Cell(d) => Some(self.canonical(d, t, kind)),
                Neighbor::Boundary(tag) => {
                    let r = Isometry::reflection(verts[k], verts[(k + 1) % 3]);
                    Some(self.canonical(c, t.compose(&r), kind.cross(tag, &r)))
                }
            };
        }
        out
    }

    fn by_distance(&self, from: Vec2, members: &mut [Member]) {
        members.sort_by(|&a, &b| {
            from.distance(self.centroid(a))
                .total_cmp(&from.distance(self.centroid(b)))
                .then(a.cmp(&b))
        });
    }

    /// Worst-case sum of |weights| mapping stencil averages to quartic values
    /// at the target's edge quadrature points; infinite if the fit is singular.
    fn lebesgue(&self, i: usize, big: &[Member]) -> f64 {
        let geom = self.mesh.geometry(i);
        let frame = Frame::new(geom.centroid, geom.area);
        let target = moments(&frame, &self.mesh.cell_vertices(i));
        let rows: Vec<_> = big[1..]
            .iter()
            .map(|&m| moments(&frame, &self.vertices(m)))
            .collect();
        let Some(pinv) = least_squares(&rows, &target, 4) else {
            return f64::INFINITY;
        };
        let n = num_coeffs(4) - 1;
        let mut worst: f64 = 0.0;
        for edge in &geom.edges {
            for &x in &edge.quadrature.points {
                let b = frame.basis(x);
                let mut sum = 0.0;
                let mut abs = 0.0;
                for col in pinv.chunks(n) {
                    let w: f64 = (0..n).map(|j| col[j] * (b[j + 1] - target[j + 1])).sum();
                    sum += w;
                    abs += w.abs();
                }
                worst = worst.max(abs + (1.0 - sum).abs());
            }
        }
        worst
    }

    /// Grow an ill-conditioned big stencil by nearest cells; keeps the best
    /// size tried.
    fn condition(&mut self, i: usize, mut big: Vec<Member>) -> Vec<Member> {
        let c0 = self.mesh.geometry(i).centroid;
        let mut leb = self.lebesgue(i, &big);
        let mut best = (leb, big.len());
        let cap = big.len() + MAX_GROWTH;
        while leb > LEBESGUE_LIMIT && big.len() < cap {
            let mut frontier = Vec::new();
            for idx in 0..big.len() {
                for n in self.neighbors(big[idx]).into_iter().flatten() {
                    if !big.contains(&n) && !frontier.contains(&n) {
                        frontier.push(n);
                    }
                }
            }
            if frontier.is_empty() {
                break;
            }
            self.by_distance(c0, &mut frontier);
            big.push(frontier[0]);
            leb = self.lebesgue(i, &big);
            if leb < best.0 {
                best = (leb, big.len());
            }
        }
        big.truncate(best.1);
        big
    }

    fn vertices(&self, m: Member) -> [Vec2; 3] {
        match m {
            Member::Cell(c) => self.mesh.cell_vertices(c),
            Member::Ghost(g) => self.ghosts[g].vertices,
        }
    }

    fn build_cell(&mut self, i: usize) -> CellStencils {
        let target = Member::Cell(i);
        let c0 = self.mesh.geometry(i).centroid;
        let first = self.neighbors(target);

        let mut second: [Vec<Member>; 3] = Default::default();
        for k in 0..3 {
            if let Some(f) = first[k] {
                for n in self.neighbors(f).into_iter().flatten() {
                    if n != target && !second[k].contains(&n) {
                        second[k].push(n);
                    }
                }
            }
        }

        // one outward cell beyond each second-layer cell: farthest from the target
        let mut third = Vec::new();
        for k in 0..3 {
            for &s in &second[k] {
                let pick = self
                    .neighbors(s)
                    .into_iter()
                    .flatten()
                    .filter(|&n| Some(n) != first[k])
                    .max_by(|&a, &b| {
                        c0.distance(self.centroid(a))
                            .total_cmp(&c0.distance(self.centroid(b)))
                            .then(b.cmp(&a))
                    });
                third.extend(pick);
            }
        }

        let mut big = vec![target];
        for m in first
            .iter()
            .flatten()
            .chain(second.iter().flatten())
            .chain(third.iter())
        {
            if !big.contains(m) {
                big.push(*m);
            }
        }
        while big.len() < self.min_big {
            let mut frontier = Vec::new();
            for idx in 0..big.len() {
                for n in self.neighbors(big[idx]).into_iter().flatten() {
                    if !big.contains(&n) && !frontier.contains(&n) {
                        frontier.push(n);
                    }
                }
            }
            if frontier.is_empty() {
                break;
            }
            self.by_distance(c0, &mut frontier);
            let need = self.min_big - big.len();
            big.extend(frontier.into_iter().take(need));
        }
        let big = self.condition(i, big);

        let verts = self.mesh.cell_vertices(i);
        let in_sector = |k: usize, p: Vec2| {
            let a = verts[k] - c0;
            let b = verts[(k + 1) % 3] - c0;
            let d = p - c0;
            a.cross(d) >= 0.0 && d.cross(b) > 0.0
        };
        let mut candidates: Vec<Member> = Vec::new();
        for m in second.iter().flatten() {
            if !candidates.contains(m) && !first.contains(&Some(*m)) {
                candidates.push(*m);
            }
        }
        let mut sectors: [Vec<Member>; 3] = Default::default();
        for k in 0..3 {
            let Some(f) = first[k] else { continue };
            let mut own: Vec<Member> = candidates
                .iter()
                .copied()
                .filter(|&m| in_sector(k, self.centroid(m)))
                .collect();
            self.by_distance(c0, &mut own);
            own.truncate(2);
            if own.len() < 2 {
                let mut fill: Vec<Member> = second[k]
                    .iter()
                    .copied()
                    .filter(|m| !own.contains(m) && !first.contains(&Some(*m)))
                    .collect();
                self.by_distance(c0, &mut fill);
                own.extend(fill.into_iter().take(2 - own.len()));
            }
            sectors[k] = [target, f].into_iter().chain(own).collect();
        }

        let central = std::iter::once(target)
            .chain(first.iter().flatten().copied())
            .collect();

        CellStencils {
            big,
            sectors,
            central,
        }
    }
}

impl StencilSet {
    pub fn build(mesh: &Mesh) -> StencilSet {
        StencilSet::build_with(mesh, BIG_STENCIL_SIZE)
    }

    /// As `build`, with big stencils of at least `min_big` cells where the
    /// mesh allows.
    pub fn build_with(mesh: &Mesh, min_big: usize) -> StencilSet {
        let mut b = Builder {
            mesh,
            ghosts: Vec::new(),
            by_source: HashMap::new(),
            scale: mesh.bounding_box().diagonal(),
            min_big,
        };
        let cells = (0..mesh.num_cells()).map(|i| b.build_cell(i)).collect();
        StencilSet {
            cells,
            ghosts: b.ghosts,
        }
    }

    pub fn vertices(&self, mesh: &Mesh, m: Member) -> [Vec2; 3] {
        match m {
            Member::Cell(c) => mesh.cell_vertices(c),
            Member::Ghost(g) => self.ghosts[g].vertices,
        }
    }

    pub fn centroid(&self, mesh: &Mesh, m: Member) -> Vec2 {
        match m {
            Member::Cell(c) => mesh.geometry(c).centroid,
            Member::Ghost(g) => self.ghosts[g].centroid,
        }
    }

    /// Human-readable membership listing, one cell per line.
    pub fn dump(&self) -> String {
        fn list(ms: &[Member]) -> String {
            ms.iter()
                .map(|m| match m {
                    Member::Cell(c) => c.to_string(),
                    Member::Ghost(g) => format!("g{g}"),
                })
                .collect::<Vec<_>>()
                .join(",")
        }
        let mut s = String::new();
        for (i, c) in self.cells.iter().enumerate() {
            let _ = writeln!(
                s,
                "{i} T1=[{}] T2=[{}] T3=[{}] T4=[{}] T5=[{}]",
                list(&c.big),
                list(&c.sectors[0]),
                list(&c.sectors[1]),
                list(&c.sectors[2]),
                list(&c.central)
            );
        }
        s
    }
}

/// Least-squares map for one stencil: stencil averages minus the target
/// average, to the non-constant coefficients of the polynomial.
#[derive(Debug, Clone)]
pub struct StencilOperator {
    /// 0 for the big stencil, 1..=3 for sectors, 4 for the central stencil.
    pub slot: usize,
    pub degree: usize,
    /// Members other than the target, in column order.
    pub members: Vec<Member>,
    /// Column-major `(num_coeffs(degree) - 1) × members.len()`.
    pinv: Vec<f64>,
    /// Quadratic form of the smoothness indicator over the non-constant
    /// coefficients, row-major and square.
    smoothness: Vec<f64>,
}

impl StencilOperator {
    pub fn unknowns(&self) -> usize {
        num_coeffs(self.degree) - 1
    }

    /// Non-constant coefficients for the given average differences.
    pub fn solve(&self, diffs: &[f64]) -> Vec<f64> {
        let n = self.unknowns();
        let mut c = vec![0.0; n];
        for (r, d) in diffs.iter().enumerate() {
            for j in 0..n {
                c[j] += self.pinv[r * n + j] * d;
            }
        }
        c
    }

    /// β evaluated from non-constant coefficients.
    pub fn smoothness(&self, c: &[f64]) -> f64 {
        let n = self.unknowns();
        let mut beta = 0.0;
        for j in 0..n {
            let row = &self.smoothness[j * n..(j + 1) * n];
            let s: f64 = row.iter().zip(c).map(|(b, x)| b * x).sum();
            beta += c[j] * s;
        }
        beta
    }
}

/// Reconstruction data for one target cell.
#[derive(Debug, Clone)]
pub struct CellOperator {
    pub cell: usize,
    pub frame: Frame,
    pub area: f64,
    /// Averages of the basis monomials over the target cell.
    pub target_moments: [f64; MAX_COEFFS],
    /// Big stencil first, then whichever linear stencils survived.
    pub stencils: Vec<StencilOperator>,
    /// Linear weights aligned with `stencils`, summing to one.
    pub gammas: Vec<f64>,
    /// Set when the big stencil lost degree or a linear stencil was dropped.
    pub degraded: bool,
}

/// Non-constant coefficients per conservative component.
pub type Coeffs<const N: usize> = [[f64; MAX_COEFFS]; N];

impl CellOperator {
    pub fn degree(&self) -> usize {
        self.stencils[0].degree
    }

    /// WENO-combined polynomial for every component, as full
    /// monomial coefficients in this cell's frame.
    pub fn reconstruct<const N: usize>(
        &self,
        cfg: &WenoConfig,
        target: &[f64; N],
        avg: impl Fn(Member) -> [f64; N],
    ) -> Coeffs<N> {
        const MAX_STENCILS: usize = 5;
        let mut coeffs = [[[0.0f64; N]; MAX_COEFFS - 1]; MAX_STENCILS];
        let mut betas = [[0.0f64; MAX_STENCILS]; N];
        let ns = self.stencils.len();

        for (s, op) in self.stencils.iter().enumerate() {
            let n = op.unknowns();
            let c = &mut coeffs[s];
            for (r, &m) in op.members.iter().enumerate() {
                let a = avg(m);
                let col = &op.pinv[r * n..(r + 1) * n];
                for q in 0..N {
                    let d = a[q] - target[q];
                    for j in 0..n {
                        c[j][q] += col[j] * d;
                    }
                }
            }
            for q in 0..N {
                let mut beta = 0.0;
                for j in 0..n {
                    let row = &op.smoothness[j * n..(j + 1) * n];
                    let mut acc = 0.0;
                    for l in 0..n {
                        acc += row[l] * c[l][q];
                    }
                    beta += c[j][q] * acc;
                }
                betas[q][s] = beta;
            }
        }

        let mut out = [[0.0f64; MAX_COEFFS]; N];
        for q in 0..N {
            let omega = nonlinear_weights(&self.gammas, &betas[q][..ns], cfg.epsilon);
            let g0 = self.gammas[0];
            let mut total = 0.0;
            for s in 0..ns {
                let w = if s == 0 {
                    omega[0] / g0
                } else {
                    omega[s] - omega[0] * self.gammas[s] / g0
                };
                total += w;
                let n = self.stencils[s].unknowns();
                for j in 0..n {
                    out[q][j + 1] += w * coeffs[s][j][q];
                }
            }
            let mut c0 = target[q] * total;
            for j in 1..MAX_COEFFS {
                c0 -= out[q][j] * self.target_moments[j];
            }
            out[q][0] = c0;
        }
        out
    }

    /// The individual stencil polynomials for scalar data.
    pub fn polynomials(&self, target: f64, avg: impl Fn(Member) -> f64) -> Vec<Polynomial> {
        self.stencils
            .iter()
            .map(|op| {
                let diffs: Vec<f64> = op.members.iter().map(|&m| avg(m) - target).collect();
                let c = op.solve(&diffs);
                let mut coeffs = Vec::with_capacity(c.len() + 1);
                let c0 = target
                    - c.iter()
                        .zip(&self.target_moments[1..])
                        .map(|(a, b)| a * b)
                        .sum::<f64>();
                coeffs.push(c0);
                coeffs.extend(c);
                Polynomial::new(op.degree, coeffs, self.frame, self.cell)
            })
            .collect()
    }
}

/// Precomputed operators for every cell of a mesh.
#[derive(Debug, Clone)]
pub struct ReconstructionOperator {
    pub cells: Vec<CellOperator>,
}

impl ReconstructionOperator {
    pub fn build(mesh: &Mesh, stencils: &StencilSet, cfg: &WenoConfig) -> Result<Self> {
        let cells = (0..mesh.num_cells())
            .into_par_iter()
            .map(|i| assemble_operator(mesh, stencils, i, cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(ReconstructionOperator { cells })
    }

    pub fn degraded_cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().filter(|c| c.degraded).map(|c| c.cell)
    }
}

fn moments(frame: &Frame, vertices: &[Vec2; 3]) -> [f64; MAX_COEFFS] {
    let mut m = [0.0; MAX_COEFFS];
    for (p, w) in TriangleQuadrature::DEGREE6.nodes(vertices) {
        for (mj, bj) in m.iter_mut().zip(frame.basis(p)) {
            *mj += w * bj;
        }
    }
    m
}

/// `Σ_{1≤|α|≤r} |Δ|^{|α|−1} ∫_Δ D^α φ_j D^α φ_l` over non-constant basis pairs.
fn smoothness_form(frame: &Frame, vertices: &[Vec2; 3], area: f64, degree: usize) -> Vec<f64> {
    let n = num_coeffs(degree) - 1;
    let mut form = vec![0.0; n * n];
    for (p, w) in TriangleQuadrature::DEGREE6.nodes(vertices) {
        for order in 1..=degree {
            let scale = w * area * area.powi(order as i32 - 1);
            for a in 0..=order {
                let d = frame.basis_derivative(p, a as u8, (order - a) as u8);
                for j in 0..n {
                    for l in 0..n {
                        form[j * n + l] += scale * d[j + 1] * d[l + 1];
                    }
                }
            }
        }
    }
    form
}

fn least_squares(
    rows: &[[f64; MAX_COEFFS]],
    target: &[f64; MAX_COEFFS],
    degree: usize,
) -> Option<Vec<f64>> {
    let n = num_coeffs(degree) - 1;
    if rows.len() < n {
        return None;
    }
    let a = DMatrix::from_fn(rows.len(), n, |r, j| rows[r][j + 1] - target[j + 1]);
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    let (max, min) = (sv.max(), sv.min());
    if !(max > 0.0) || min < RANK_TOLERANCE * max {
        return None;
    }
    let pinv = svd.pseudo_inverse(0.0).ok()?;
    // store column-major: entry (j, r) at r * n + j
    let mut out = vec![0.0; n * rows.len()];
    for r in 0..rows.len() {
        for j in 0..n {
            out[r * n + j] = pinv[(j, r)];
        }
    }
    Some(out)
}

/// Constrained least-squares operators for cell `i`: the constant coefficient
/// is eliminated through the exact target-average constraint and the reduced
/// problem is solved by SVD.
pub fn assemble_operator(
    mesh: &Mesh,
    stencils: &StencilSet,
    i: usize,
    cfg: &WenoConfig,
) -> Result<CellOperator> {
    let geom = mesh.geometry(i);
    let verts = mesh.cell_vertices(i);
    let frame = Frame::new(geom.centroid, geom.area);
    let target_moments = moments(&frame, &verts);
    let cs = &stencils.cells[i];
    let rows_of = |members: &[Member]| -> Vec<[f64; MAX_COEFFS]> {
        members
            .iter()
            .map(|&m| moments(&frame, &stencils.vertices(mesh, m)))
            .collect()
    };
    let mut degraded = false;

    let big_members: Vec<Member> = cs.big[1..].to_vec();
    let big_rows = rows_of(&big_members);
    let mut big = None;
    for degree in (1..=4).rev() {
        if let Some(pinv) = least_squares(&big_rows, &target_moments, degree) {
            big = Some(StencilOperator {
                slot: 0,
                degree,
                members: big_members.clone(),
                pinv,
                smoothness: smoothness_form(&frame, &verts, geom.area, degree),
            });
            break;
        }
        degraded = true;
    }
    let big = big.ok_or(Error::RankDeficient {
        cell: i,
        stencil: 1,
    })?;

    let linear_form = smoothness_form(&frame, &verts, geom.area, 1);
    let mut ops = vec![big];
    let mut gammas = vec![cfg.gamma[0]];
    let small = cs
        .sectors
        .iter()
        .enumerate()
        .map(|(k, s)| (k + 1, s))
        .chain(std::iter::once((4, &cs.central)));
    for (slot, members) in small {
        let members: Vec<Member> = members.iter().skip(1).copied().collect();
        let pinv = if members.is_empty() {
            None
        } else {
            least_squares(&rows_of(&members), &target_moments, 1)
        };
        match pinv {
            Some(pinv) => {
                ops.push(StencilOperator {
                    slot,
                    degree: 1,
                    members,
                    pinv,
                    smoothness: linear_form.clone(),
                });
                gammas.push(cfg.gamma[slot]);
            }
            None => {}
        }
    }

    if gammas.len() == 1 {
        gammas[0] = 1.0;
    } else {
        let linear: f64 = gammas[1..].iter().sum();
        let available = cfg.gamma[1..].iter().sum::<f64>();
        for g in &mut gammas[1..] {
            *g *= available / linear;
        }
    }

    Ok(CellOperator {
        cell: i,
        frame,
        area: geom.area,
        target_moments,
        stencils: ops,
        gammas,
        degraded,
    })
}

/// Cell average of `f` over a stencil member.
pub fn member_average(
    mesh: &Mesh,
    stencils: &StencilSet,
    m: Member,
    f: impl Fn(Vec2) -> f64,
) -> f64 {
    TriangleQuadrature::DEGREE6.average(&stencils.vertices(mesh, m), f)
}
