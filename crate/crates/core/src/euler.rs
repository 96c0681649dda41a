//! Compressible Euler physics: state conversions, fluxes, the Lax-Friedrichs
//! numerical flux, boundary states and the registered test cases.

use std::ops::{Add, AddAssign, Index, Mul, Sub};

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::mesh::{BoundaryTag, Mesh};
use crate::quadrature::TriangleQuadrature;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams {
    /// Ratio of specific heats.
    pub gamma: f64,
}

impl Default for GasParams {
    fn default() -> Self {
        GasParams { gamma: 1.4 }
    }
}

/// Conservative variables `(ρ, ρu, ρv, E)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State(pub [f64; 4]);

/// Primitive variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl Primitive {
    pub const fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        Primitive { rho, u, v, p }
    }

    pub fn to_conserved(self, gas: &GasParams) -> State {
        let Primitive { rho, u, v, p } = self;
        State([
            rho,
            rho * u,
            rho * v,
            p / (gas.gamma - 1.0) + 0.5 * rho * (u * u + v * v),
        ])
    }
}

impl State {
    pub const ZERO: State = State([0.0; 4]);

    pub fn rho(&self) -> f64 {
        self.0[0]
    }

    pub fn pressure(&self, gas: &GasParams) -> f64 {
        let [rho, mx, my, e] = self.0;
        (gas.gamma - 1.0) * (e - 0.5 * (mx * mx + my * my) / rho)
    }

    pub fn to_primitive(&self, gas: &GasParams) -> Primitive {
        let rho = self.0[0];
        Primitive {
            rho,
            u: self.0[1] / rho,
            v: self.0[2] / rho,
            p: self.pressure(gas),
        }
    }

    /// Primitive variables, or an error when `ρ ≤ 0` or `p ≤ 0`.
    pub fn physical(&self, gas: &GasParams) -> Result<Primitive> {
        let prim = self.to_primitive(gas);
        if prim.rho > 0.0 && prim.p > 0.0 && prim.u.is_finite() && prim.v.is_finite() {
            Ok(prim)
        } else {
            Err(Error::NonPhysical {
                rho: prim.rho,
                pressure: prim.p,
                cell: None,
                position: None,
            })
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Add for State {
    type Output = State;
    fn add(self, rhs: State) -> State {
        State(std::array::from_fn(|k| self.0[k] + rhs.0[k]))
    }
}

impl AddAssign for State {
    fn add_assign(&mut self, rhs: State) {
        for k in 0..4 {
            self.0[k] += rhs.0[k];
        }
    }
}

impl Sub for State {
    type Output = State;
    fn sub(self, rhs: State) -> State {
        State(std::array::from_fn(|k| self.0[k] - rhs.0[k]))
    }
}

impl Mul<f64> for State {
    type Output = State;
    fn mul(self, s: f64) -> State {
        State(self.0.map(|v| v * s))
    }
}

impl Index<usize> for State {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

/// Physical fluxes `(f, g)`.
pub fn flux(u: &State, gas: &GasParams) -> Result<(State, State)> {
    let Primitive { rho, u: vx, v: vy, p } = u.physical(gas)?;
    let e = u.0[3];
    Ok((
        State([rho * vx, rho * vx * vx + p, rho * vx * vy, vx * (e + p)]),
        State([rho * vy, rho * vx * vy, rho * vy * vy + p, vy * (e + p)]),
    ))
}

/// `f n_x + g n_y`.
pub fn normal_flux(u: &State, n: Vec2, gas: &GasParams) -> Result<State> {
    let (f, g) = flux(u, gas)?;
    Ok(f * n.x + g * n.y)
}

/// `|u·n| + c`.
pub fn max_wave_speed(u: &State, n: Vec2, gas: &GasParams) -> Result<f64> {
    let prim = u.physical(gas)?;
    Ok((prim.u * n.x + prim.v * n.y).abs() + (gas.gamma * prim.p / prim.rho).sqrt())
}

/// Lax-Friedrichs flux with a given dissipation coefficient `alpha`.
pub fn lax_friedrichs_with(
    inner: &State,
    outer: &State,
    n: Vec2,
    alpha: f64,
    gas: &GasParams,
) -> Result<State> {
    let fl = normal_flux(inner, n, gas)?;
    let fr = normal_flux(outer, n, gas)?;
    Ok(State(std::array::from_fn(|k| {
        0.5 * (fr.0[k] + fl.0[k] - alpha * (outer.0[k] - inner.0[k]))
    })))
}

/// Local Lax-Friedrichs flux: `α` is the larger of the two normal wave speeds.
pub fn lax_friedrichs(inner: &State, outer: &State, n: Vec2, gas: &GasParams) -> Result<State> {
    let alpha = max_wave_speed(inner, n, gas)?.max(max_wave_speed(outer, n, gas)?);
    lax_friedrichs_with(inner, outer, n, alpha, gas)
}

/// Smooth fields with closed-form steady states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Analytic {
    /// `ρ = p = 1 + 0.2 sin(x + y)`, `u = v = 1`; steady with [`Source::Sine`].
    SineWithSource,
    /// `ρ = 1 + 0.2 sin(x − y)`, `u = v = 1`, `p = 1`; steady without source.
    SineNoSource,
    Uniform(Primitive),
}

impl Analytic {
    pub fn primitive(&self, x: Vec2) -> Primitive {
        match *self {
            Analytic::SineWithSource => {
                let s = 1.0 + 0.2 * (x.x + x.y).sin();
                Primitive::new(s, 1.0, 1.0, s)
            }
            Analytic::SineNoSource => Primitive::new(1.0 + 0.2 * (x.x - x.y).sin(), 1.0, 1.0, 1.0),
            Analytic::Uniform(p) => p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source {
    None,
    /// `(0.4, 0.6, 0.6, 1.8) cos(x + y)`.
    Sine,
}

impl Source {
    pub fn value(&self, x: Vec2) -> State {
        match self {
            Source::None => State::ZERO,
            Source::Sine => State([0.4, 0.6, 0.6, 1.8]) * (x.x + x.y).cos(),
        }
    }
}

/// How the exterior state `u⁺` is formed on a tagged boundary edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryRule {
    Dirichlet(Primitive),
    /// Reflect the normal velocity.
    Wall,
    /// Copy the interior state.
    Outflow,
    /// Evaluate the case's analytic solution.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initial {
    /// Cell averages of the analytic solution.
    ExactAverages,
    Uniform(Primitive),
}

/// A registered problem: boundary behavior, analytic solution and source.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub id: String,
    pub gas: GasParams,
    pub rules: Vec<(BoundaryTag, BoundaryRule)>,
    pub analytic: Option<Analytic>,
    pub source: Source,
    pub initial: Initial,
    /// Default convergence threshold.
    pub delta: f64,
}

pub const SHOCK_LEFT: Primitive = Primitive::new(1.0, 2.9, 0.0, 5.0 / 7.0);
pub const SHOCK_TOP: Primitive = Primitive::new(1.69997, 2.61934, -0.50632, 1.52819);

pub const CASE_IDS: [&str; 4] = ["euler_source", "euler_nosource", "shock_reflection", "free_stream"];

impl Case {
    pub fn from_id(id: &str) -> Result<Case> {
        let exact_everywhere = |analytic, source| Case {
            id: id.to_string(),
            gas: GasParams::default(),
            rules: BoundaryTag::ALL
                .into_iter()
                .map(|t| (t, BoundaryRule::Exact))
                .collect(),
            analytic: Some(analytic),
            source,
            initial: Initial::ExactAverages,
            delta: 1e-12,
        };
        match id {
            "euler_source" => Ok(exact_everywhere(Analytic::SineWithSource, Source::Sine)),
            "euler_nosource" => Ok(exact_everywhere(Analytic::SineNoSource, Source::None)),
            "shock_reflection" => Ok(Case {
                id: id.to_string(),
                gas: GasParams::default(),
                rules: vec![
                    (BoundaryTag::DirichletLeft, BoundaryRule::Dirichlet(SHOCK_LEFT)),
                    (BoundaryTag::DirichletTop, BoundaryRule::Dirichlet(SHOCK_TOP)),
                    (BoundaryTag::Wall, BoundaryRule::Wall),
                    (BoundaryTag::Outflow, BoundaryRule::Outflow),
                ],
                analytic: None,
                source: Source::None,
                initial: Initial::Uniform(SHOCK_LEFT),
                delta: 1e-11,
            }),
            "free_stream" => Ok(Case::free_stream(id, SHOCK_LEFT)),
            other => Err(Error::UnknownCase(other.to_string())),
        }
    }

    /// Uniform flow with every boundary kind set consistently with it.
    pub fn free_stream(id: &str, state: Primitive) -> Case {
        Case {
            id: id.to_string(),
            gas: GasParams::default(),
            rules: vec![
                (BoundaryTag::DirichletLeft, BoundaryRule::Dirichlet(state)),
                (BoundaryTag::DirichletTop, BoundaryRule::Dirichlet(state)),
                (BoundaryTag::Wall, BoundaryRule::Wall),
                (BoundaryTag::Outflow, BoundaryRule::Outflow),
                (BoundaryTag::Exact, BoundaryRule::Exact),
            ],
            analytic: Some(Analytic::Uniform(state)),
            source: Source::None,
            initial: Initial::Uniform(state),
            delta: 1e-12,
        }
    }

    pub fn rule(&self, tag: BoundaryTag) -> Result<BoundaryRule> {
        self.rules
            .iter()
            .find(|(t, _)| *t == tag)
            .map(|(_, r)| *r)
            .ok_or(Error::MissingRule(tag))
    }

    /// Check that every boundary tag used by `mesh` has a rule.
    pub fn check_mesh(&self, mesh: &Mesh) -> Result<()> {
        for &(_, _, tag) in mesh.boundary_edges() {
            let rule = self.rule(tag)?;
            if rule == BoundaryRule::Exact && self.analytic.is_none() {
                return Err(Error::Config(format!(
                    "case '{}' has no analytic solution for {tag} edges",
                    self.id
                )));
            }
        }
        Ok(())
    }

    pub fn exact_solution(&self, x: Vec2) -> Option<State> {
        self.analytic
            .map(|a| a.primitive(x).to_conserved(&self.gas))
    }

    /// Cell average of the analytic solution over a triangle.
    pub fn exact_average(&self, vertices: &[Vec2; 3]) -> Option<State> {
        let a = self.analytic?;
        let mut acc = State::ZERO;
        for (p, w) in TriangleQuadrature::DEGREE6.nodes(vertices) {
            acc += a.primitive(p).to_conserved(&self.gas) * w;
        }
        Some(acc)
    }

    pub fn initial_state(&self, vertices: &[Vec2; 3]) -> Result<State> {
        match self.initial {
            Initial::Uniform(p) => Ok(p.to_conserved(&self.gas)),
            Initial::ExactAverages => self.exact_average(vertices).ok_or_else(|| {
                Error::Config(format!("case '{}' has no analytic solution", self.id))
            }),
        }
    }
}

/// Cell average of the source term over cell `i`.
pub fn source_average(mesh: &Mesh, i: usize, case: &Case) -> State {
    if case.source == Source::None {
        return State::ZERO;
    }
    let mut acc = State::ZERO;
    for (p, w) in TriangleQuadrature::DEGREE6.nodes(&mesh.cell_vertices(i)) {
        acc += case.source.value(p) * w;
    }
    acc
}

/// Exterior state `u⁺` at a boundary quadrature point.
pub fn boundary_state(
    rule: BoundaryRule,
    interior: &State,
    n: Vec2,
    point: Vec2,
    case: &Case,
) -> Result<State> {
    match rule {
        BoundaryRule::Dirichlet(p) => Ok(p.to_conserved(&case.gas)),
        BoundaryRule::Outflow => Ok(*interior),
        BoundaryRule::Wall => {
            let [rho, mx, my, e] = interior.0;
            let mn = mx * n.x + my * n.y;
            Ok(State([rho, mx - 2.0 * mn * n.x, my - 2.0 * mn * n.y, e]))
        }
        BoundaryRule::Exact => case.exact_solution(point).ok_or_else(|| {
            Error::Config(format!("case '{}' has no analytic solution", case.id))
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas() -> GasParams {
        GasParams::default()
    }

    fn cons(rho: f64, u: f64, v: f64, p: f64) -> State {
        Primitive::new(rho, u, v, p).to_conserved(&gas())
    }

    #[test]
    fn stationary_gas_flux() {
        let u = cons(1.0, 0.0, 0.0, 1.0);
        assert!((u.0[3] - 2.5).abs() < 1e-15);
        let (f, g) = flux(&u, &gas()).unwrap();
        assert_eq!(f, State([0.0, 1.0, 0.0, 0.0]));
        assert_eq!(g, State([0.0, 0.0, 1.0, 0.0]));
    }

    #[test]
    fn moving_gas_flux() {
        let u = cons(1.0, 1.0, 1.0, 1.0);
        assert!((u.0[3] - 3.5).abs() < 1e-15);
        let (f, _) = flux(&u, &gas()).unwrap();
        let expect = [1.0, 2.0, 1.0, 4.5];
        for k in 0..4 {
            assert!((f.0[k] - expect[k]).abs() < 1e-14);
        }
        let (fm, _) = flux(&cons(1.0, -1.0, 0.0, 1.0), &gas()).unwrap();
        let (fp, _) = flux(&cons(1.0, 1.0, 0.0, 1.0), &gas()).unwrap();
        assert_eq!(fm.0[0], -fp.0[0]);
        assert_eq!(fm.0[1], fp.0[1]);
        assert_eq!(fm.0[3], -fp.0[3]);
    }

    #[test]
    fn non_physical_states_are_rejected() {
        assert!(matches!(
            flux(&State([-1.0, 0.0, 0.0, 1.0]), &gas()),
            Err(Error::NonPhysical { .. })
        ));
        assert!(matches!(
            flux(&State([1.0, 3.0, 0.0, 1.0]), &gas()),
            Err(Error::NonPhysical { .. })
        ));
    }

    #[test]
    fn wave_speed() {
        let u = cons(1.0, 0.0, 0.0, 1.0);
        let c = max_wave_speed(&u, Vec2::new(1.0, 0.0), &gas()).unwrap();
        assert!((c - 1.4f64.sqrt()).abs() < 1e-15);
        assert!((c - 1.1832).abs() < 1e-4);
        let tangential = cons(1.0, 0.0, 5.0, 1.0);
        assert_eq!(max_wave_speed(&tangential, Vec2::new(1.0, 0.0), &gas()).unwrap(), c);
        let normal = cons(1.0, 2.0, 0.0, 1.0);
        let c2 = max_wave_speed(&normal, Vec2::new(1.0, 0.0), &gas()).unwrap();
        assert!((c2 - c - 2.0).abs() < 1e-15);
    }

    #[test]
    fn normal_flux_is_rotation_invariant() {
        let (rho, speed, p) = (1.2, 0.8, 0.9);
        let theta = 0.7f64;
        let n = Vec2::new(theta.cos(), theta.sin());
        let rotated = cons(rho, speed * theta.cos(), speed * theta.sin(), p);
        let aligned = cons(rho, speed, 0.0, p);
        let fr = normal_flux(&rotated, n, &gas()).unwrap();
        let fa = normal_flux(&aligned, Vec2::new(1.0, 0.0), &gas()).unwrap();
        // mass and energy are scalars; momentum rotates with the frame
        assert!((fr.0[0] - fa.0[0]).abs() < 1e-14);
        assert!((fr.0[3] - fa.0[3]).abs() < 1e-14);
        assert!((fr.0[1] - fa.0[1] * theta.cos()).abs() < 1e-14);
        assert!((fr.0[2] - fa.0[1] * theta.sin()).abs() < 1e-14);
    }

    #[test]
    fn lax_friedrichs_hand_evaluation() {
        let g = gas();
        let ul = cons(1.0, 0.5, 0.0, 1.0);
        let ur = cons(0.5, 0.0, 0.25, 0.4);
        let n = Vec2::new(1.0, 0.0);
        let got = lax_friedrichs(&ul, &ur, n, &g).unwrap();
        // α = max(0.5 + √1.4, 0 + √(1.4·0.4/0.5))
        let alpha = (0.5 + 1.4f64.sqrt()).max((1.4f64 * 0.8).sqrt());
        let el = 1.0 / 0.4 + 0.5 * 0.25;
        let er = 0.4 / 0.4 + 0.5 * 0.5 * 0.0625;
        let fl = [0.5, 0.25 + 1.0, 0.0, 0.5 * (el + 1.0)];
        let fr = [0.0, 0.4, 0.0, 0.0];
        let ulv = [1.0, 0.5, 0.0, el];
        let urv = [0.5, 0.0, 0.125, er];
        for k in 0..4 {
            let want = 0.5 * (fl[k] + fr[k] - alpha * (urv[k] - ulv[k]));
            assert!((got.0[k] - want).abs() < 1e-14, "component {k}");
        }
    }

    #[test]
    fn wall_mirror() {
        let case = Case::from_id("shock_reflection").unwrap();
        let u = cons(1.0, 2.0, -0.5, 1.0);
        let out = boundary_state(BoundaryRule::Wall, &u, Vec2::new(0.0, -1.0), Vec2::default(), &case)
            .unwrap();
        let p = out.to_primitive(&case.gas);
        assert!((p.rho - 1.0).abs() < 1e-15);
        assert!((p.u - 2.0).abs() < 1e-15);
        assert!((p.v - 0.5).abs() < 1e-15);
        assert!((p.p - 1.0).abs() < 1e-14);
    }

    #[test]
    fn shock_reflection_left_state() {
        let case = Case::from_id("shock_reflection").unwrap();
        let rule = case.rule(BoundaryTag::DirichletLeft).unwrap();
        let anything = cons(3.0, 0.1, 0.2, 4.0);
        let out = boundary_state(rule, &anything, Vec2::new(-1.0, 0.0), Vec2::new(0.0, 0.3), &case)
            .unwrap();
        let p = out.to_primitive(&case.gas);
        assert!((p.rho - 1.0).abs() < 1e-15);
        assert!((p.u - 2.9).abs() < 1e-15);
        assert_eq!(p.v, 0.0);
        assert!((p.p - 5.0 / 7.0).abs() < 1e-15);
        let outflow = boundary_state(BoundaryRule::Outflow, &anything, Vec2::new(1.0, 0.0), Vec2::default(), &case)
            .unwrap();
        assert_eq!(outflow, anything);
        assert!(matches!(case.rule(BoundaryTag::Exact), Err(Error::MissingRule(BoundaryTag::Exact))));
    }

    #[test]
    fn exact_solutions() {
        let c1 = Case::from_id("euler_source").unwrap();
        let u = c1.exact_solution(Vec2::new(0.0, 0.0)).unwrap();
        assert_eq!(u.0[0], 1.0);
        assert!((u.0[3] - 3.5).abs() < 1e-15);
        let c2 = Case::from_id("euler_nosource").unwrap();
        let u = c2.exact_solution(Vec2::new(0.7, 0.7)).unwrap();
        assert_eq!(u.0[0], 1.0);
        assert!(matches!(Case::from_id("nope"), Err(Error::UnknownCase(_))));
    }

    /// Central-difference divergence of the analytic flux minus the source.
    fn steady_residual(case: &Case, x: Vec2) -> f64 {
        let h = 1e-5;
        let g = case.gas;
        let f = |p: Vec2| flux(&case.exact_solution(p).unwrap(), &g).unwrap();
        let (fe, _) = f(x + Vec2::new(h, 0.0));
        let (fw, _) = f(x - Vec2::new(h, 0.0));
        let (_, gn) = f(x + Vec2::new(0.0, h));
        let (_, gs) = f(x - Vec2::new(0.0, h));
        let div = (fe - fw) * (0.5 / h) + (gn - gs) * (0.5 / h);
        (div - case.source.value(x)).max_abs()
    }

    #[test]
    fn analytic_fields_are_steady() {
        for id in ["euler_source", "euler_nosource"] {
            let case = Case::from_id(id).unwrap();
            for k in 0..20 {
                let x = Vec2::new(0.31 * k as f64, 6.0 - 0.27 * k as f64);
                let r = steady_residual(&case, x);
                assert!(r < 1e-6, "{id} at {x:?}: {r}");
            }
        }
    }

    #[test]
    fn source_limit_at_origin() {
        let text = "3 1 3\n0 0\n1e-4 0\n0 1e-4\n0 1 2\n0 1 EXACT\n1 2 EXACT\n2 0 EXACT\n";
        let mesh = Mesh::parse(text).unwrap();
        let case = Case::from_id("euler_source").unwrap();
        let s = source_average(&mesh, 0, &case);
        let expect = [0.4, 0.6, 0.6, 1.8];
        for k in 0..4 {
            assert!((s.0[k] - expect[k]).abs() < 1e-8);
        }
        let none = Case::from_id("euler_nosource").unwrap();
        assert_eq!(source_average(&mesh, 0, &none), State::ZERO);
    }

    #[test]
    fn source_average_against_subdivision() {
        let text = "3 1 3\n0.3 0.1\n1.4 0.5\n0.6 1.3\n0 1 2\n0 1 EXACT\n1 2 EXACT\n2 0 EXACT\n";
        let mesh = Mesh::parse(text).unwrap();
        let case = Case::from_id("euler_source").unwrap();
        let s = source_average(&mesh, 0, &case);
        // split into 4^5 similar triangles and apply the rule on each
        let mut tris = vec![mesh.cell_vertices(0)];
        for _ in 0..5 {
            tris = tris
                .into_iter()
                .flat_map(|[a, b, c]| {
                    let (ab, bc, ca) = (a.midpoint(b), b.midpoint(c), c.midpoint(a));
                    [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]
                })
                .collect();
        }
        let q = TriangleQuadrature::DEGREE6;
        let brute = tris
            .iter()
            .map(|t| q.average(t, |p| (p.x + p.y).cos()))
            .sum::<f64>()
            / tris.len() as f64;
        assert!((s.0[0] - 0.4 * brute).abs() < 5e-8);
        assert!((s.0[3] - 1.8 * brute).abs() < 5e-8);
    }
}
