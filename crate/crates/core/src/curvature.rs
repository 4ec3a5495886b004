//! Combinatorial curvature, left turns along boundary walks and the two
//! Gauss-Bonnet identities, all in exact rationals.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{q, qi, Q};
use crate::selection::{BoundaryWalk, SubgraphSelection, Visit};
use crate::window::{FaceId, TriangulationWindow, V};

/// `κ(v) = 1 - deg v / 2 + Σ_{f ∼ v} 1 / deg f`.
pub fn vertex_curvature(w: &TriangulationWindow, v: V) -> Result<Q> {
    let faces = w.faces_around(v)?;
    let d = faces.len() as i64;
    let mut k = qi(1) - q(d, 2);
    for f in faces {
        k += q(1, w.face_degree(f) as i64);
    }
    Ok(k)
}

/// `κ(v, f) = 1/deg v + 1/deg f - 1/2`.
pub fn corner_curvature(w: &TriangulationWindow, v: V, f: FaceId) -> Result<Q> {
    let faces = w.faces_around(v)?;
    if (f as usize) >= w.faces().len() || !faces.contains(&f) {
        return Err(Error::NotIncident { v, f: f as usize });
    }
    Ok(q(1, faces.len() as i64) + q(1, w.face_degree(f) as i64) - q(1, 2))
}

pub fn curvature_sum(w: &TriangulationWindow, verts: &[V]) -> Result<Q> {
    let mut total = Q::zero();
    for &v in verts {
        total += vertex_curvature(w, v)?;
    }
    Ok(total)
}

/// `κ(S)`.
pub fn subgraph_curvature(s: &SubgraphSelection) -> Result<Q> {
    s.require_complete()?;
    curvature_sum(s.window(), s.vertices())
}

/// `κ(S₋)` over the interior vertices.
pub fn interior_curvature(s: &SubgraphSelection) -> Result<Q> {
    curvature_sum(s.window(), &s.interior_vertices()?)
}

/// Contribution of one vertex visit.
#[derive(Clone, Debug, PartialEq)]
pub struct VisitTurn {
    pub cycle: usize,
    pub prev: V,
    pub at: V,
    pub next: V,
    pub turn: Q,
    /// Faces swept on the right (`s_k`) and on the left (`t_k`).
    pub right_faces: usize,
    pub left_faces: usize,
    /// Extra edges at this visit; `-1` when a single edge leaves on the right.
    pub extra_edges: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TurnReport {
    pub visits: Vec<VisitTurn>,
    pub cycle_totals: Vec<Q>,
    pub total: Q,
}

impl TurnReport {
    pub fn extra_total(&self) -> i64 {
        self.visits.iter().map(|v| v.extra_edges).sum()
    }
}

struct Sweep {
    a: usize,
    right: usize,
    left: usize,
}

fn sweep(w: &TriangulationWindow, visit: &Visit) -> Result<Sweep> {
    let v = visit.at;
    let deg = w.degree(v)?;
    let a = w.slot(w.twin(visit.h_in));
    let b = w.slot(visit.h_out);
    let right = match (b + deg - a) % deg {
        0 => deg,
        r => r,
    };
    Ok(Sweep { a, right, left: deg - right })
}

fn face_excess(w: &TriangulationWindow, h: usize) -> Result<Q> {
    let f = w.face_left(h).ok_or(Error::UnresolvedFace(h))?;
    Ok(q(1, 2) - q(1, w.face_degree(f) as i64))
}

/// Outer left turn `τ_o` of every visit of a walk.
pub fn outer_left_turn(w: &TriangulationWindow, walk: &BoundaryWalk) -> Result<TurnReport> {
    let mut visits = Vec::new();
    let mut cycle_totals = Vec::new();
    let mut total = Q::zero();
    for (ci, cyc) in walk.cycles.iter().enumerate() {
        let mut ct = Q::zero();
        if cyc.visits.is_empty() {
            let v = cyc.vertices[0];
            let deg = w.degree(v)?;
            let turn = qi(1) - vertex_curvature(w, v)?;
            ct += &turn;
            visits.push(VisitTurn {
                cycle: ci,
                prev: v,
                at: v,
                next: v,
                turn,
                right_faces: deg,
                left_faces: 0,
                extra_edges: deg as i64,
            });
        }
        for visit in &cyc.visits {
            let s = sweep(w, visit)?;
            let mut turn = -q(1, 2);
            for j in 0..s.right {
                turn += face_excess(w, w.half_edge_at(visit.at, (s.a + j) as isize))?;
            }
            ct += &turn;
            visits.push(VisitTurn {
                cycle: ci,
                prev: w.tail(visit.h_in),
                at: visit.at,
                next: w.head(visit.h_out),
                turn,
                right_faces: s.right,
                left_faces: s.left,
                extra_edges: s.right as i64 - 3,
            });
        }
        total += &ct;
        cycle_totals.push(ct);
    }
    Ok(TurnReport { visits, cycle_totals, total })
}

/// Inner left turn `τ_i`. For an inner walk, the faces on the left of a visit are the
/// run of component faces met turning clockwise from the incoming edge; on a simple
/// cycle this is the whole left sector.
pub fn inner_left_turn(w: &TriangulationWindow, walk: &BoundaryWalk) -> Result<TurnReport> {
    let mut visits = Vec::new();
    let mut cycle_totals = Vec::new();
    let mut total = Q::zero();
    for (ci, cyc) in walk.cycles.iter().enumerate() {
        if cyc.visits.len() < 3 {
            return Err(Error::DegenerateVisit(cyc.vertices[0]));
        }
        let mut ct = Q::zero();
        for visit in &cyc.visits {
            let prev = w.tail(visit.h_in);
            let next = w.head(visit.h_out);
            if prev == next {
                return Err(Error::DegenerateVisit(visit.at));
            }
            let s = sweep(w, visit)?;
            let left = visit.left as usize;
            let mut turn = q(1, 2);
            for j in 1..=left {
                turn -= face_excess(w, w.half_edge_at(visit.at, s.a as isize - j as isize))?;
            }
            ct += &turn;
            visits.push(VisitTurn {
                cycle: ci,
                prev,
                at: visit.at,
                next,
                turn,
                right_faces: s.right,
                left_faces: left,
                extra_edges: s.right as i64 - 3,
            });
        }
        total += &ct;
        cycle_totals.push(ct);
    }
    Ok(TurnReport { visits, cycle_totals, total })
}

/// Residuals of the two Gauss-Bonnet identities.
#[derive(Clone, Debug, PartialEq)]
pub struct GbfReport {
    pub kappa: Q,
    pub turn: Q,
    pub chi: i64,
    pub residual: Q,
}

/// `κ(S) + τ_o(bS) - χ(S)`.
pub fn verify_gbf1(s: &SubgraphSelection) -> Result<GbfReport> {
    s.require_complete()?;
    if !s.is_connected() {
        return Err(Error::Disconnected);
    }
    let w = s.window();
    let kappa = subgraph_curvature(s)?;
    let turn = outer_left_turn(w, &s.boundary_walk()?)?.total;
    let chi = s.euler_characteristic();
    let residual = &kappa + &turn - qi(chi);
    Ok(GbfReport { kappa, turn, chi, residual })
}

/// `κ(S₋) + τ_i(b_iS) - χ(S₋)`.
pub fn verify_gbf2(s: &SubgraphSelection) -> Result<GbfReport> {
    s.require_complete()?;
    let w = s.window();
    let kappa = interior_curvature(s)?;
    let turn = inner_left_turn(w, &s.inner_boundary_walk()?)?.total;
    let chi = s.interior_euler_characteristic()?;
    let residual = &kappa + &turn - qi(chi);
    Ok(GbfReport { kappa, turn, chi, residual })
}

/// Degree-excess bookkeeping on a main body: `k_n = 6m - 12 + extra`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtraEdgeReport {
    pub m: usize,
    pub extra_total: i64,
    pub k_n: i64,
    pub residual: i64,
}

pub fn extra_edge_identity(a_n: &SubgraphSelection) -> Result<ExtraEdgeReport> {
    a_n.require_complete()?;
    let w = a_n.window();
    let walk = a_n.boundary_walk()?;
    let report = outer_left_turn(w, &walk)?;
    let m = walk.cycles.len();
    let extra_total = report.extra_total();
    let k_n = a_n.degree_sum()? as i64 - 6 * a_n.vertex_count() as i64;
    let residual = k_n - (6 * m as i64 - 12 + extra_total);
    Ok(ExtraEdgeReport { m, extra_total, k_n, residual })
}
