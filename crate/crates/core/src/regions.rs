//! Regions derived from balls and subgraphs: the main body `A_n` of a ball, its boundary
//! observations, the hole-filled graph `W` and its interior graph `Z`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::selection::{BoundaryWalk, SubgraphSelection};
use crate::window::{TriangulationWindow, V};

/// `A_n`: the ball `B_n` with every edge outside the closure of the interior component
/// containing `v₀` removed.
#[derive(Clone, Debug)]
pub struct MainBody<'w> {
    pub ball: SubgraphSelection<'w>,
    pub body: SubgraphSelection<'w>,
    pub walk: BoundaryWalk,
    pub n: u32,
}

impl MainBody<'_> {
    /// Number of complement components, `m`.
    pub fn m(&self) -> usize {
        self.walk.cycles.len()
    }
}

/// Builds `A_n` without checking its boundary cycles.
pub fn main_body_unchecked(w: &TriangulationWindow, v0: V, n: u32) -> Result<MainBody<'_>> {
    let ball = SubgraphSelection::ball(w, v0, n)?;
    ball.require_complete()?;
    let body = if n == 0 {
        ball.clone()
    } else {
        let (label, _) = ball.interior_components();
        let h = w.half_edges(v0).next().ok_or(Error::EmptySelection)?;
        let f0 = w.face_left(h).ok_or(Error::UnresolvedFace(h))?;
        let c0 = label[f0 as usize];
        let mut edges = BTreeSet::new();
        for &f in ball.faces() {
            if label[f as usize] == c0 {
                for g in w.face_half_edges(f) {
                    let (a, b) = (w.tail(g), w.head(g));
                    edges.insert((a.min(b), a.max(b)));
                }
            }
        }
        let mut s = SubgraphSelection::with_edges(w, ball.vertices().iter().copied(), edges)?;
        s.set_center(v0, n);
        s
    };
    let walk = body.boundary_walk()?;
    Ok(MainBody { ball, body, walk, n })
}

/// `A_n`, rejecting bodies whose boundary cycles are not simple or meet along more than
/// one vertex.
pub fn main_body(w: &TriangulationWindow, v0: V, n: u32) -> Result<MainBody<'_>> {
    let mb = main_body_unchecked(w, v0, n)?;
    if n > 0 {
        for c in &mb.walk.cycles {
            if let Some(v) = c.repeated_vertex() {
                return Err(Error::NotSimple(v));
            }
        }
        let sets: Vec<BTreeSet<V>> =
            mb.walk.cycles.iter().map(|c| c.vertices.iter().copied().collect()).collect();
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                if let Some(&v) = sets[i].intersection(&sets[j]).nth(1) {
                    return Err(Error::NotSimple(v));
                }
            }
        }
    }
    Ok(mb)
}

/// Outcome of the boundary observations on `B_n` and `A_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservationReport {
    pub n: u32,
    pub m: usize,
    /// Every visit of `bB_n` and `bA_n` has an edge leaving `B_n` on its right.
    pub o1: bool,
    /// Boundary vertices lie on `S_n`.
    pub o2: bool,
    /// Boundary cycles of `A_n` are simple.
    pub o3: bool,
    /// Two boundary cycles share at most one vertex.
    pub o4: bool,
    /// Removing any set of boundary vertices leaves `A_n` connected.
    pub o5: bool,
    /// A connected union of cycles meets any other cycle in at most one vertex.
    pub o6: bool,
    /// `|S_n| ≥ |bA_n| - (m - 1)`.
    pub sphere_bound: bool,
    /// `V(bA_n) = V(bB_n)`.
    pub same_boundary_vertices: bool,
}

impl ObservationReport {
    pub fn all(&self) -> bool {
        self.o1
            && self.o2
            && self.o3
            && self.o4
            && self.o5
            && self.o6
            && self.sphere_bound
            && self.same_boundary_vertices
    }
}

fn leaves_on_right(w: &TriangulationWindow, ball: &SubgraphSelection, walk: &BoundaryWalk) -> bool {
    walk.cycles.iter().all(|c| {
        c.visits.iter().all(|vis| {
            let v = vis.at;
            let d = w.rotation(v).len();
            let a = w.slot(w.twin(vis.h_in));
            let b = w.slot(vis.h_out);
            let right = match (b + d - a) % d {
                0 => d,
                r => r,
            };
            (1..right).any(|j| !ball.contains(w.head(w.half_edge_at(v, (a + j) as isize))))
        })
    })
}

/// Whether `A_n` minus the boundary vertices is connected and every boundary vertex has
/// a neighbor in `A_n` off the boundary; this is equivalent to Observation O5.
pub fn removal_connected(body: &SubgraphSelection, boundary: &BTreeSet<V>) -> bool {
    let w = body.window();
    let inner: Vec<V> = body.vertices().iter().copied().filter(|v| !boundary.contains(v)).collect();
    if inner.is_empty() {
        return body.vertex_count() <= 1;
    }
    let inside = |v: V| body.contains(v) && !boundary.contains(&v);
    let mut seen = BTreeSet::from([inner[0]]);
    let mut stack = vec![inner[0]];
    while let Some(v) = stack.pop() {
        for &u in w.rotation(v) {
            if inside(u) && body.contains_edge(v, u) && seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == inner.len()
        && boundary.iter().all(|&b| {
            w.rotation(b).iter().any(|&u| inside(u) && body.contains_edge(b, u))
        })
}

/// Connectivity of `A_n` after removing `k`, by search.
pub fn connected_without(body: &SubgraphSelection, k: &BTreeSet<V>) -> bool {
    let w = body.window();
    let rest: Vec<V> = body.vertices().iter().copied().filter(|v| !k.contains(v)).collect();
    let Some(&start) = rest.first() else { return true };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &u in w.rotation(v) {
            if body.contains(u) && !k.contains(&u) && body.contains_edge(v, u) && seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == rest.len()
}

/// Largest number of cycles for which every subset is examined in Observation O6.
pub const O6_SUBSET_LIMIT: usize = 12;

fn o6_holds(sets: &[BTreeSet<V>]) -> bool {
    let m = sets.len();
    if m > O6_SUBSET_LIMIT {
        // fall back to growing connected unions greedily from every cycle
        return (0..m).all(|s| {
            let mut union = sets[s].clone();
            let mut members = BTreeSet::from([s]);
            loop {
                let mut grew = false;
                for j in 0..m {
                    if members.contains(&j) {
                        continue;
                    }
                    let common = union.intersection(&sets[j]).count();
                    if common > 1 {
                        return false;
                    }
                    if common == 1 {
                        union.extend(sets[j].iter().copied());
                        members.insert(j);
                        grew = true;
                    }
                }
                if !grew {
                    return true;
                }
            }
        });
    }
    for mask in 1u32..(1 << m) {
        let members: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        // connected: union graph of cycles linked by shared vertices
        let mut reach = BTreeSet::from([members[0]]);
        let mut stack = vec![members[0]];
        while let Some(i) = stack.pop() {
            for &j in &members {
                if !reach.contains(&j) && sets[i].intersection(&sets[j]).next().is_some() {
                    reach.insert(j);
                    stack.push(j);
                }
            }
        }
        if reach.len() != members.len() {
            continue;
        }
        let union: BTreeSet<V> = members.iter().flat_map(|&i| sets[i].iter().copied()).collect();
        for j in 0..m {
            if mask & (1 << j) == 0 && union.intersection(&sets[j]).count() > 1 {
                return false;
            }
        }
    }
    true
}

pub fn check_observations(w: &TriangulationWindow, v0: V, n: u32) -> Result<ObservationReport> {
    let mb = main_body_unchecked(w, v0, n)?;
    let ball_walk = mb.ball.boundary_walk()?;
    let dist = w.bfs(v0, Some(n + 1));
    let o1 = n == 0
        || (leaves_on_right(w, &mb.ball, &ball_walk) && leaves_on_right(w, &mb.ball, &mb.walk));
    let bset = mb.walk.vertex_set();
    let o2 = bset.iter().all(|&v| dist[v as usize] == n);
    let o3 = mb.walk.cycles.iter().all(|c| c.is_simple());
    let sets: Vec<BTreeSet<V>> =
        mb.walk.cycles.iter().map(|c| c.vertices.iter().copied().collect()).collect();
    let mut o4 = true;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i].intersection(&sets[j]).count() > 1 {
                o4 = false;
            }
        }
    }
    let o5 = n == 0 || removal_connected(&mb.body, &bset);
    let o6 = o6_holds(&sets);
    let s_n = dist.iter().filter(|&&d| d == n).count() as i64;
    let m = mb.m() as i64;
    let sphere_bound = s_n >= mb.walk.len() as i64 - (m - 1);
    let same_boundary_vertices = bset == ball_walk.vertex_set();
    Ok(ObservationReport {
        n,
        m: mb.m(),
        o1,
        o2,
        o3,
        o4,
        o5,
        o6,
        sphere_bound,
        same_boundary_vertices,
    })
}

/// `W`: the selection together with every vertex of its bounded complement components,
/// induced. Fails with `NotSimple` when `bW` is not a single simple cycle.
pub fn fill_holes<'w>(t: &SubgraphSelection<'w>) -> Result<SubgraphSelection<'w>> {
    t.require_complete()?;
    let w = t.window();
    let comp = t.complement();
    let mut verts: Vec<V> = t.vertices().to_vec();
    verts.extend(comp.hole_vertices());
    let filled = SubgraphSelection::induced(w, verts)?;
    let walk = filled.boundary_walk()?;
    if walk.cycles.len() != 1 {
        let v = walk.cycles.get(1).map(|c| c.vertices[0]).unwrap_or(t.vertices()[0]);
        return Err(Error::NotSimple(v));
    }
    if let Some(v) = walk.cycles[0].repeated_vertex() {
        return Err(Error::NotSimple(v));
    }
    Ok(filled)
}

/// `Z`: the subgraph of `W` induced by the vertices off `bW`.
pub fn interior_graph<'w>(filled: &SubgraphSelection<'w>) -> Result<SubgraphSelection<'w>> {
    let walk = filled.boundary_walk()?;
    let b = walk.vertex_set();
    SubgraphSelection::induced(
        filled.window(),
        filled.vertices().iter().copied().filter(|v| !b.contains(v)),
    )
}

/// `T = induced(V(S) ∪ dS)`.
pub fn closed_neighborhood<'w>(s: &SubgraphSelection<'w>) -> Result<SubgraphSelection<'w>> {
    let mut verts = s.vertices().to_vec();
    verts.extend(s.vertex_boundary()?);
    SubgraphSelection::induced(s.window(), verts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{build_window, hexagonal, layered, LayerSpec};

    #[test]
    fn hexagonal_bodies() {
        let w = build_window(&hexagonal(), 6).unwrap();
        for n in 0..=5 {
            let mb = main_body(&w, 0, n).unwrap();
            assert_eq!(mb.body.edge_count(), mb.ball.edge_count());
            let rep = check_observations(&w, 0, n).unwrap();
            assert!(rep.all(), "{rep:?}");
        }
    }

    #[test]
    fn layered_bodies() {
        let w = build_window(&layered(LayerSpec::finite(3, &[3, 3], &[1, 2])), 6).unwrap();
        for n in 1..=5 {
            assert!(check_observations(&w, 0, n).unwrap().all());
        }
    }

    #[test]
    fn fill_and_interior() {
        let w = build_window(&hexagonal(), 8).unwrap();
        let s = SubgraphSelection::ball(&w, 0, 2).unwrap();
        let t = closed_neighborhood(&s).unwrap();
        let filled = fill_holes(&t).unwrap();
        let z = interior_graph(&filled).unwrap();
        assert_eq!(z.vertex_count(), 19);
    }
}
