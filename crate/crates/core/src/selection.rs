//! Vertex/edge selections of a window, their face sets, boundaries and boundary walks.

use std::collections::{BTreeSet, VecDeque};

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::window::{FaceId, TriangulationWindow, V, NONE};

#[derive(Clone, Debug)]
pub struct SubgraphSelection<'w> {
    w: &'w TriangulationWindow,
    vin: Vec<bool>,
    verts: Vec<V>,
    ein: Vec<bool>,
    nedges: usize,
    faces: Vec<FaceId>,
    fin: Vec<bool>,
    induced: bool,
    center: Option<(V, u32)>,
}

/// One vertex visit of a boundary walk: `prev -> at -> next`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Visit {
    pub at: V,
    pub h_in: usize,
    pub h_out: usize,
    /// Number of corners attributed to the left of this visit.
    pub left: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkCycle {
    /// Cyclic vertex sequence; a single entry with no visits is the length-0 walk `[v]`.
    pub vertices: Vec<V>,
    pub visits: Vec<Visit>,
    /// Complement component (outer walks) or interior component (inner walks).
    pub component: u32,
}

impl WalkCycle {
    pub fn len(&self) -> usize {
        self.visits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.visits.is_empty()
    }

    pub fn is_simple(&self) -> bool {
        let set: BTreeSet<V> = self.vertices.iter().copied().collect();
        set.len() == self.vertices.len()
    }

    /// First vertex met twice, if any.
    pub fn repeated_vertex(&self) -> Option<V> {
        let mut seen = BTreeSet::new();
        self.vertices.iter().copied().find(|&v| !seen.insert(v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkKind {
    Outer,
    Inner,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryWalk {
    pub kind: WalkKind,
    pub cycles: Vec<WalkCycle>,
}

impl BoundaryWalk {
    /// Total number of edges traversed, `|bS|`.
    pub fn len(&self) -> usize {
        self.cycles.iter().map(|c| c.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn vertex_set(&self) -> BTreeSet<V> {
        self.cycles.iter().flat_map(|c| c.vertices.iter().copied()).collect()
    }
}

/// Components of the complement of `D(S)` inside the window.
#[derive(Clone, Debug)]
pub struct Complement {
    vertex_comp: Vec<u32>,
    face_comp: Vec<u32>,
    /// Number of components, counting the unbounded one.
    pub count: usize,
    pub unbounded: u32,
}

impl Complement {
    pub fn of_vertex(&self, v: V) -> Option<u32> {
        let c = self.vertex_comp[v as usize];
        (c != NONE).then_some(c)
    }

    pub fn of_face(&self, f: FaceId) -> Option<u32> {
        let c = self.face_comp[f as usize];
        (c != NONE).then_some(c)
    }

    pub fn bounded_count(&self) -> usize {
        self.count - 1
    }

    /// Vertices lying in bounded components.
    pub fn hole_vertices(&self) -> Vec<V> {
        (0..self.vertex_comp.len())
            .filter(|&v| {
                let c = self.vertex_comp[v];
                c != NONE && c != self.unbounded
            })
            .map(|v| v as V)
            .collect()
    }
}

impl<'w> SubgraphSelection<'w> {
    /// Induced selection on the given vertex set.
    pub fn induced(w: &'w TriangulationWindow, verts: impl IntoIterator<Item = V>) -> Result<Self> {
        let mut vin = vec![false; w.vertex_count()];
        let mut list = Vec::new();
        for v in verts {
            w.check_vertex(v)?;
            if !vin[v as usize] {
                vin[v as usize] = true;
                list.push(v);
            }
        }
        let mut ein = vec![false; w.half_edge_count()];
        for &v in &list {
            for h in w.half_edges(v) {
                if vin[w.head(h) as usize] {
                    ein[h] = true;
                }
            }
        }
        Ok(Self::finish(w, vin, list, ein, true))
    }

    /// Selection with an explicit edge set; every edge needs both endpoints in `verts`.
    pub fn with_edges(
        w: &'w TriangulationWindow,
        verts: impl IntoIterator<Item = V>,
        edges: impl IntoIterator<Item = (V, V)>,
    ) -> Result<Self> {
        let mut vin = vec![false; w.vertex_count()];
        let mut list = Vec::new();
        for v in verts {
            w.check_vertex(v)?;
            if !vin[v as usize] {
                vin[v as usize] = true;
                list.push(v);
            }
        }
        let mut ein = vec![false; w.half_edge_count()];
        for (a, b) in edges {
            w.check_vertex(a)?;
            w.check_vertex(b)?;
            if !vin[a as usize] || !vin[b as usize] {
                return Err(Error::InvalidRotation(format!("edge {a}-{b} leaves the vertex set")));
            }
            let h = w
                .find_half_edge(a, b)
                .ok_or_else(|| Error::InvalidRotation(format!("{a}-{b} is not an edge")))?;
            ein[h] = true;
            ein[w.twin(h)] = true;
        }
        let sel = Self::finish(w, vin, list, ein, false);
        let induced = sel.verts.iter().all(|&v| {
            w.half_edges(v).all(|h| !sel.vin[w.head(h) as usize] || sel.ein[h])
        });
        Ok(SubgraphSelection { induced, ..sel })
    }

    fn finish(
        w: &'w TriangulationWindow,
        vin: Vec<bool>,
        mut verts: Vec<V>,
        ein: Vec<bool>,
        induced: bool,
    ) -> Self {
        verts.sort_unstable();
        let nedges = verts
            .iter()
            .map(|&v| w.half_edges(v).filter(|&h| ein[h]).count())
            .sum::<usize>()
            / 2;
        let mut fin = vec![false; w.faces().len()];
        let mut faces = Vec::new();
        for &v in &verts {
            for h in w.half_edges(v) {
                if let Some(f) = w.face_left(h) {
                    if !fin[f as usize]
                        && !w.is_boundary_face(f)
                        && w.face_half_edges(f).iter().all(|&g| ein[g])
                    {
                        fin[f as usize] = true;
                        faces.push(f);
                    }
                }
            }
        }
        faces.sort_unstable();
        SubgraphSelection { w, vin, verts, ein, nedges, faces, fin, induced, center: None }
    }

    /// Combinatorial ball `B_n(v0)`.
    pub fn ball(w: &'w TriangulationWindow, v0: V, n: u32) -> Result<Self> {
        w.check_vertex(v0)?;
        if !w.is_fragment() && w.dist(v0) + n + 1 > w.complete_radius() {
            return Err(Error::WindowTooSmall {
                needed: w.dist(v0) + n + 1,
                have: w.complete_radius(),
            });
        }
        let verts: Vec<V> = if v0 == w.root() {
            (0..w.ball_len(n) as V).collect()
        } else {
            let d = w.bfs(v0, Some(n));
            (0..w.vertex_count() as V).filter(|&v| d[v as usize] <= n).collect()
        };
        let mut s = Self::induced(w, verts)?;
        s.center = Some((v0, n));
        Ok(s)
    }

    pub fn window(&self) -> &'w TriangulationWindow {
        self.w
    }

    /// Records that this selection is derived from the ball `B_n(v0)`.
    pub fn set_center(&mut self, v0: V, n: u32) {
        self.center = Some((v0, n));
    }

    pub fn center(&self) -> Option<(V, u32)> {
        self.center
    }

    pub fn is_induced(&self) -> bool {
        self.induced
    }

    pub fn vertices(&self) -> &[V] {
        &self.verts
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.nedges
    }

    pub fn faces(&self) -> &[FaceId] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn contains(&self, v: V) -> bool {
        (v as usize) < self.vin.len() && self.vin[v as usize]
    }

    pub fn contains_half_edge(&self, h: usize) -> bool {
        self.ein[h]
    }

    pub fn contains_edge(&self, a: V, b: V) -> bool {
        self.w.find_half_edge(a, b).is_some_and(|h| self.ein[h])
    }

    pub fn contains_face(&self, f: FaceId) -> bool {
        self.fin[f as usize]
    }

    fn contains_face_opt(&self, f: Option<FaceId>) -> bool {
        f.is_some_and(|f| self.fin[f as usize])
    }

    /// Undirected edges of `E(S)` as `(u, v)` with `u < v`.
    pub fn edges(&self) -> Vec<(V, V)> {
        let mut out = Vec::with_capacity(self.nedges);
        for &v in &self.verts {
            for h in self.w.half_edges(v) {
                let u = self.w.head(h);
                if self.ein[h] && v < u {
                    out.push((v, u));
                }
            }
        }
        out
    }

    pub fn require_complete(&self) -> Result<()> {
        if self.verts.is_empty() {
            return Err(Error::EmptySelection);
        }
        match self.verts.iter().find(|&&v| !self.w.is_complete(v)) {
            Some(&v) => Err(Error::Frontier(v)),
            None => Ok(()),
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.verts.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vin.len()];
        let mut q = VecDeque::from([self.verts[0]]);
        seen[self.verts[0] as usize] = true;
        let mut count = 1;
        while let Some(v) = q.pop_front() {
            for h in self.w.half_edges(v) {
                let u = self.w.head(h);
                if self.ein[h] && !seen[u as usize] {
                    seen[u as usize] = true;
                    count += 1;
                    q.push_back(u);
                }
            }
        }
        count == self.verts.len()
    }

    /// Connected components of the graph `(V(S), E(S))`.
    pub fn components(&self) -> Vec<Vec<V>> {
        let mut seen = vec![false; self.vin.len()];
        let mut out = Vec::new();
        for &s in &self.verts {
            if seen[s as usize] {
                continue;
            }
            seen[s as usize] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for h in self.w.half_edges(v) {
                    let u = self.w.head(h);
                    if self.ein[h] && !seen[u as usize] {
                        seen[u as usize] = true;
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// `|V(S)| - |E(S)| + |F(S)|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.verts.len() as i64 - self.nedges as i64 + self.faces.len() as i64
    }

    /// Sum of degrees over `V(S)`.
    pub fn degree_sum(&self) -> Result<u64> {
        self.require_complete()?;
        Ok(self.verts.iter().map(|&v| self.w.rotation(v).len() as u64).sum())
    }

    /// `dS`: vertices outside `S` with a neighbor in `S`.
    pub fn vertex_boundary(&self) -> Result<Vec<V>> {
        self.require_complete()?;
        let mut out = BTreeSet::new();
        for &v in &self.verts {
            for &u in self.w.rotation(v) {
                if !self.vin[u as usize] {
                    out.insert(u);
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// `d₀S`: vertices of `S` with a neighbor outside `S`.
    pub fn inner_vertex_boundary(&self) -> Result<Vec<V>> {
        self.require_complete()?;
        Ok(self
            .verts
            .iter()
            .copied()
            .filter(|&v| self.w.rotation(v).iter().any(|&u| !self.vin[u as usize]))
            .collect())
    }

    /// `∂S`: edges joining `S` to its complement, as `(inside, outside)`.
    pub fn edge_boundary(&self) -> Result<Vec<(V, V)>> {
        self.require_complete()?;
        let mut out = Vec::new();
        for &v in &self.verts {
            for &u in self.w.rotation(v) {
                if !self.vin[u as usize] {
                    out.push((v, u));
                }
            }
        }
        Ok(out)
    }

    /// Components of the complement of `D(S)`. Everything connected to the frontier,
    /// to an unresolved face or to the outer face of a fragment counts as unbounded.
    pub fn complement(&self) -> Complement {
        let w = self.w;
        let n = w.vertex_count();
        let nf = w.faces().len();
        let out = n + nf;
        let mut uf = UnionFind::<usize>::new(n + nf + 1);
        for v in 0..n as V {
            if !self.vin[v as usize] && !w.is_complete(v) {
                uf.union(v as usize, out);
            }
        }
        for f in 0..nf as FaceId {
            if self.fin[f as usize] {
                continue;
            }
            if w.is_boundary_face(f) {
                uf.union(n + f as usize, out);
            }
            for h in w.face_half_edges(f) {
                let t = w.tail(h);
                if !self.vin[t as usize] {
                    uf.union(n + f as usize, t as usize);
                }
            }
        }
        for (a, b, h) in w.edges() {
            if self.ein[h] {
                continue;
            }
            let sides = [w.face_left(h), w.face_right(h)];
            let mut anchor = None;
            for s in sides {
                let e = match s {
                    Some(f) => n + f as usize,
                    None => out,
                };
                match anchor {
                    None => anchor = Some(e),
                    Some(x) => {
                        uf.union(x, e);
                    }
                }
            }
            let x = anchor.unwrap();
            for v in [a, b] {
                if !self.vin[v as usize] {
                    uf.union(x, v as usize);
                }
            }
        }
        let mut label = vec![NONE; n + nf + 1];
        let mut count = 0u32;
        let root_out = uf.find(out);
        label[root_out] = 0;
        count += 1;
        let mut vertex_comp = vec![NONE; n];
        let mut face_comp = vec![NONE; nf];
        let mut assign = |e: usize, label: &mut Vec<u32>| -> u32 {
            let r = uf.find(e);
            if label[r] == NONE {
                label[r] = count;
                count += 1;
            }
            label[r]
        };
        for v in 0..n {
            if !self.vin[v] {
                vertex_comp[v] = assign(v, &mut label);
            }
        }
        for f in 0..nf {
            if !self.fin[f] {
                face_comp[f] = assign(n + f, &mut label);
            }
        }
        Complement { vertex_comp, face_comp, count: count as usize, unbounded: 0 }
    }

    /// Positively oriented boundary walk `bS` around every complement component.
    pub fn boundary_walk(&self) -> Result<BoundaryWalk> {
        self.require_complete()?;
        let w = self.w;
        let comp = self.complement();
        let is_boundary = |h: usize| self.ein[h] && !self.contains_face_opt(w.face_right(h));
        let mut used = vec![false; w.half_edge_count()];
        let mut cycles = Vec::new();
        for &v in &self.verts {
            let mut any_edge = false;
            for h0 in w.half_edges(v) {
                if !self.ein[h0] {
                    continue;
                }
                any_edge = true;
                if used[h0] || !is_boundary(h0) {
                    continue;
                }
                let mut hs = Vec::new();
                let mut h = h0;
                loop {
                    used[h] = true;
                    hs.push(h);
                    h = self.outer_successor(h);
                    if h == h0 {
                        break;
                    }
                }
                let component = w
                    .face_right(h0)
                    .and_then(|f| comp.of_face(f))
                    .unwrap_or(comp.unbounded);
                cycles.push(cycle_from_half_edges(w, &hs, component, |i, o| left_sector(w, i, o)));
            }
            if !any_edge {
                let component = w
                    .half_edges(v)
                    .next()
                    .and_then(|h| w.face_left(h))
                    .and_then(|f| comp.of_face(f))
                    .unwrap_or(comp.unbounded);
                cycles.push(WalkCycle { vertices: vec![v], visits: Vec::new(), component });
            }
        }
        Ok(BoundaryWalk { kind: WalkKind::Outer, cycles })
    }

    /// First edge of `S` strictly after the reverse of `h` in counterclockwise order at its head.
    fn outer_successor(&self, h: usize) -> usize {
        let w = self.w;
        let v = w.head(h);
        let a = w.slot(w.twin(h)) as isize;
        let d = w.rotation(v).len() as isize;
        (1..=d)
            .map(|j| w.half_edge_at(v, a + j))
            .find(|&g| self.ein[g])
            .expect("the reverse edge itself is in S")
    }

    /// Union-find labels of the interior components of `D(S)`, indexed by face id.
    pub fn interior_components(&self) -> (Vec<u32>, usize) {
        let w = self.w;
        let mut uf = UnionFind::<usize>::new(w.faces().len());
        for &f in &self.faces {
            for h in w.face_half_edges(f) {
                if let Some(g) = w.face_right(h) {
                    if self.fin[g as usize] {
                        uf.union(f as usize, g as usize);
                    }
                }
            }
        }
        let mut label = vec![NONE; w.faces().len()];
        let mut out = vec![NONE; w.faces().len()];
        let mut count = 0u32;
        for &f in &self.faces {
            let r = uf.find(f as usize);
            if label[r] == NONE {
                label[r] = count;
                count += 1;
            }
            out[f as usize] = label[r];
        }
        (out, count as usize)
    }

    /// Inner boundary walk `b_iS`: the boundary of each interior component of `D(S₀)`,
    /// where `S₀` keeps only the vertices and edges incident to `F(S)`.
    pub fn inner_boundary_walk(&self) -> Result<BoundaryWalk> {
        self.require_complete()?;
        let w = self.w;
        let (label, _) = self.interior_components();
        let comp_of = |f: Option<FaceId>| -> u32 {
            match f {
                Some(f) if self.fin[f as usize] => label[f as usize],
                _ => NONE,
            }
        };
        let mut used = vec![false; w.half_edge_count()];
        let mut cycles = Vec::new();
        for &v in &self.verts {
            for h0 in w.half_edges(v) {
                if used[h0] || !self.ein[h0] {
                    continue;
                }
                let c = comp_of(w.face_left(h0));
                if c == NONE || comp_of(w.face_right(h0)) != NONE {
                    continue;
                }
                let mut hs = Vec::new();
                let mut h = h0;
                loop {
                    used[h] = true;
                    hs.push(h);
                    let u = w.head(h);
                    let a = w.slot(w.twin(h)) as isize;
                    let d = w.rotation(u).len() as isize;
                    h = (1..=d)
                        .map(|j| w.half_edge_at(u, a + j))
                        .find(|&g| comp_of(w.face_left(g)) == c)
                        .expect("incoming edge bounds the component");
                    if h == h0 {
                        break;
                    }
                }
                // at a pinch only the run of component corners next to the incoming edge is
                // on the left of this visit; the rest belongs to the other visits
                let run = |h_in: usize, _h_out: usize| -> u32 {
                    let u = w.head(h_in);
                    let a = w.slot(w.twin(h_in)) as isize;
                    let mut n = 0;
                    while comp_of(w.face_left(w.half_edge_at(u, a - 1 - n as isize))) == c {
                        n += 1;
                    }
                    n
                };
                cycles.push(cycle_from_half_edges(w, &hs, c, run));
            }
        }
        Ok(BoundaryWalk { kind: WalkKind::Inner, cycles })
    }

    /// Interior vertices `S₋ = V(S) \ V(bS)`: vertices all of whose corners lie in `F(S)`.
    pub fn interior_vertices(&self) -> Result<Vec<V>> {
        self.require_complete()?;
        Ok(self
            .verts
            .iter()
            .copied()
            .filter(|&v| self.w.half_edges(v).all(|h| self.contains_face_opt(self.w.face_left(h))))
            .collect())
    }

    /// Euler characteristic of the open region `D(S)°`, counted by open cells.
    pub fn interior_euler_characteristic(&self) -> Result<i64> {
        let verts = self.interior_vertices()?.len() as i64;
        let mut inner_edges = 0i64;
        for &f in &self.faces {
            for h in self.w.face_half_edges(f) {
                if self.contains_face_opt(self.w.face_right(h)) {
                    inner_edges += 1;
                }
            }
        }
        Ok(verts - inner_edges / 2 + self.faces.len() as i64)
    }
}

fn cycle_from_half_edges(
    w: &TriangulationWindow,
    hs: &[usize],
    component: u32,
    left: impl Fn(usize, usize) -> u32,
) -> WalkCycle {
    let k = hs.len();
    let vertices: Vec<V> = hs.iter().map(|&h| w.tail(h)).collect();
    let visits = (0..k)
        .map(|i| {
            let (h_in, h_out) = (hs[(i + k - 1) % k], hs[i]);
            Visit { at: vertices[i], h_in, h_out, left: left(h_in, h_out) }
        })
        .collect();
    WalkCycle { vertices, visits, component }
}

/// Corners strictly inside the left sector of `h_in -> h_out`.
fn left_sector(w: &TriangulationWindow, h_in: usize, h_out: usize) -> u32 {
    let v = w.head(h_in);
    let d = w.rotation(v).len();
    let a = w.slot(w.twin(h_in));
    let b = w.slot(h_out);
    ((a + d - b) % d) as u32
}

/// Sphere `S_n(v0)` as a sorted vertex list.
pub fn sphere(w: &TriangulationWindow, v0: V, n: u32) -> Result<Vec<V>> {
    w.check_vertex(v0)?;
    if !w.is_fragment() && w.dist(v0) + n + 1 > w.complete_radius() {
        return Err(Error::WindowTooSmall { needed: w.dist(v0) + n + 1, have: w.complete_radius() });
    }
    if v0 == w.root() {
        return Ok(w.sphere_ids(n).map(|v| v as V).collect());
    }
    let d = w.bfs(v0, Some(n));
    Ok((0..w.vertex_count() as V).filter(|&v| d[v as usize] == n).collect())
}
