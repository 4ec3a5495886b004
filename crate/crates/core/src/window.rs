//! Finite windows of infinite planar triangulations, stored as rotation systems.
//!
//! Vertex ids are dense and assigned in breadth-first order from the root, so every
//! combinatorial sphere is a contiguous id range. Vertices at distance `complete_radius`
//! from the root form the frontier: their rotation lists only contain neighbors inside
//! the window and their degree must not be read.

use std::collections::VecDeque;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type V = u32;
pub type FaceId = u32;
pub(crate) const NONE: u32 = u32::MAX;

/// A traced face: the orbit of `next` starting at half-edge `start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub start: usize,
    pub degree: u32,
}

#[derive(Clone, Debug)]
pub struct TriangulationWindow {
    off: Vec<usize>,
    nbr: Vec<V>,
    tail: Vec<V>,
    twin: Vec<usize>,
    dist: Vec<u32>,
    sphere_off: Vec<usize>,
    complete_radius: u32,
    face_of: Vec<FaceId>,
    faces: Vec<Face>,
    triangulation: bool,
    boundary_faces: Vec<FaceId>,
    fragment: bool,
}

impl TriangulationWindow {
    /// Builds a window from per-vertex counterclockwise neighbor lists.
    ///
    /// Vertices at distance `< complete_radius` from `root` must carry their full
    /// rotation; vertices at distance exactly `complete_radius` may carry a partial one.
    /// Ids are relabelled in breadth-first order.
    pub fn from_rotation(rot: Vec<Vec<V>>, root: V, complete_radius: u32) -> Result<Self> {
        Self::from_rotation_mapped(rot, root, complete_radius).map(|(w, _)| w)
    }

    /// As [`from_rotation`](Self::from_rotation), also returning the map from input ids to window ids.
    pub fn from_rotation_mapped(
        rot: Vec<Vec<V>>,
        root: V,
        complete_radius: u32,
    ) -> Result<(Self, Vec<V>)> {
        if complete_radius == 0 {
            return Err(Error::InvalidRotation("complete_radius must be at least 1".into()));
        }
        Self::build(rot, root, Some(complete_radius), &[])
    }

    /// Builds a finite triangulated disk or annulus. Every vertex is complete; the faces
    /// left of the directed edges in `boundary` are boundary faces (the first one is the
    /// unbounded face). With no boundary edges the longest face is taken as unbounded.
    pub fn fragment(rot: Vec<Vec<V>>, root: V, boundary: &[(V, V)]) -> Result<Self> {
        Self::build(rot, root, None, boundary).map(|(w, _)| w)
    }

    pub fn fragment_mapped(
        rot: Vec<Vec<V>>,
        root: V,
        boundary: &[(V, V)],
    ) -> Result<(Self, Vec<V>)> {
        Self::build(rot, root, None, boundary)
    }

    fn build(
        rot: Vec<Vec<V>>,
        root: V,
        complete_radius: Option<u32>,
        boundary: &[(V, V)],
    ) -> Result<(Self, Vec<V>)> {
        let n = rot.len();
        if n == 0 || root as usize >= n {
            return Err(Error::InvalidRotation("root is not a vertex".into()));
        }
        for (v, list) in rot.iter().enumerate() {
            let mut seen = list.clone();
            seen.sort_unstable();
            for w in seen.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::InvalidRotation(format!("repeated edge {v}-{}", w[0])));
                }
            }
            for &u in list {
                if u as usize >= n {
                    return Err(Error::InvalidRotation(format!("neighbor {u} of {v} out of range")));
                }
                if u as usize == v {
                    return Err(Error::InvalidRotation(format!("self-loop at {v}")));
                }
                if !rot[u as usize].contains(&(v as V)) {
                    return Err(Error::InvalidRotation(format!("edge {v}-{u} is not symmetric")));
                }
            }
        }
        // breadth-first relabelling, neighbors taken in rotation order
        let mut new_id = vec![NONE; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        new_id[root as usize] = 0;
        order.push(root);
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &u in &rot[v as usize] {
                if new_id[u as usize] == NONE {
                    new_id[u as usize] = order.len() as V;
                    order.push(u);
                    queue.push_back(u);
                }
            }
        }
        if order.len() != n {
            return Err(Error::InvalidRotation("some vertex is unreachable from the root".into()));
        }
        let mut off = Vec::with_capacity(n + 1);
        let mut nbr = Vec::new();
        let mut tail = Vec::new();
        off.push(0);
        for (i, &old) in order.iter().enumerate() {
            for &u in &rot[old as usize] {
                nbr.push(new_id[u as usize]);
                tail.push(i as V);
            }
            off.push(nbr.len());
        }
        let mut twin = vec![0usize; nbr.len()];
        for v in 0..n {
            for h in off[v]..off[v + 1] {
                let u = nbr[h] as usize;
                let back = (off[u]..off[u + 1])
                    .find(|&g| nbr[g] as usize == v)
                    .expect("symmetry checked");
                twin[h] = back;
            }
        }
        let mut dist = vec![0u32; n];
        for v in 1..n {
            // parent is the first already-numbered neighbor, which has the smallest id
            let p = (off[v]..off[v + 1]).map(|h| nbr[h]).min().unwrap();
            dist[v] = dist[p as usize] + 1;
        }
        let max_d = *dist.iter().max().unwrap();
        let (complete_radius, fragment) = match complete_radius {
            Some(r) => {
                if max_d > r {
                    return Err(Error::InvalidRotation(format!(
                        "vertex at distance {max_d} lies beyond complete_radius {r}"
                    )));
                }
                (r, false)
            }
            None => (max_d + 1, true),
        };
        let mut sphere_off = vec![0usize; max_d as usize + 2];
        for v in 0..n {
            sphere_off[dist[v] as usize + 1] = v + 1;
        }
        for k in 1..sphere_off.len() {
            if sphere_off[k] < sphere_off[k - 1] {
                sphere_off[k] = sphere_off[k - 1];
            }
        }
        let mut w = TriangulationWindow {
            off,
            nbr,
            tail,
            twin,
            dist,
            sphere_off,
            complete_radius,
            face_of: Vec::new(),
            faces: Vec::new(),
            triangulation: true,
            boundary_faces: Vec::new(),
            fragment,
        };
        let mut boundary_h = Vec::new();
        for &(a, b) in boundary {
            if a as usize >= n || b as usize >= n {
                return Err(Error::InvalidRotation("boundary half-edge out of range".into()));
            }
            let (a, b) = (new_id[a as usize], new_id[b as usize]);
            boundary_h.push(w.find_half_edge(a, b).ok_or_else(|| {
                Error::InvalidRotation("boundary half-edge is not an edge".into())
            })?);
        }
        w.trace_faces(&boundary_h);
        Ok((w, new_id))
    }

    fn trace_faces(&mut self, boundary_h: &[usize]) {
        let hcount = self.nbr.len();
        let mut orbit_of = vec![NONE; hcount];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for h0 in 0..hcount {
            if orbit_of[h0] != NONE {
                continue;
            }
            let id = orbits.len() as u32;
            let mut orbit = Vec::new();
            let mut h = h0;
            loop {
                orbit_of[h] = id;
                orbit.push(h);
                h = self.next(h);
                if h == h0 {
                    break;
                }
            }
            orbits.push(orbit);
        }
        let mut boundary_orbits: Vec<u32> = boundary_h.iter().map(|&h| orbit_of[h]).collect();
        if boundary_orbits.is_empty() && self.fragment && !orbits.is_empty() {
            let longest = (0..orbits.len()).max_by_key(|&i| (orbits[i].len(), usize::MAX - i)).unwrap();
            boundary_orbits.push(longest as u32);
        }
        let full: Vec<bool> = orbits
            .iter()
            .map(|o| o.iter().all(|&h| self.is_complete(self.tail[h])))
            .collect();
        let touches: Vec<bool> = orbits
            .iter()
            .map(|o| o.iter().any(|&h| self.is_complete(self.tail[h])))
            .collect();
        let mut triangulation = true;
        for (i, o) in orbits.iter().enumerate() {
            if full[i] && !boundary_orbits.contains(&(i as u32)) && o.len() != 3 {
                triangulation = false;
            }
        }
        let mut face_of = vec![NONE; hcount];
        let mut faces = Vec::new();
        let mut boundary_faces = vec![NONE; boundary_orbits.len()];
        for (i, o) in orbits.iter().enumerate() {
            let known = full[i] || (triangulation && touches[i] && o.len() == 3);
            if !known {
                continue;
            }
            let fid = faces.len() as FaceId;
            for (slot, &b) in boundary_orbits.iter().enumerate() {
                if b == i as u32 {
                    boundary_faces[slot] = fid;
                }
            }
            faces.push(Face { start: o[0], degree: o.len() as u32 });
            for &h in o {
                face_of[h] = fid;
            }
        }
        self.face_of = face_of;
        self.faces = faces;
        self.triangulation = triangulation;
        boundary_faces.dedup();
        self.boundary_faces = boundary_faces;
    }

    pub fn vertex_count(&self) -> usize {
        self.dist.len()
    }

    pub fn root(&self) -> V {
        0
    }

    pub fn complete_radius(&self) -> u32 {
        self.complete_radius
    }

    /// True for finite disks built by the mesh and tiling constructors.
    pub fn is_fragment(&self) -> bool {
        self.fragment
    }

    /// True when every resolvable bounded face is a triangle.
    pub fn is_triangulation(&self) -> bool {
        self.triangulation
    }

    /// The unbounded face of a fragment.
    pub fn outer_face(&self) -> Option<FaceId> {
        self.boundary_faces.first().copied()
    }

    /// Faces of a fragment that are not part of the triangulated region.
    pub fn boundary_faces(&self) -> &[FaceId] {
        &self.boundary_faces
    }

    pub fn is_boundary_face(&self, f: FaceId) -> bool {
        self.boundary_faces.contains(&f)
    }

    pub fn dist(&self, v: V) -> u32 {
        self.dist[v as usize]
    }

    pub fn is_complete(&self, v: V) -> bool {
        self.dist[v as usize] < self.complete_radius
    }

    pub fn check_vertex(&self, v: V) -> Result<()> {
        if (v as usize) < self.dist.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn require_complete(&self, v: V) -> Result<()> {
        self.check_vertex(v)?;
        if self.is_complete(v) {
            Ok(())
        } else {
            Err(Error::Frontier(v))
        }
    }

    pub fn degree(&self, v: V) -> Result<usize> {
        self.require_complete(v)?;
        Ok(self.off[v as usize + 1] - self.off[v as usize])
    }

    /// Rotation list as stored; partial on the frontier.
    pub fn rotation(&self, v: V) -> &[V] {
        &self.nbr[self.off[v as usize]..self.off[v as usize + 1]]
    }

    pub fn half_edges(&self, v: V) -> Range<usize> {
        self.off[v as usize]..self.off[v as usize + 1]
    }

    pub fn half_edge_count(&self) -> usize {
        self.nbr.len()
    }

    pub fn head(&self, h: usize) -> V {
        self.nbr[h]
    }

    pub fn tail(&self, h: usize) -> V {
        self.tail[h]
    }

    pub fn twin(&self, h: usize) -> usize {
        self.twin[h]
    }

    /// Position of `h` inside the rotation of its tail.
    pub fn slot(&self, h: usize) -> usize {
        h - self.off[self.tail[h] as usize]
    }

    /// Half-edge `v -> rotation(v)[i]` with `i` taken cyclically.
    pub fn half_edge_at(&self, v: V, i: isize) -> usize {
        let r = self.half_edges(v);
        let d = r.len() as isize;
        r.start + i.rem_euclid(d) as usize
    }

    /// Next half-edge along the face on the left of `h`.
    pub fn next(&self, h: usize) -> usize {
        let t = self.twin[h];
        let v = self.tail[t];
        self.half_edge_at(v, self.slot(t) as isize - 1)
    }

    pub fn find_half_edge(&self, u: V, v: V) -> Option<usize> {
        self.half_edges(u).find(|&h| self.nbr[h] == v)
    }

    pub fn are_adjacent(&self, u: V, v: V) -> bool {
        self.find_half_edge(u, v).is_some()
    }

    /// Canonical edge id: the smaller of the two half-edge indices.
    pub fn edge_id(&self, h: usize) -> usize {
        h.min(self.twin[h])
    }

    /// All undirected edges as `(u, v, half-edge u->v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (V, V, usize)> + '_ {
        (0..self.nbr.len())
            .filter(move |&h| self.tail[h] < self.nbr[h])
            .map(move |h| (self.tail[h], self.nbr[h], h))
    }

    pub fn edge_count(&self) -> usize {
        self.nbr.len() / 2
    }

    pub fn face_left(&self, h: usize) -> Option<FaceId> {
        let f = self.face_of[h];
        (f != NONE).then_some(f)
    }

    pub fn face_right(&self, h: usize) -> Option<FaceId> {
        self.face_left(self.twin[h])
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_degree(&self, f: FaceId) -> u32 {
        self.faces[f as usize].degree
    }

    pub fn face_half_edges(&self, f: FaceId) -> Vec<usize> {
        let start = self.faces[f as usize].start;
        let mut out = vec![start];
        let mut h = self.next(start);
        while h != start {
            out.push(h);
            h = self.next(h);
        }
        out
    }

    pub fn face_vertices(&self, f: FaceId) -> Vec<V> {
        self.face_half_edges(f).into_iter().map(|h| self.tail[h]).collect()
    }

    /// Faces around a complete vertex, one per corner, in counterclockwise order.
    pub fn faces_around(&self, v: V) -> Result<Vec<FaceId>> {
        self.require_complete(v)?;
        self.half_edges(v)
            .map(|h| self.face_left(h).ok_or(Error::UnresolvedFace(h)))
            .collect()
    }

    /// Number of spheres stored (distances `0..=max`).
    pub fn max_dist(&self) -> u32 {
        (self.sphere_off.len() - 2) as u32
    }

    /// Vertices at distance exactly `n` from the root.
    pub fn sphere_ids(&self, n: u32) -> Range<usize> {
        if n as usize + 1 >= self.sphere_off.len() {
            return self.dist.len()..self.dist.len();
        }
        self.sphere_off[n as usize]..self.sphere_off[n as usize + 1]
    }

    /// Number of vertices at distance at most `n` from the root.
    pub fn ball_len(&self, n: u32) -> usize {
        self.sphere_ids(n.min(self.max_dist())).end
    }

    /// Distances from `src` by breadth-first search inside the window.
    pub fn bfs(&self, src: V, limit: Option<u32>) -> Vec<u32> {
        let mut d = vec![NONE; self.vertex_count()];
        let mut q = VecDeque::new();
        d[src as usize] = 0;
        q.push_back(src);
        while let Some(v) = q.pop_front() {
            let dv = d[v as usize];
            if limit.is_some_and(|l| dv >= l) {
                continue;
            }
            for &u in self.rotation(v) {
                if d[u as usize] == NONE {
                    d[u as usize] = dv + 1;
                    q.push_back(u);
                }
            }
        }
        d
    }

    /// Whether `other` is the same rotation system up to relabelling, with roots matched.
    pub fn rotation_isomorphic(&self, other: &TriangulationWindow) -> bool {
        if self.vertex_count() != other.vertex_count() || self.nbr.len() != other.nbr.len() {
            return false;
        }
        let d = self.rotation(0).len();
        if d != other.rotation(0).len() {
            return false;
        }
        (0..d).any(|shift| self.match_from(other, shift))
    }

    fn match_from(&self, other: &TriangulationWindow, shift: usize) -> bool {
        // map half-edge 0->rot(0)[0] onto 0->rot'(0)[shift] and propagate
        let n = self.vertex_count();
        let mut map = vec![NONE; n];
        let mut anchor = vec![usize::MAX; n];
        map[0] = 0;
        anchor[0] = shift;
        let mut q = VecDeque::from([0u32]);
        while let Some(v) = q.pop_front() {
            let v2 = map[v as usize];
            let r1 = self.rotation(v);
            let r2 = other.rotation(v2);
            if r1.len() != r2.len() {
                return false;
            }
            let s = anchor[v as usize];
            for (i, &u) in r1.iter().enumerate() {
                let u2 = r2[(i + s) % r2.len()];
                if map[u as usize] == NONE {
                    map[u as usize] = u2;
                    // place v at the matching slot of u
                    let back1 = self.slot(self.twin[self.off[v as usize] + i]);
                    let h2 = other.off[v2 as usize] + (i + s) % r2.len();
                    let back2 = other.slot(other.twin[h2]);
                    let du = other.rotation(u2).len();
                    if du != self.rotation(u).len() {
                        return false;
                    }
                    anchor[u as usize] = (back2 + du - back1) % du;
                    q.push_back(u);
                } else if map[u as usize] != u2 {
                    return false;
                }
            }
        }
        true
    }

    /// Serializable document in the ingestion format.
    pub fn to_doc(&self, with_dumps: bool) -> WindowDoc {
        let rotation = (0..self.vertex_count() as V).map(|v| self.rotation(v).to_vec()).collect();
        WindowDoc {
            vertex_count: self.vertex_count(),
            rotation,
            root: 0,
            complete_radius: if self.fragment { None } else { Some(self.complete_radius) },
            boundary: self.fragment.then(|| {
                self.boundary_faces
                    .iter()
                    .map(|&f| {
                        let h = self.face_half_edges(f)[0];
                        [self.tail(h), self.head(h)]
                    })
                    .collect()
            }),
            edges: with_dumps.then(|| self.edges().map(|(u, v, _)| [u, v]).collect()),
            faces: with_dumps.then(|| {
                (0..self.faces.len() as FaceId)
                    .filter(|&f| !self.is_boundary_face(f))
                    .map(|f| self.face_vertices(f))
                    .collect()
            }),
        }
    }

    pub fn from_doc(doc: &WindowDoc) -> Result<Self> {
        if doc.rotation.len() != doc.vertex_count {
            return Err(Error::Parse("vertex_count does not match rotation length".into()));
        }
        match doc.complete_radius {
            Some(r) => Self::from_rotation(doc.rotation.clone(), doc.root, r),
            None => {
                let b: Vec<(V, V)> =
                    doc.boundary.iter().flatten().map(|&[u, v]| (u, v)).collect();
                Self::fragment(doc.rotation.clone(), doc.root, &b)
            }
        }
    }

    pub fn to_json(&self, with_dumps: bool) -> String {
        serde_json::to_string(&self.to_doc(with_dumps)).expect("window serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: WindowDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(&doc)
    }
}

/// Ingestion/export format of a window.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WindowDoc {
    pub vertex_count: usize,
    pub rotation: Vec<Vec<V>>,
    pub root: V,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete_radius: Option<u32>,
    /// For a fragment: one directed edge per boundary face, with the face on its left.
    /// The first is the unbounded face.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<[V; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[V; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<Vec<V>>>,
}
