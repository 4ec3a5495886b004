//! Triangular meshes and their d-fold pastings around a common apex.
//!
//! A mesh of size `n` has vertices `(k, j)`, `0 ≤ j ≤ k ≤ n`, placed at axial position
//! `(k - j, j)`; row `k` holds `k + 1` vertices and `(0, 0)` is the apex.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::window::{TriangulationWindow, V};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshSpec {
    pub size: u32,
    #[serde(default = "one")]
    pub fold: u32,
    #[serde(default)]
    pub closed: bool,
    #[serde(default)]
    pub separated: bool,
}

fn one() -> u32 {
    1
}

impl MeshSpec {
    pub fn single(size: u32) -> Self {
        MeshSpec { size, fold: 1, closed: false, separated: false }
    }

    pub fn vertex_count(&self) -> usize {
        let n = self.size as usize;
        let d = self.fold as usize;
        let per = (n + 1) * (n + 2) / 2 - 1;
        if self.separated {
            1 + d * per
        } else if self.closed {
            1 + d * (per - n)
        } else {
            1 + d * (per - n) + n
        }
    }
}

/// Neighbors of `(k, j)` inside a mesh of size `n`, counterclockwise, starting just after
/// the gap left by missing positions.
pub fn local_fan(n: u32, k: u32, j: u32) -> Vec<(u32, u32)> {
    let (k, j, n) = (k as i64, j as i64, n as i64);
    let cand = [(k + 1, j), (k + 1, j + 1), (k, j + 1), (k - 1, j), (k - 1, j - 1), (k, j - 1)];
    let ok: Vec<bool> =
        cand.iter().map(|&(a, b)| 0 <= b && b <= a && a <= n).collect();
    let start = (0..6).find(|&i| ok[i] && !ok[(i + 5) % 6]).unwrap_or(0);
    (0..6)
        .map(|t| (start + t) % 6)
        .filter(|&i| ok[i])
        .map(|i| (cand[i].0 as u32, cand[i].1 as u32))
        .collect()
}

fn dedup_cyclic(mut v: Vec<V>) -> Vec<V> {
    v.dedup();
    while v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    v
}

/// Rotation system of a (possibly pasted) mesh, the map from `(copy, k, j)` to vertex id,
/// and the directed edge whose left face is unbounded.
pub fn mesh_rotation(spec: &MeshSpec) -> Result<(Vec<Vec<V>>, HashMap<(u32, u32, u32), V>, (V, V))> {
    let n = spec.size;
    let d = spec.fold;
    if n == 0 || d == 0 {
        return Err(Error::InvalidSpec("mesh size and fold must be positive".into()));
    }
    if spec.closed && (spec.separated || d < 3) {
        return Err(Error::InvalidSpec("a closed mesh needs at least 3 unseparated copies".into()));
    }
    let glued = |c: u32| !spec.separated && (c + 1 < d || spec.closed);
    let mut id: HashMap<(u32, u32, u32), V> = HashMap::new();
    let mut reps: Vec<Vec<(u32, u32, u32)>> = vec![(0..d).map(|c| (c, 0, 0)).collect()];
    for c in 0..d {
        id.insert((c, 0, 0), 0);
    }
    for c in 0..d {
        for k in 1..=n {
            for j in 0..=k {
                let prev = (c + d - 1) % d;
                if j == 0 && (c > 0 || spec.closed) && glued(prev) {
                    continue;
                }
                let v = reps.len() as V;
                let mut r = vec![(c, k, j)];
                if j == k && glued(c) {
                    r.push(((c + 1) % d, k, 0));
                }
                for &x in &r {
                    id.insert(x, v);
                }
                reps.push(r);
            }
        }
    }
    let rot = reps
        .iter()
        .map(|r| {
            let mut fan = Vec::new();
            for &(c, k, j) in r {
                fan.extend(local_fan(n, k, j).into_iter().map(|(a, b)| id[&(c, a, b)]));
            }
            if spec.separated && r[0].1 == 0 {
                fan
            } else {
                dedup_cyclic(fan)
            }
        })
        .collect();
    let outer = (id[&(0, n, 1)], id[&(0, n, 0)]);
    Ok((rot, id, outer))
}

/// The mesh as a finite fragment rooted at the apex.
pub fn triangular_mesh(spec: &MeshSpec) -> Result<TriangulationWindow> {
    let (rot, _, outer) = mesh_rotation(spec)?;
    TriangulationWindow::fragment(rot, 0, &[outer])
}
