//! Layered triangulations grown sphere by sphere.
//!
//! Each sphere `S_m` is a cycle listed counterclockwise. A vertex with `p` parents on
//! `S_{m-1}` receives `deg - p - 4` private children; every edge of the cycle receives one
//! child shared by its endpoints. The rotation at `v ∈ S_m` reads
//! `[prev, children…, next, parents…]`.

use crate::error::Result;
use crate::generators::LayerSpec;
use crate::window::{TriangulationWindow, V};

/// Raw construction data, ids in creation order (root is 0).
#[derive(Clone, Debug)]
pub struct LayeredBuild {
    pub rot: Vec<Vec<V>>,
    /// Spheres `S_0 … S_R` in counterclockwise order.
    pub spheres: Vec<Vec<V>>,
    /// Children of every vertex of `S_0 … S_{R-1}`, counterclockwise.
    pub children: Vec<Vec<V>>,
    pub parents: Vec<Vec<V>>,
}

pub fn build(spec: &LayerSpec, radius: u32) -> Result<LayeredBuild> {
    let d0 = spec.root_degree()?;
    let mut children: Vec<Vec<V>> = vec![(1..=d0 as V).collect()];
    let mut parents: Vec<Vec<V>> = vec![Vec::new()];
    for _ in 0..d0 {
        children.push(Vec::new());
        parents.push(vec![0]);
    }
    let mut spheres = vec![vec![0], (1..=d0 as V).collect::<Vec<V>>()];
    for m in 1..radius as u64 {
        let deg = 6 + spec.layer_excess(m)? as usize;
        let cur = spheres[m as usize].clone();
        let l = cur.len();
        let mut next_sphere = Vec::new();
        let fresh = |parents_of: Vec<V>, parents: &mut Vec<Vec<V>>, children: &mut Vec<Vec<V>>| {
            let id = parents.len() as V;
            parents.push(parents_of);
            children.push(Vec::new());
            id
        };
        let mut shared = Vec::with_capacity(l);
        for i in 0..l {
            let v = cur[i];
            let q = deg - parents[v as usize].len() - 4;
            for _ in 0..q {
                let c = fresh(vec![v], &mut parents, &mut children);
                children[v as usize].push(c);
                next_sphere.push(c);
            }
            let nx = cur[(i + 1) % l];
            let s = fresh(vec![nx, v], &mut parents, &mut children);
            shared.push(s);
            next_sphere.push(s);
        }
        for i in 0..l {
            let v = cur[i] as usize;
            let mut list = vec![shared[(i + l - 1) % l]];
            list.append(&mut children[v]);
            list.push(shared[i]);
            children[v] = list;
        }
        spheres.push(next_sphere);
    }
    let n = parents.len();
    let mut rot = vec![Vec::new(); n];
    rot[0] = children[0].clone();
    for sphere in &spheres[1..] {
        let l = sphere.len();
        for i in 0..l {
            let v = sphere[i] as usize;
            let mut r = vec![sphere[(i + l - 1) % l]];
            r.extend_from_slice(&children[v]);
            r.push(sphere[(i + 1) % l]);
            r.extend_from_slice(&parents[v]);
            rot[v] = r;
        }
    }
    Ok(LayeredBuild { rot, spheres, children, parents })
}

pub fn window(spec: &LayerSpec, radius: u32) -> Result<TriangulationWindow> {
    let b = build(spec, radius)?;
    TriangulationWindow::from_rotation(b.rot, 0, radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_layer_spec_degrees() {
        let spec = LayerSpec::finite(3, &[3, 3], &[1, 2]);
        let w = window(&spec, 6).unwrap();
        assert_eq!(w.degree(0).unwrap(), 9);
        for v in 1..w.ball_len(5) as V {
            let want = match w.dist(v) {
                3 => 7,
                _ => 6,
            };
            assert_eq!(w.degree(v).unwrap(), want, "vertex {v}");
        }
        assert_eq!(w.sphere_ids(3).len(), 27);
        assert!(w.is_triangulation());
    }

    #[test]
    fn seven_regular() {
        let spec = LayerSpec::new(
            1,
            crate::sequences::SeqRule::constant(1),
            crate::sequences::SeqRule::constant(1),
        );
        let w = window(&spec, 6).unwrap();
        for v in 0..w.ball_len(5) as V {
            assert_eq!(w.degree(v).unwrap(), 7);
        }
    }
}
