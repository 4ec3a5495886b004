//! Seeded random connected subgraphs, for property sweeps.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::window::{TriangulationWindow, V};

/// Vertices at least `margin` steps inside the frontier (every vertex of a fragment).
pub fn inner_region(w: &TriangulationWindow, margin: u32) -> Vec<V> {
    (0..w.vertex_count() as V)
        .filter(|&v| w.is_fragment() || w.dist(v) + margin <= w.complete_radius())
        .collect()
}

/// A connected vertex set of about `size` vertices grown from a random seed by adding
/// random neighbors, staying within `allowed`.
pub fn random_connected<R: Rng>(
    w: &TriangulationWindow,
    allowed: &[V],
    size: usize,
    rng: &mut R,
) -> Result<Vec<V>> {
    let mut ok = vec![false; w.vertex_count()];
    for &v in allowed {
        ok[v as usize] = true;
    }
    let &start = allowed.choose(rng).ok_or(Error::EmptySelection)?;
    let mut inside = vec![false; w.vertex_count()];
    inside[start as usize] = true;
    let mut verts = vec![start];
    let mut border: Vec<V> = Vec::new();
    let push_border = |v: V, border: &mut Vec<V>, inside: &[bool]| {
        for &u in w.rotation(v) {
            if ok[u as usize] && !inside[u as usize] {
                border.push(u);
            }
        }
    };
    push_border(start, &mut border, &inside);
    while verts.len() < size && !border.is_empty() {
        let i = rng.gen_range(0..border.len());
        let u = border.swap_remove(i);
        if inside[u as usize] {
            continue;
        }
        inside[u as usize] = true;
        verts.push(u);
        push_border(u, &mut border, &inside);
    }
    verts.sort_unstable();
    Ok(verts)
}
