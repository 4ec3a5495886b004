//! Random edge flips of a hexagonal patch: triangulations with mixed degrees, used to
//! exercise the identities away from the symmetric generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::generators::hexagonal::{hex_norm, patch};
use crate::window::{TriangulationWindow, V, NONE};

fn pos(list: &[V], x: V) -> usize {
    list.iter().position(|&y| y == x).expect("adjacent")
}

/// Performs up to `flips` successful flips on edges inside the patch of radius
/// `patch_radius - 1`, then cuts the window at the largest complete radius.
pub fn flipped_hexagonal(patch_radius: u32, flips: usize, seed: u64) -> Result<TriangulationWindow> {
    if patch_radius < 2 {
        return Err(Error::InvalidSpec("patch radius must be at least 2".into()));
    }
    let (pts, mut rot) = patch(patch_radius);
    let inner: Vec<bool> =
        pts.iter().map(|&(x, y)| hex_norm(x, y) < patch_radius as i64).collect();
    let inner_ids: Vec<V> = (0..pts.len() as V).filter(|&v| inner[v as usize]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut attempts = 0;
    while done < flips && attempts < flips * 50 + 100 {
        attempts += 1;
        let u = inner_ids[rng.gen_range(0..inner_ids.len())];
        let ru = &rot[u as usize];
        let v = ru[rng.gen_range(0..ru.len())];
        if !inner[v as usize] || ru.len() < 4 || rot[v as usize].len() < 4 {
            continue;
        }
        let i = pos(ru, v);
        let x = ru[(i + 1) % ru.len()];
        let y = ru[(i + ru.len() - 1) % ru.len()];
        if x == y || rot[x as usize].contains(&y) {
            continue;
        }
        let iu = pos(&rot[u as usize], v);
        rot[u as usize].remove(iu);
        let iv = pos(&rot[v as usize], u);
        rot[v as usize].remove(iv);
        let ix = pos(&rot[x as usize], u);
        rot[x as usize].insert(ix + 1, y);
        let iy = pos(&rot[y as usize], v);
        rot[y as usize].insert(iy + 1, x);
        done += 1;
    }
    // largest radius whose interior avoids the partial lists on the patch boundary
    let n = pts.len();
    let mut dist = vec![NONE; n];
    dist[0] = 0;
    let mut queue = std::collections::VecDeque::from([0 as V]);
    while let Some(v) = queue.pop_front() {
        for &u in &rot[v as usize] {
            if dist[u as usize] == NONE {
                dist[u as usize] = dist[v as usize] + 1;
                queue.push_back(u);
            }
        }
    }
    let r = (0..n).filter(|&v| !inner[v]).map(|v| dist[v]).min().unwrap();
    let mut new_id = vec![NONE; n];
    let keep: Vec<usize> = (0..n).filter(|&v| dist[v] <= r).collect();
    for (i, &v) in keep.iter().enumerate() {
        new_id[v] = i as V;
    }
    let rot2 = keep
        .iter()
        .map(|&v| {
            rot[v]
                .iter()
                .filter(|&&u| new_id[u as usize] != NONE)
                .map(|&u| new_id[u as usize])
                .collect()
        })
        .collect();
    TriangulationWindow::from_rotation(rot2, 0, r)
}
