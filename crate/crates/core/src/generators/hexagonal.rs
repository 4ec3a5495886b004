//! The degree-6 lattice in axial coordinates.

use std::collections::HashMap;

use crate::error::Result;
use crate::window::{TriangulationWindow, V};

/// Axial steps in counterclockwise order.
pub const DIRS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

pub fn hex_norm(x: i64, y: i64) -> i64 {
    (x.abs() + y.abs() + (x + y).abs()) / 2
}

/// Lattice points of norm at most `radius`, with their rotation systems restricted to
/// that set. Index 0 is the origin.
pub fn patch(radius: u32) -> (Vec<(i64, i64)>, Vec<Vec<V>>) {
    let r = radius as i64;
    let mut pts = vec![(0, 0)];
    for x in -r..=r {
        for y in -r..=r {
            if (x, y) != (0, 0) && hex_norm(x, y) <= r {
                pts.push((x, y));
            }
        }
    }
    let index: HashMap<(i64, i64), V> =
        pts.iter().enumerate().map(|(i, &p)| (p, i as V)).collect();
    let rot = pts
        .iter()
        .map(|&(x, y)| {
            DIRS.iter()
                .filter_map(|&(dx, dy)| index.get(&(x + dx, y + dy)).copied())
                .collect()
        })
        .collect();
    (pts, rot)
}

pub fn window(radius: u32) -> Result<TriangulationWindow> {
    let (_, rot) = patch(radius);
    TriangulationWindow::from_rotation(rot, 0, radius)
}
