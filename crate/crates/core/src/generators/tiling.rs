//! Square tilings of a rectangle `[0,1] × [0,h]` or of a cylinder of circumference 1, and
//! their contact graphs.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{frac, qi, Q};
use crate::window::{TriangulationWindow, V};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TilingShape {
    Rectangle,
    Ring,
}

/// Axis-parallel square with lower-left corner `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Square {
    #[serde(with = "crate::rational::serde_q")]
    pub x: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub y: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub side: Q,
    pub layer: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareTiling {
    pub shape: TilingShape,
    #[serde(with = "crate::rational::serde_q")]
    pub height: Q,
    pub squares: Vec<Square>,
}

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn q_big(n: u128, d: u128) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

impl SquareTiling {
    /// Row `k` (bottom to top, `0 ≤ k ≤ n`) holds `k + 1` squares of side `1/(k+1)`; the
    /// contact graph is the triangular mesh of size `n`.
    pub fn mesh(n: u32) -> Self {
        let mut squares = Vec::new();
        let mut y = Q::zero();
        for k in 0..=n as i64 {
            let side = q(1, k + 1);
            for j in 0..=k {
                squares.push(Square { x: q(j, k + 1), y: y.clone(), side: side.clone(), layer: k as u32 });
            }
            y += side;
        }
        SquareTiling { shape: TilingShape::Rectangle, height: y, squares }
    }

    /// Rings of `a[0], a[1], …` equal squares with the standard offsets.
    pub fn rings(a: &[u64]) -> Result<Self> {
        if a.iter().any(|&x| x < 3) {
            return Err(Error::InvalidTiling("rings need at least 3 squares".into()));
        }
        let mut squares = Vec::new();
        let mut y = Q::zero();
        let mut o = Q::zero();
        for (n, &m) in a.iter().enumerate() {
            if n > 0 {
                o += q_big(1, 2 * a[n - 1] as u128 * m as u128);
            }
            let side = q_big(1, m as u128);
            for j in 0..m {
                let x = frac(&(&o + q_big(j as u128, m as u128)));
                squares.push(Square { x, y: y.clone(), side: side.clone(), layer: n as u32 + 1 });
            }
            y += side;
        }
        Ok(SquareTiling { shape: TilingShape::Ring, height: y, squares })
    }

    fn x_overlap(&self, s: &Square, t: &Square) -> Q {
        let lin = |a0: &Q, a1: &Q, b0: &Q, b1: &Q| -> Q {
            let lo = if a0 > b0 { a0 } else { b0 };
            let hi = if a1 < b1 { a1 } else { b1 };
            if hi > lo { hi - lo } else { Q::zero() }
        };
        let (s1, t1) = (&s.x + &s.side, &t.x + &t.side);
        match self.shape {
            TilingShape::Rectangle => lin(&s.x, &s1, &t.x, &t1),
            TilingShape::Ring => {
                let mut total = Q::zero();
                for k in [-1i64, 0, 1] {
                    let sh = qi(k);
                    total += lin(&s.x, &s1, &(&t.x + &sh), &(&t1 + &sh));
                }
                total
            }
        }
    }

    fn same_x(&self, a: &Q, b: &Q) -> bool {
        match self.shape {
            TilingShape::Rectangle => a == b,
            TilingShape::Ring => frac(&(a - b)).is_zero(),
        }
    }

    /// Checks that squares stay inside the region, have disjoint interiors, cover its area,
    /// and that no point is a corner of four squares.
    pub fn validate(&self) -> Result<()> {
        let mut area = Q::zero();
        for (i, s) in self.squares.iter().enumerate() {
            if !s.side.is_positive() || s.y.is_negative() || &s.y + &s.side > self.height {
                return Err(Error::InvalidTiling(format!("square {i} leaves the region")));
            }
            if self.shape == TilingShape::Rectangle && (s.x.is_negative() || &s.x + &s.side > Q::one()) {
                return Err(Error::InvalidTiling(format!("square {i} leaves the region")));
            }
            area += &s.side * &s.side;
        }
        if area != self.height {
            return Err(Error::InvalidTiling(format!("squares cover area {area}, region has {}", self.height)));
        }
        let n = self.squares.len();
        for i in 0..n {
            for j in i + 1..n {
                let (s, t) = (&self.squares[i], &self.squares[j]);
                let ylo = if s.y > t.y { &s.y } else { &t.y };
                let yhi = std::cmp::min(&s.y + &s.side, &t.y + &t.side);
                if &yhi > ylo && self.x_overlap(s, t).is_positive() {
                    return Err(Error::InvalidTiling(format!("squares {i} and {j} overlap")));
                }
            }
        }
        let mut corners: HashMap<(Q, Q), u32> = HashMap::new();
        for s in &self.squares {
            for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                let mut x = &s.x + &s.side * qi(dx);
                if self.shape == TilingShape::Ring {
                    x = frac(&x);
                }
                let y = &s.y + &s.side * qi(dy);
                let c = corners.entry((x.clone(), y.clone())).or_insert(0);
                *c += 1;
                if *c >= 4 {
                    return Err(Error::InvalidTiling(format!("four squares meet at ({x}, {y})")));
                }
            }
        }
        Ok(())
    }

    /// Indices of squares touching the bottom and the top of the region.
    pub fn bottom_top(&self) -> (Vec<usize>, Vec<usize>) {
        let bottom = (0..self.squares.len()).filter(|&i| self.squares[i].y.is_zero()).collect();
        let top = (0..self.squares.len())
            .filter(|&i| &self.squares[i].y + &self.squares[i].side == self.height)
            .collect();
        (bottom, top)
    }

    /// Rotation lists in tile coordinates (counterclockwise with y pointing up).
    fn tile_rotation(&self) -> Vec<Vec<V>> {
        let n = self.squares.len();
        let half = q(1, 2);
        let rel = |s: &Square, t: &Square| -> Q {
            match self.shape {
                TilingShape::Rectangle => &t.x - &s.x,
                TilingShape::Ring => frac(&(&t.x - &s.x + &half)) - &half,
            }
        };
        (0..n)
            .map(|i| {
                let s = &self.squares[i];
                let mut below = Vec::new();
                let mut right = Vec::new();
                let mut above = Vec::new();
                let mut left = Vec::new();
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    let t = &self.squares[j];
                    let ylo = if s.y > t.y { &s.y } else { &t.y };
                    let yhi = std::cmp::min(&s.y + &s.side, &t.y + &t.side);
                    let yov = &yhi > ylo;
                    if yov && self.same_x(&(&s.x + &s.side), &t.x) {
                        right.push((t.y.clone(), j));
                    } else if yov && self.same_x(&(&t.x + &t.side), &s.x) {
                        left.push((t.y.clone(), j));
                    } else if &t.y + &t.side == s.y && self.x_overlap(s, t).is_positive() {
                        below.push((rel(s, t), j));
                    } else if &s.y + &s.side == t.y && self.x_overlap(s, t).is_positive() {
                        above.push((rel(s, t), j));
                    }
                }
                below.sort();
                right.sort();
                above.sort();
                above.reverse();
                left.sort();
                left.reverse();
                below
                    .into_iter()
                    .chain(right)
                    .chain(above)
                    .chain(left)
                    .map(|(_, j)| j as V)
                    .collect()
            })
            .collect()
    }

    fn row_pair(&self, row: &[usize]) -> Option<(usize, usize)> {
        row.iter().find_map(|&a| {
            let sa = &self.squares[a];
            let end = &sa.x + &sa.side;
            row.iter().copied().find(|&b| b != a && self.same_x(&self.squares[b].x, &end)).map(|b| (a, b))
        })
    }
}

/// Contact graph of a tiling, rooted at square 0, with the map from square index to
/// window id. On a ring the rotation is mirrored so that the bottom boundary is the inner
/// one.
pub fn contact_graph_mapped(tiling: &SquareTiling) -> Result<(TriangulationWindow, Vec<V>)> {
    tiling.validate()?;
    if tiling.squares.is_empty() {
        return Err(Error::InvalidTiling("no squares".into()));
    }
    let mut rot = tiling.tile_rotation();
    let (bottom, top) = tiling.bottom_top();
    let mut boundary = Vec::new();
    match tiling.shape {
        TilingShape::Rectangle => {
            if let Some((a, b)) = tiling.row_pair(&top) {
                boundary.push((a as V, b as V));
            } else if let Some((a, b)) = tiling.row_pair(&bottom) {
                boundary.push((b as V, a as V));
            }
        }
        TilingShape::Ring => {
            for r in rot.iter_mut() {
                r.reverse();
            }
            let (a, b) = tiling
                .row_pair(&top)
                .ok_or_else(|| Error::InvalidTiling("top row is not a ring".into()))?;
            boundary.push((b as V, a as V));
            let (a, b) = tiling
                .row_pair(&bottom)
                .ok_or_else(|| Error::InvalidTiling("bottom row is not a ring".into()))?;
            boundary.push((a as V, b as V));
        }
    }
    let (w, map) = TriangulationWindow::fragment_mapped(rot, 0, &boundary)?;
    if !w.is_triangulation() {
        return Err(Error::InvalidTiling("contact graph is not a triangulation".into()));
    }
    Ok((w, map))
}

pub fn square_tiling_contact_graph(tiling: &SquareTiling) -> Result<TriangulationWindow> {
    contact_graph_mapped(tiling).map(|(w, _)| w)
}
