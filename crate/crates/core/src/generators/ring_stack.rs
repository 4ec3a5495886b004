//! Contact graphs of stacked rings of equal squares on a cylinder of circumference 1.
//!
//! Ring `n` holds `a_n` squares of side `1/a_n`; square `j` covers the arc
//! `[o_n + j/a_n, o_n + (j+1)/a_n)` with `o₁ = 0` and `o_{n+1} = o_n + 1/(2 a_n a_{n+1})`.
//! Measured in units of `1/(2 a_n a_{n+1})` and relative to `o_n`, square `j` of ring `n`
//! covers `[2 a_{n+1} j, 2 a_{n+1} (j+1))` and square `i` of ring `n+1` covers
//! `[1 + 2 a_n i, 1 + 2 a_n (i+1))`. Endpoints are never shared: one side is even, the
//! other odd.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::generators::ExcessSpec;
use crate::window::{TriangulationWindow, V};

/// Largest window the generator will build.
pub const MAX_VERTICES: usize = 5_000_000;

/// Contacts between ring `n` (size `lo`) and ring `n+1` (size `hi`): triples
/// `(j, i, overlap)` with the overlap in units of `1/(2·lo·hi)`, grouped by `j` and
/// increasing in `i` (taken modulo `hi`).
pub fn ring_contacts(lo: u64, hi: u64) -> Vec<(u64, u64, u128)> {
    let (a, b) = (lo as i128, hi as i128);
    let mut out = Vec::new();
    for j in 0..a {
        let (s, e) = (2 * b * j, 2 * b * (j + 1));
        let i0 = (s - 1).div_euclid(2 * a);
        let i1 = (e - 1).div_euclid(2 * a);
        for i in i0..=i1 {
            let (u, t) = (1 + 2 * a * i, 1 + 2 * a * (i + 1));
            let len = e.min(t) - s.max(u);
            debug_assert!(len > 0);
            out.push((j as u64, i.rem_euclid(b) as u64, len as u128));
        }
    }
    out
}

/// Squares of ring `n` (size `lo`) touching square `i` of ring `n+1`, by increasing x.
pub fn inner_range(lo: u64, hi: u64, i: u64) -> impl Iterator<Item = u64> {
    let (a, b, i) = (lo as i128, hi as i128, i as i128);
    let j0 = (1 + 2 * a * i).div_euclid(2 * b);
    let j1 = (1 + 2 * a * (i + 1)).div_euclid(2 * b);
    (j0..=j1).map(move |j| j.rem_euclid(a) as u64)
}

#[derive(Clone, Debug)]
pub struct RingStack {
    a: Vec<u64>,
    start: Vec<usize>,
    map: Vec<V>,
    window: TriangulationWindow,
}

impl RingStack {
    /// Rings `1 … radius` around the apex.
    pub fn new(spec: &ExcessSpec, radius: u32) -> Result<Self> {
        let a_big = spec.a_prefix(radius as usize)?;
        let a: Vec<u64> = a_big
            .iter()
            .map(|x| x.to_u64().ok_or_else(|| Error::InvalidSpec(format!("ring size {x} too large"))))
            .collect::<Result<_>>()?;
        Self::from_sizes(&a)
    }

    pub fn from_sizes(a: &[u64]) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidSpec("at least one ring is needed".into()));
        }
        if let Some((i, x)) = a.iter().enumerate().find(|(_, &x)| x < 3) {
            return Err(Error::InvalidSpec(format!("a_{} = {x} is below 3", i + 1)));
        }
        let total: u64 = a.iter().sum();
        if total as usize >= MAX_VERTICES {
            return Err(Error::InvalidSpec(format!("{total} squares exceed the window limit")));
        }
        let mut start = vec![1usize];
        for &x in a {
            start.push(start.last().unwrap() + x as usize);
        }
        let n = *start.last().unwrap();
        let r = a.len();
        let id = |ring: usize, j: u64| (start[ring - 1] + j as usize) as V;
        let mut rot: Vec<Vec<V>> = vec![Vec::new(); n];
        rot[0] = (0..a[0]).map(|j| id(1, j)).collect();
        let mut outer: Vec<Vec<Vec<V>>> = Vec::with_capacity(r);
        let mut inner: Vec<Vec<Vec<V>>> = Vec::with_capacity(r);
        inner.push(vec![vec![0]; a[0] as usize]);
        for ring in 1..=r {
            let mut o = vec![Vec::new(); a[ring - 1] as usize];
            if ring < r {
                for (j, i, _) in ring_contacts(a[ring - 1], a[ring]) {
                    o[j as usize].push(id(ring + 1, i));
                }
                let inn = (0..a[ring])
                    .map(|i| inner_range(a[ring - 1], a[ring], i).map(|j| id(ring, j)).collect())
                    .collect();
                inner.push(inn);
            }
            outer.push(o);
        }
        for ring in 1..=r {
            let m = a[ring - 1];
            for j in 0..m {
                let v = id(ring, j) as usize;
                let mut list = vec![id(ring, (j + m - 1) % m)];
                list.extend(outer[ring - 1][j as usize].iter().copied());
                list.push(id(ring, (j + 1) % m));
                let mut inn = std::mem::take(&mut inner[ring - 1][j as usize]);
                inn.reverse();
                list.extend(inn);
                rot[v] = list;
            }
        }
        let (window, map) = TriangulationWindow::from_rotation_mapped(rot, 0, r as u32)?;
        Ok(RingStack { a: a.to_vec(), start, map, window })
    }

    pub fn window(&self) -> &TriangulationWindow {
        &self.window
    }

    pub fn into_window(self) -> TriangulationWindow {
        self.window
    }

    /// `a₁ … a_R`.
    pub fn sizes(&self) -> &[u64] {
        &self.a
    }

    pub fn radius(&self) -> usize {
        self.a.len()
    }

    /// Window id of square `j` in ring `n ≥ 1`.
    pub fn square(&self, n: usize, j: u64) -> V {
        self.map[self.start[n - 1] + j as usize]
    }

    /// Offset `o_n` of ring `n`.
    pub fn offset(&self, n: usize) -> BigRational {
        let mut o = BigRational::zero();
        for m in 1..n {
            o += BigRational::new(BigInt::from(1), BigInt::from(2 * self.a[m - 1] as u128 * self.a[m] as u128));
        }
        o
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_spheres() {
        let rs = RingStack::new(&ExcessSpec::three_spheres(), 4).unwrap();
        assert_eq!(rs.window().vertex_count(), 13);
        for n in 1..=4 {
            assert_eq!(rs.window().sphere_ids(n).len(), 3);
        }
        assert!(rs.window().is_triangulation());
    }

    #[test]
    fn contacts_cover_both_rings() {
        for (lo, hi) in [(3, 6), (6, 3), (5, 7), (9, 3), (3, 3)] {
            let c = ring_contacts(lo, hi);
            let total: u128 = c.iter().map(|t| t.2).sum();
            assert_eq!(total, 2 * lo as u128 * hi as u128);
            for i in 0..hi {
                let s: u128 = c.iter().filter(|t| t.1 == i).map(|t| t.2).sum();
                assert_eq!(s, 2 * lo as u128);
            }
        }
    }

    #[test]
    fn linear_growth_degrees() {
        let rs = RingStack::new(&ExcessSpec::constant(0), 5).unwrap();
        let w = rs.window();
        for n in 1..=5 {
            assert_eq!(w.sphere_ids(n).len(), 6 * n as usize);
        }
        for v in 0..w.ball_len(4) as V {
            assert_eq!(w.degree(v).unwrap(), 6);
        }
    }
}
