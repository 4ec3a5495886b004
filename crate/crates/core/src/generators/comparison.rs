//! The comparison graph `𝒜_n` of a layered triangulation: a tree of separated triangular
//! meshes unfolded from the main body, with its homomorphism `φ` onto the layered graph.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::generators::layered::{self, LayeredBuild};
use crate::generators::mesh::local_fan;
use crate::generators::LayerSpec;
use crate::window::{TriangulationWindow, V};

#[derive(Clone, Debug)]
pub struct ComparisonGraph {
    /// `𝒜_n` as a finite fragment rooted at the apex `w₀`.
    pub window: TriangulationWindow,
    /// The layered graph, complete up to `θ_n`.
    pub layered: TriangulationWindow,
    /// `φ(w)` for every vertex of `𝒜_n`, as a vertex of `layered`.
    pub phi: Vec<V>,
    /// `𝒯_n`, counterclockwise.
    pub terminal: Vec<V>,
    /// Number of meshes in generation `1 … n`.
    pub generation_counts: Vec<usize>,
    pub thetas: Vec<u64>,
}

/// Rows `0 … h` of the sector of `G` spanned by the consecutive children `x0`, `x1` of `v`.
fn sector_rows(b: &LayeredBuild, v: V, x0: V, x1: V, h: u64) -> Vec<Vec<V>> {
    let mut rows = vec![vec![v], vec![x0, x1]];
    for _ in 1..h {
        let row = rows.last().unwrap();
        let ch = |x: V| &b.children[x as usize];
        let first = ch(row[0]);
        let mut next = vec![first[first.len() - 2]];
        for &x in &row[..row.len() - 1] {
            next.push(*ch(x).last().unwrap());
        }
        next.push(ch(*row.last().unwrap())[1]);
        rows.push(next);
    }
    rows
}

struct Builder {
    rot: Vec<Vec<V>>,
    phi: Vec<V>,
}

impl Builder {
    /// Attaches a mesh at `apex` whose rows map onto `rows`; returns its last row.
    fn attach(&mut self, apex: V, rows: &[Vec<V>]) -> Vec<V> {
        let h = (rows.len() - 1) as u32;
        let mut id: HashMap<(u32, u32), V> = HashMap::new();
        id.insert((0, 0), apex);
        for k in 1..=h {
            for j in 0..=k {
                let v = self.rot.len() as V;
                id.insert((k, j), v);
                self.rot.push(Vec::new());
                self.phi.push(rows[k as usize][j as usize]);
            }
        }
        for k in 1..=h {
            for j in 0..=k {
                let fan = local_fan(h, k, j).into_iter().map(|p| id[&p]).collect();
                self.rot[id[&(k, j)] as usize] = fan;
            }
        }
        let apex_fan: Vec<V> = local_fan(h, 0, 0).into_iter().map(|p| id[&p]).collect();
        self.rot[apex as usize].extend(apex_fan);
        (0..=h).map(|j| id[&(h, j)]).collect()
    }
}

pub fn comparison_graph(spec: &LayerSpec, n: u32) -> Result<ComparisonGraph> {
    if n == 0 {
        return Err(Error::InvalidSpec("n must be at least 1".into()));
    }
    let thetas: Vec<u64> = (1..=n as u64).map(|k| spec.theta(k)).collect::<Result<_>>()?;
    let radius = thetas[n as usize - 1] + 1;
    let b = layered::build(spec, radius as u32)?;
    let mut bl = Builder { rot: vec![Vec::new()], phi: vec![0] };

    let roots = &b.children[0];
    let dd = roots.len();
    let h1 = spec.h_req(1)?;
    let mut terminal = Vec::new();
    for i in 0..dd {
        let rows = sector_rows(&b, 0, roots[i], roots[(i + 1) % dd], h1);
        terminal.extend(bl.attach(0, &rows));
    }
    let mut generation_counts = vec![dd];

    for k in 1..n as u64 {
        let dk = spec.d_req(k)? as usize;
        let hk1 = spec.h_req(k + 1)?;
        let mut pre: HashMap<V, Vec<usize>> = HashMap::new();
        for (pos, &w) in terminal.iter().enumerate() {
            pre.entry(bl.phi[w as usize]).or_default().push(pos);
        }
        let mut assigned: HashMap<usize, (usize, usize)> = HashMap::new();
        for (&v, list) in &pre {
            let owned = &b.children[v as usize][1..];
            let q = owned.len() - 1;
            match list.len() {
                1 => {
                    if q != dk && q != dk + 1 {
                        return Err(Error::Hypothesis(format!("vertex {v} owns {q} sectors")));
                    }
                    assigned.insert(list[0], (0, q));
                }
                2 => {
                    if q != dk + 1 {
                        return Err(Error::Hypothesis(format!(
                            "vertex {v} has two preimages but owns {q} sectors"
                        )));
                    }
                    let (a, c) = (list[0], list[1]);
                    // the counterclockwise-first copy sits at the end of the cyclic list
                    let (first, second) = if a == 0 && c == terminal.len() - 1 { (c, a) } else { (a, c) };
                    assigned.insert(first, (0, 1));
                    assigned.insert(second, (1, q));
                }
                m => return Err(Error::Hypothesis(format!("vertex {v} has {m} preimages"))),
            }
        }
        let mut next_terminal = Vec::new();
        let mut count = 0;
        for (pos, &w) in terminal.iter().enumerate() {
            let v = bl.phi[w as usize];
            let owned = b.children[v as usize][1..].to_vec();
            let (lo, hi) = assigned[&pos];
            for t in lo..hi {
                let rows = sector_rows(&b, v, owned[t], owned[t + 1], hk1);
                next_terminal.extend(bl.attach(w, &rows));
                count += 1;
            }
        }
        generation_counts.push(count);
        terminal = next_terminal;
    }

    let (gw, gmap) = TriangulationWindow::from_rotation_mapped(b.rot, 0, radius as u32)?;
    let (aw, amap) = TriangulationWindow::fragment_mapped(bl.rot, 0, &[])?;
    let mut phi = vec![0; aw.vertex_count()];
    for (raw, &img) in bl.phi.iter().enumerate() {
        phi[amap[raw] as usize] = gmap[img as usize];
    }
    let terminal = terminal.iter().map(|&t| amap[t as usize]).collect();
    Ok(ComparisonGraph { window: aw, layered: gw, phi, terminal, generation_counts, thetas })
}

/// Outcome of checking `φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiCheck {
    pub homomorphism: bool,
    pub max_preimages: usize,
    pub surjective: bool,
    pub distance_preserving: bool,
}

impl ComparisonGraph {
    pub fn check_phi(&self) -> PhiCheck {
        let a = &self.window;
        let g = &self.layered;
        let homomorphism = a.edges().all(|(u, v, _)| {
            g.are_adjacent(self.phi[u as usize], self.phi[v as usize])
        });
        let mut count: HashMap<V, usize> = HashMap::new();
        for &p in &self.phi {
            *count.entry(p).or_default() += 1;
        }
        let max_preimages = count.values().copied().max().unwrap_or(0);
        let theta = *self.thetas.last().unwrap();
        let image: HashSet<V> = count.keys().copied().collect();
        let surjective = image.len() == g.ball_len(theta as u32)
            && image.iter().all(|&v| (g.dist(v) as u64) <= theta);
        let distance_preserving =
            (0..a.vertex_count()).all(|w| a.dist(w as V) == g.dist(self.phi[w]));
        PhiCheck { homomorphism, max_preimages, surjective, distance_preserving }
    }
}
