//! Vertex extremal length: μ-lengths, exact values on square tilings, a numerical solver
//! for finite graphs, and water flows on ring stacks.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{RingStack, SquareTiling};
use crate::rational::{fmt_q, to_f64, Q};
use crate::sequences::ratio_f64;
use crate::window::{TriangulationWindow, V};

/// Nonnegative weight on each vertex of a window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexMetric {
    pub mu: Vec<f64>,
}

impl VertexMetric {
    pub fn constant(n: usize, c: f64) -> Self {
        VertexMetric { mu: vec![c; n] }
    }

    pub fn area(&self) -> f64 {
        self.mu.iter().map(|x| x * x).sum()
    }

    pub fn is_admissible(&self) -> bool {
        let a = self.area();
        self.mu.iter().all(|&x| x >= 0.0) && a > 0.0 && a.is_finite()
    }

    pub fn scaled(&self, t: f64) -> Self {
        VertexMetric { mu: self.mu.iter().map(|x| x * t).collect() }
    }

    /// `id,value` lines.
    pub fn csv(&self) -> String {
        let mut s = String::from("vertex,mu\n");
        for (v, x) in self.mu.iter().enumerate() {
            s += &format!("{v},{x:e}\n");
        }
        s
    }
}

/// Paths from `sources` to `targets`. The two sets may share vertices; a shared vertex is
/// a path of one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFamily {
    pub sources: Vec<V>,
    pub targets: Vec<V>,
}

impl PathFamily {
    pub fn new(w: &TriangulationWindow, sources: Vec<V>, targets: Vec<V>) -> Result<Self> {
        if sources.is_empty() || targets.is_empty() {
            return Err(Error::InvalidFamily("sources and targets must be nonempty".into()));
        }
        for &v in sources.iter().chain(&targets) {
            w.check_vertex(v)?;
        }
        Ok(PathFamily { sources, targets })
    }

    /// Paths from `sources` to the frontier of the window.
    pub fn to_frontier(w: &TriangulationWindow, sources: Vec<V>) -> Result<Self> {
        if w.is_fragment() {
            return Err(Error::InvalidFamily("a fragment has no frontier".into()));
        }
        let targets = w.sphere_ids(w.complete_radius()).map(|v| v as V).collect();
        Self::new(w, sources, targets)
    }
}

/// `L_μ(γ) = Σ_{v ∈ γ} μ(v)`.
pub fn mu_length(metric: &VertexMetric, path: &[V]) -> f64 {
    path.iter().map(|&v| metric.mu[v as usize]).sum()
}

#[derive(PartialEq)]
struct Item(f64, V);

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

/// Shortest μ-length over the family, with a path attaining it. Both endpoints count.
pub fn mu_min_length(
    w: &TriangulationWindow,
    metric: &VertexMetric,
    family: &PathFamily,
) -> Result<(f64, Vec<V>)> {
    let n = w.vertex_count();
    if metric.mu.len() != n {
        return Err(Error::InvalidFamily("metric size does not match the window".into()));
    }
    let mut is_target = vec![false; n];
    for &t in &family.targets {
        is_target[t as usize] = true;
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![V::MAX; n];
    let mut heap = BinaryHeap::new();
    for &s in &family.sources {
        let d = metric.mu[s as usize];
        if d < dist[s as usize] {
            dist[s as usize] = d;
            heap.push(Item(d, s));
        }
    }
    while let Some(Item(d, v)) = heap.pop() {
        if d > dist[v as usize] {
            continue;
        }
        if is_target[v as usize] {
            let mut path = vec![v];
            let mut x = v;
            while prev[x as usize] != V::MAX {
                x = prev[x as usize];
                path.push(x);
            }
            path.reverse();
            return Ok((d, path));
        }
        for &u in w.rotation(v) {
            let nd = d + metric.mu[u as usize];
            if nd < dist[u as usize] {
                dist[u as usize] = nd;
                prev[u as usize] = v;
                heap.push(Item(nd, u));
            }
        }
    }
    Err(Error::InvalidFamily("no path joins the sources to the targets".into()))
}

/// `VEL(A, B) = h` on a tiling with the side-length metric, as exact values.
#[derive(Clone, Debug)]
pub struct ExactVel {
    pub value: Q,
    pub window: TriangulationWindow,
    pub family: PathFamily,
    /// Side length of each square, indexed by window id.
    pub sides: Vec<Q>,
}

impl ExactVel {
    pub fn metric(&self) -> VertexMetric {
        VertexMetric { mu: self.sides.iter().map(to_f64).collect() }
    }
}

pub fn vel_exact_tiling(tiling: &SquareTiling) -> Result<ExactVel> {
    let (window, map) = crate::generators::tiling::contact_graph_mapped(tiling)?;
    let (bottom, top) = tiling.bottom_top();
    let mut sides = vec![Q::zero(); window.vertex_count()];
    for (i, s) in tiling.squares.iter().enumerate() {
        sides[map[i] as usize] = s.side.clone();
    }
    let family = PathFamily::new(
        &window,
        bottom.iter().map(|&i| map[i]).collect(),
        top.iter().map(|&i| map[i]).collect(),
    )?;
    Ok(ExactVel { value: tiling.height.clone(), window, family, sides })
}

/// Solver output. `value` is `L_μ(Γ)²/area(μ)` of the returned metric, a lower bound;
/// `upper` comes from the dual multipliers.
#[derive(Clone, Debug, PartialEq)]
pub struct VelSolution {
    pub value: f64,
    pub upper: f64,
    /// Normalised so that the shortest path has μ-length 1.
    pub metric: VertexMetric,
    /// Paths with a positive multiplier.
    pub witnesses: Vec<Vec<V>>,
    pub rounds: usize,
    /// `(round, shortest μ-length, area)`.
    pub trace: Vec<(usize, f64, f64)>,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_ROUNDS: usize = 10_000;

/// Dual sweeps between two shortest-path searches.
const INNER_SWEEPS: usize = 25;

struct Qp {
    paths: Vec<Vec<V>>,
    lambda: Vec<f64>,
    mu: Vec<f64>,
}

impl Qp {
    /// Coordinate ascent on the dual of `min ½|μ|²` subject to `Σ_γ μ ≥ 1`.
    fn sweep(&mut self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.paths.len() {
            let p = &self.paths[i];
            let len: f64 = p.iter().map(|&v| self.mu[v as usize]).sum();
            let step = (1.0 - len) / p.len() as f64;
            let new = (self.lambda[i] + step).max(0.0);
            let d = new - self.lambda[i];
            if d != 0.0 {
                for &v in p {
                    self.mu[v as usize] += d;
                }
                self.lambda[i] = new;
                worst = worst.max((d * p.len() as f64).abs());
            }
        }
        worst
    }

    fn dual(&self) -> f64 {
        let s: f64 = self.lambda.iter().sum();
        s - 0.5 * self.mu.iter().map(|x| x * x).sum::<f64>()
    }
}

/// `VEL(A, B) = sup_μ L_μ(Γ)²/area(μ)` by constraint generation.
pub fn vel_solve(
    w: &TriangulationWindow,
    family: &PathFamily,
    tolerance: f64,
    cap: usize,
) -> Result<VelSolution> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidFamily("tolerance must be positive".into()));
    }
    let n = w.vertex_count();
    let mut qp = Qp { paths: Vec::new(), lambda: Vec::new(), mu: vec![0.0; n] };
    let mut seen: HashSet<Vec<V>> = HashSet::new();
    let (_, first) = mu_min_length(w, &VertexMetric::constant(n, 1.0), family)?;
    seen.insert(first.clone());
    qp.paths.push(first);
    qp.lambda.push(0.0);
    let mut trace = Vec::new();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for round in 1..=cap {
        let mut settled = false;
        for _ in 0..INNER_SWEEPS {
            if qp.sweep() < tolerance * 1e-3 {
                settled = true;
                break;
            }
        }
        let metric = VertexMetric { mu: qp.mu.clone() };
        let (len, path) = mu_min_length(w, &metric, family)?;
        let area = metric.area();
        trace.push((round, len, area));
        if area > 0.0 {
            let lower = len * len / area;
            if best.as_ref().map_or(true, |b| lower > b.0) {
                best = Some((lower, metric.mu.iter().map(|x| x / len).collect()));
            }
        }
        if len >= 1.0 - tolerance && settled {
            let (value, mu) = best.expect("positive area after convergence");
            let upper = 1.0 / (2.0 * qp.dual()).max(f64::MIN_POSITIVE);
            let witnesses = qp
                .paths
                .iter()
                .zip(&qp.lambda)
                .filter(|(_, &l)| l > 0.0)
                .map(|(p, _)| p.clone())
                .collect();
            return Ok(VelSolution {
                value,
                upper: upper.max(value),
                metric: VertexMetric { mu },
                witnesses,
                rounds: round,
                trace,
            });
        }
        if seen.insert(path.clone()) {
            qp.paths.push(path);
            qp.lambda.push(0.0);
        }
    }
    let lower = best.map_or(0.0, |b| b.0);
    let d = qp.dual();
    let upper = if d > 0.0 { 1.0 / (2.0 * d) } else { f64::INFINITY };
    Err(Error::IterationCap { cap, lower, upper })
}

/// A flow on the half-edges of a window, exact.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowAssignment {
    pub source: V,
    /// `θ(tail h, head h)` for every half-edge `h`.
    pub theta: Vec<Q>,
}

impl FlowAssignment {
    pub fn value(&self, w: &TriangulationWindow, u: V, v: V) -> Option<&Q> {
        w.find_half_edge(u, v).map(|h| &self.theta[h])
    }

    pub fn is_antisymmetric(&self, w: &TriangulationWindow) -> bool {
        (0..w.half_edge_count()).all(|h| self.theta[h] == -self.theta[w.twin(h)].clone())
    }

    /// Net outflow at every vertex.
    pub fn divergence(&self, w: &TriangulationWindow) -> Vec<Q> {
        (0..w.vertex_count() as V)
            .map(|v| w.half_edges(v).fold(Q::zero(), |acc, h| acc + &self.theta[h]))
            .collect()
    }

    /// Vertices other than the source whose net outflow is not zero, ignoring `skip`.
    pub fn conservation_failures(&self, w: &TriangulationWindow, skip: &dyn Fn(V) -> bool) -> Vec<V> {
        self.divergence(w)
            .iter()
            .enumerate()
            .filter(|&(v, d)| v as V != self.source && !skip(v as V) && !d.is_zero())
            .map(|(v, _)| v as V)
            .collect()
    }

    /// `half-edge tail,head,value` lines with values as `p/q`.
    pub fn csv(&self, w: &TriangulationWindow) -> String {
        let mut s = String::from("from,to,theta\n");
        for h in 0..w.half_edge_count() {
            if self.theta[h].is_positive() {
                s += &format!("{},{},{}\n", w.tail(h), w.head(h), fmt_q(&self.theta[h]));
            }
        }
        s
    }
}

/// The water flow of a ring stack: `1/a₁` along each apex edge, the arc overlap across
/// consecutive rings and nothing along a ring.
pub fn water_flow(rs: &RingStack) -> Result<FlowAssignment> {
    let w = rs.window();
    let a = rs.sizes();
    let mut theta = vec![Q::zero(); w.half_edge_count()];
    let mut put = |u: V, v: V, x: Q| -> Result<()> {
        let h = w
            .find_half_edge(u, v)
            .ok_or_else(|| Error::InvalidSpec(format!("squares {u} and {v} do not touch")))?;
        theta[w.twin(h)] = -x.clone();
        theta[h] = x;
        Ok(())
    };
    for j in 0..a[0] {
        put(w.root(), rs.square(1, j), Q::new(BigInt::one(), BigInt::from(a[0])))?;
    }
    for n in 1..a.len() {
        let (lo, hi) = (a[n - 1], a[n]);
        let unit = BigInt::from(2u128 * lo as u128 * hi as u128);
        for (j, i, len) in crate::generators::ring_stack::ring_contacts(lo, hi) {
            put(rs.square(n, j), rs.square(n + 1, i), Q::new(BigInt::from(len), unit.clone()))?;
        }
    }
    Ok(FlowAssignment { source: w.root(), theta })
}

/// Energy carried between sphere `n` and sphere `n+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelEnergy {
    pub n: usize,
    pub edges: u64,
    pub energy: Q,
    pub max_edge: Q,
    /// `2/(a_n + a_{n+1})`, or `1/a₁` at level 0.
    pub edge_bound: Q,
    /// `4/(a_n + a_{n+1})`, or `1/a₁` at level 0.
    pub energy_bound: Q,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowEnergy {
    pub levels: Vec<LevelEnergy>,
    pub total: Q,
    pub bound: Q,
}

impl FlowEnergy {
    pub fn edge_bound_holds(&self) -> bool {
        self.levels.iter().all(|l| l.max_edge <= l.edge_bound)
    }

    pub fn total_bound_holds(&self) -> bool {
        self.total <= self.bound
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("n,edges,energy,max_edge,edge_bound,energy_bound\n");
        for l in &self.levels {
            s += &format!(
                "{},{},{},{},{},{}\n",
                l.n,
                l.edges,
                fmt_q(&l.energy),
                fmt_q(&l.max_edge),
                fmt_q(&l.edge_bound),
                fmt_q(&l.energy_bound)
            );
        }
        s
    }
}

/// `Σ θ(e)²` over edges between spheres `n` and `n+1`, `n = 0 … n_max`, against the
/// per-edge and total bounds with `a_n = |S_n|`.
pub fn flow_energy(w: &TriangulationWindow, flow: &FlowAssignment, n_max: u32) -> Result<FlowEnergy> {
    let d = w.bfs(flow.source, Some(n_max + 1));
    let r = w.complete_radius();
    if !w.is_fragment() && w.dist(flow.source) + n_max + 1 > r {
        return Err(Error::WindowTooSmall { needed: w.dist(flow.source) + n_max + 1, have: r });
    }
    let mut sizes = vec![0i64; n_max as usize + 2];
    for &x in &d {
        if x <= n_max + 1 {
            sizes[x as usize] += 1;
        }
    }
    let mut levels: Vec<LevelEnergy> = (0..=n_max as usize)
        .map(|n| {
            let (eb, tb) = if n == 0 {
                let x = Q::new(BigInt::one(), BigInt::from(sizes[1]));
                (x.clone(), x)
            } else {
                let s = BigInt::from(sizes[n] + sizes[n + 1]);
                (Q::new(BigInt::from(2), s.clone()), Q::new(BigInt::from(4), s))
            };
            LevelEnergy {
                n,
                edges: 0,
                energy: Q::zero(),
                max_edge: Q::zero(),
                edge_bound: eb,
                energy_bound: tb,
            }
        })
        .collect();
    for (u, v, _) in w.edges() {
        let (du, dv) = (d[u as usize], d[v as usize]);
        let n = du.min(dv);
        if du == dv || n > n_max {
            continue;
        }
        let h = w.find_half_edge(u, v).expect("edge");
        let t = flow.theta[h].abs();
        let l = &mut levels[n as usize];
        l.edges += 1;
        l.energy += &t * &t;
        if t > l.max_edge {
            l.max_edge = t;
        }
    }
    let total = levels.iter().fold(Q::zero(), |acc, l| acc + &l.energy);
    let bound = levels.iter().fold(Q::zero(), |acc, l| acc + &l.energy_bound);
    Ok(FlowEnergy { levels, total, bound })
}

/// Squared gaps between two rings, from the arc geometry alone: ring sizes `lo` (inner)
/// and `hi` (outer), lengths in units of `1/(2·lo·hi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingPairGaps {
    pub contacts: BigInt,
    pub sum_sq: BigInt,
    pub max_gap: BigInt,
}

/// Largest ring the level-wise computation walks over.
pub const LEVEL_WALK_LIMIT: u64 = 10_000_000;

/// Overlaps between consecutive rings, walking the smaller ring only.
pub fn ring_pair_gaps(lo: &BigInt, hi: &BigInt) -> Result<RingPairGaps> {
    let small = lo.min(hi).to_u64().filter(|&x| x <= LEVEL_WALK_LIMIT).ok_or_else(|| {
        Error::InvalidSpec("both rings are too large for a level-wise walk".into())
    })?;
    let two = BigInt::from(2);
    let (step_small, step_big, shift_small, shift_big) = if lo <= hi {
        // walk intervals [2hi·j, 2hi(j+1)); points 1 + 2lo·i
        (&two * hi, &two * lo, BigInt::zero(), BigInt::one())
    } else {
        (&two * lo, &two * hi, BigInt::one(), BigInt::zero())
    };
    let mut contacts = BigInt::zero();
    let mut sum_sq = BigInt::zero();
    let mut max_gap = BigInt::zero();
    let mut note = |g: BigInt, times: &BigInt, sum: &mut BigInt, cnt: &mut BigInt| {
        if times.is_positive() {
            *sum += &g * &g * times;
            *cnt += times;
            if g > max_gap {
                max_gap = g;
            }
        }
    };
    for j in 0..small {
        let s = &shift_small + &step_small * BigInt::from(j);
        let e = &s + &step_small;
        // points shift_big + step_big·i strictly inside (s, e)
        let i0 = (&s - &shift_big).div_floor(&step_big) + 1;
        let i1 = (&e - &shift_big - BigInt::one()).div_floor(&step_big);
        if i1 < i0 {
            note(&e - &s, &BigInt::one(), &mut sum_sq, &mut contacts);
            continue;
        }
        let first = &shift_big + &step_big * &i0;
        let last = &shift_big + &step_big * &i1;
        note(&first - &s, &BigInt::one(), &mut sum_sq, &mut contacts);
        note(step_big.clone(), &(&i1 - &i0), &mut sum_sq, &mut contacts);
        note(&e - &last, &BigInt::one(), &mut sum_sq, &mut contacts);
    }
    Ok(RingPairGaps { contacts, sum_sq, max_gap })
}

/// Level energies in floating point for ring sizes too large to build.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelwiseEnergy {
    /// Truncated energy after levels `0 … n`.
    pub energy: Vec<f64>,
    /// `1/a₁ + Σ_{k ≤ n} 4/(a_k + a_{k+1})`.
    pub bound: Vec<f64>,
    /// Largest `θ · (a_n + a_{n+1})/2` seen; at most 1 when the per-edge bound holds.
    pub worst_edge_ratio: f64,
    /// Whether `|E_n| = a_n + a_{n+1}` at every level.
    pub edge_counts_match: bool,
}

/// Flow energies from ring sizes `a₁ … a_{N+1}` by the arc geometry of the construction.
pub fn levelwise_energy(a: &[BigInt]) -> Result<LevelwiseEnergy> {
    if a.len() < 2 {
        return Err(Error::InvalidSpec("need at least two ring sizes".into()));
    }
    let first = ratio_f64(&BigInt::one(), &a[0]);
    let mut energy = vec![first];
    let mut bound = vec![first];
    let mut worst = 0.0f64;
    let mut edge_counts_match = true;
    for n in 1..a.len() {
        let (lo, hi) = (&a[n - 1], &a[n]);
        let g = ring_pair_gaps(lo, hi)?;
        let unit = BigInt::from(2) * lo * hi;
        let e = ratio_f64(&g.sum_sq, &(&unit * &unit));
        let sum = lo + hi;
        edge_counts_match &= g.contacts == sum;
        worst = worst.max(ratio_f64(&(g.max_gap * &sum), &(BigInt::from(2) * &unit)));
        energy.push(energy[n - 1] + e);
        bound.push(bound[n - 1] + ratio_f64(&BigInt::from(4), &sum));
    }
    Ok(LevelwiseEnergy { energy, bound, worst_edge_ratio: worst, edge_counts_match })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{build_window, hexagonal, ExcessSpec};
    use crate::rational::q;

    #[test]
    fn hex_geodesic_length() {
        let w = build_window(&hexagonal(), 5).unwrap();
        let m = VertexMetric::constant(w.vertex_count(), 1.0);
        let fam = PathFamily::new(&w, vec![0], w.sphere_ids(4).map(|v| v as V).collect()).unwrap();
        assert_eq!(mu_min_length(&w, &m, &fam).unwrap().0, 5.0);
    }

    #[test]
    fn ring_stack_flow() {
        let rs = RingStack::from_sizes(&[3, 6, 4]).unwrap();
        let w = rs.window();
        let f = water_flow(&rs).unwrap();
        assert!(f.is_antisymmetric(w));
        let last = |v: V| w.dist(v) == 3;
        assert!(f.conservation_failures(w, &last).is_empty());
        assert_eq!(f.divergence(w)[0], q(1, 1));
        let e = flow_energy(w, &f, 1).unwrap();
        assert_eq!(e.levels[0].energy, q(1, 3));
        assert!(e.edge_bound_holds() && e.total_bound_holds());
        let g = ring_pair_gaps(&BigInt::from(3), &BigInt::from(6)).unwrap();
        assert_eq!(Q::new(g.sum_sq, BigInt::from(36 * 36)), e.levels[1].energy);
    }

    #[test]
    fn mixed_levels() {
        let a = ExcessSpec::mixed().a_prefix(41).unwrap();
        let le = levelwise_energy(&a).unwrap();
        assert!(le.edge_counts_match);
        assert!(le.worst_edge_ratio <= 1.0);
        assert!(le.energy[40] < le.bound[40]);
    }
}
