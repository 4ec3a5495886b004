//! Degree-excess profiles, series criteria, cut loci, subgraph scans and hyperbolicity
//! certificates.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::curvature::{extra_edge_identity, inner_left_turn, interior_curvature, vertex_curvature};
use crate::error::{Error, Result};
use crate::generators::{ExcessSpec, GraphGenerator};
use crate::rational::{fmt_q, q, qi, Q};
use crate::regions::{closed_neighborhood, fill_holes, interior_graph, main_body_unchecked};
use crate::selection::SubgraphSelection;
use crate::sequences::{adjacent_sum_growth, big_to_f64, Growth};
use crate::window::{TriangulationWindow, V};

/// Default number of subgraphs a scan may visit.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Per-radius degree data around `v0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcessProfile {
    pub v0: V,
    pub n_max: u32,
    /// `k_n = Σ_{v ∈ B_n} (deg v - 6)` for `n = 0 … n_max`.
    pub k: Vec<i64>,
    /// `a_n = Σ_{j<n} (k_j + 6)` for `n = 0 … n_max + 1` (`a_0 = 0`).
    pub a: Vec<i64>,
    /// `|S_n|` for `n = 0 … n_max + 1`.
    pub sphere: Vec<usize>,
    /// `|∂B_n|` for `n = 0 … n_max`.
    pub edge_boundary: Vec<usize>,
    /// Number of boundary cycles `m` of the main body `A_n`.
    pub m: Vec<usize>,
    /// `|bA_n|`.
    pub boundary_len: Vec<usize>,
    pub extra_edges: Vec<i64>,
    /// `k_n - (6m - 12 + extra)`.
    pub degreex_residual: Vec<i64>,
}

pub fn excess_profile(w: &TriangulationWindow, v0: V, n_max: u32) -> Result<ExcessProfile> {
    w.check_vertex(v0)?;
    let need = w.dist(v0) + n_max + 1;
    if !w.is_fragment() && need > w.complete_radius() {
        return Err(Error::WindowTooSmall { needed: need, have: w.complete_radius() });
    }
    let dist = w.bfs(v0, Some(n_max + 1));
    let mut sphere = vec![0usize; n_max as usize + 2];
    for &d in &dist {
        if d <= n_max + 1 {
            sphere[d as usize] += 1;
        }
    }
    let mut excess_by_layer = vec![0i64; n_max as usize + 1];
    let mut edge_boundary = vec![0usize; n_max as usize + 1];
    for v in 0..w.vertex_count() as V {
        let d = dist[v as usize];
        if d <= n_max {
            let deg = w.degree(v)? as i64;
            excess_by_layer[d as usize] += deg - 6;
            edge_boundary[d as usize] +=
                w.rotation(v).iter().filter(|&&u| dist[u as usize] == d + 1).count();
        }
    }
    let mut k = Vec::new();
    let mut acc = 0;
    for e in &excess_by_layer {
        acc += e;
        k.push(acc);
    }
    let mut a = vec![0i64];
    for j in 0..=n_max as usize {
        a.push(a[j] + k[j] + 6);
    }
    let mut m = Vec::new();
    let mut boundary_len = Vec::new();
    let mut extra_edges = Vec::new();
    let mut degreex_residual = Vec::new();
    for n in 0..=n_max {
        let mb = main_body_unchecked(w, v0, n)?;
        let rep = extra_edge_identity(&mb.body)?;
        m.push(mb.m());
        boundary_len.push(mb.walk.len());
        extra_edges.push(rep.extra_total);
        degreex_residual.push(rep.residual);
    }
    Ok(ExcessProfile {
        v0,
        n_max,
        k,
        a,
        sphere,
        edge_boundary,
        m,
        boundary_len,
        extra_edges,
        degreex_residual,
    })
}

impl ExcessProfile {
    /// `|S_{n+1}| ≤ a_{n+1}` for every `n` in range.
    pub fn sphere_bound_holds(&self) -> bool {
        (1..self.a.len()).all(|n| self.sphere[n] as i64 <= self.a[n])
    }

    /// `|∂B_n| ≤ a_n + a_{n+1}`.
    pub fn edge_bound_holds(&self) -> bool {
        (0..self.edge_boundary.len())
            .all(|n| self.edge_boundary[n] as i64 <= self.a[n] + self.a[n + 1])
    }

    /// `|S_{n+1}| ≤ |bA_n| + extra` for `n ≥ 1`.
    pub fn next_sphere_bound_holds(&self) -> bool {
        (1..self.boundary_len.len()).all(|n| {
            self.sphere[n + 1] as i64 <= self.boundary_len[n] as i64 + self.extra_edges[n]
        })
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("n,k_n,a_n,sphere,edge_boundary,m,boundary_len,extra_edges,degreex_residual\n");
        for n in 0..=self.n_max as usize {
            s += &format!(
                "{n},{},{},{},{},{},{},{},{}\n",
                self.k[n],
                self.a[n],
                self.sphere[n],
                self.edge_boundary[n],
                self.m[n],
                self.boundary_len[n],
                self.extra_edges[n],
                self.degreex_residual[n]
            );
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Divergent,
    Convergent,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Justification {
    SymbolicRule,
    ComparisonTest,
    PrefixOnly,
}

/// A running sum in floating point with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialSum {
    pub terms: usize,
    pub value: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesVerdict {
    pub partial_sums: Vec<PartialSum>,
    pub verdict: Verdict,
    pub justification: Justification,
}

impl SeriesVerdict {
    pub fn last(&self) -> Option<PartialSum> {
        self.partial_sums.last().copied()
    }
}

/// Accumulates nonnegative terms, keeping the sum at every index in `marks`.
#[derive(Clone, Debug)]
pub struct Summer {
    value: f64,
    error: f64,
    terms: usize,
    out: Vec<PartialSum>,
}

impl Default for Summer {
    fn default() -> Self {
        Self::new()
    }
}

impl Summer {
    pub fn new() -> Self {
        Summer { value: 0.0, error: 0.0, terms: 0, out: Vec::new() }
    }

    /// Adds a term computed with relative error at most `rel`.
    pub fn add(&mut self, t: f64, rel: f64) {
        self.value += t;
        self.error += t.abs() * rel + self.value.abs() * f64::EPSILON;
        self.terms += 1;
        self.out.push(PartialSum { terms: self.terms, value: self.value, error: self.error });
    }

    pub fn finish(self) -> Vec<PartialSum> {
        self.out
    }
}

/// `1/x` with its relative error bound.
fn recip(x: &BigInt) -> (f64, f64) {
    (1.0 / big_to_f64(x), 2.0 * f64::EPSILON)
}

fn classify(branches: Option<Vec<Growth>>) -> (Verdict, Justification) {
    match branches {
        None => (Verdict::Undecided, Justification::PrefixOnly),
        Some(b) => {
            if b.iter().any(|g| g.reciprocal_diverges()) {
                (Verdict::Divergent, Justification::SymbolicRule)
            } else if b.iter().all(|g| *g >= Growth::Poly(2)) {
                (Verdict::Convergent, Justification::SymbolicRule)
            } else {
                (Verdict::Undecided, Justification::SymbolicRule)
            }
        }
    }
}

/// Growth classes of `a_n` for a spec, when symbolic.
pub fn a_growth(spec: &ExcessSpec) -> Option<Vec<Growth>> {
    match (spec.k_rule(), spec.a_rule()) {
        (Some(k), _) => k.cumulative_growth(),
        (_, Some(a)) => a.growth(),
        _ => None,
    }
}

/// `Σ 1/a_n` and `Σ 1/(a_n + a_{n+1})` over `n = 1 … terms`.
pub fn series_t1(spec: &ExcessSpec, terms: usize) -> Result<(SeriesVerdict, SeriesVerdict)> {
    let a = spec.a_prefix(terms + 1)?;
    let mut s1 = Summer::new();
    let mut s2 = Summer::new();
    for n in 0..terms {
        let (t, r) = recip(&a[n]);
        s1.add(t, r);
        let (t, r) = recip(&(&a[n] + &a[n + 1]));
        s2.add(t, r);
    }
    let g = a_growth(spec);
    let (v1, j1) = classify(g.clone());
    let (v2, j2) = classify(g.map(|b| adjacent_sum_growth(&b)));
    Ok((
        SeriesVerdict { partial_sums: s1.finish(), verdict: v1, justification: j1 },
        SeriesVerdict { partial_sums: s2.finish(), verdict: v2, justification: j2 },
    ))
}

/// Symbolic growth of `|S_n|` and `|∂B_n|` for the generators where it is known.
pub fn generator_growth(gen: &GraphGenerator) -> (Option<Vec<Growth>>, Option<Vec<Growth>>) {
    match gen {
        GraphGenerator::Hexagonal => (Some(vec![Growth::Linear]), Some(vec![Growth::Linear])),
        GraphGenerator::RingStack(spec) => {
            let g = a_growth(spec);
            (g.clone(), g.map(|b| adjacent_sum_growth(&b)))
        }
        GraphGenerator::Layered(_) => (None, None),
    }
}

fn series_from(values: &[usize], growth: Option<Vec<Growth>>) -> SeriesVerdict {
    let mut s = Summer::new();
    for &x in values {
        s.add(1.0 / x as f64, f64::EPSILON);
    }
    let (verdict, justification) = classify(growth);
    SeriesVerdict { partial_sums: s.finish(), verdict, justification }
}

/// `Σ 1/|S_n|` over `n = 1 … n_max + 1`.
pub fn series_rodin_sullivan(p: &ExcessProfile, growth: Option<Vec<Growth>>) -> SeriesVerdict {
    series_from(&p.sphere[1..], growth)
}

/// `Σ 1/|∂B_n|` over `n = 0 … n_max`.
pub fn series_nash_williams(p: &ExcessProfile, growth: Option<Vec<Growth>>) -> SeriesVerdict {
    series_from(&p.edge_boundary, growth)
}

fn require_radius(w: &TriangulationWindow, x: V, n: u32) -> Result<()> {
    let need = w.dist(x) + n + 1;
    if !w.is_fragment() && need > w.complete_radius() {
        return Err(Error::WindowTooSmall { needed: need, have: w.complete_radius() });
    }
    Ok(())
}

/// `C(x) ∩ B_{n_max}(x)`: vertices where `d(x, ·)` has a local maximum.
pub fn cut_locus(w: &TriangulationWindow, x: V, n_max: u32) -> Result<Vec<V>> {
    w.check_vertex(x)?;
    require_radius(w, x, n_max)?;
    let d = w.bfs(x, Some(n_max + 1));
    Ok((0..w.vertex_count() as V)
        .filter(|&v| d[v as usize] <= n_max)
        .filter(|&v| w.rotation(v).iter().all(|&u| d[u as usize] <= d[v as usize]))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degree6Report {
    /// `|S_n| - a_n` for `n = 1 … n_max`.
    pub sphere_residuals: Vec<i64>,
    /// `|B_n| - (1 + Σ_{k ≤ n} a_k)`.
    pub ball_residuals: Vec<i64>,
}

/// Sphere and ball sizes against `a_n` when `v0` has no cut locus in range.
pub fn verify_degree6_identity(w: &TriangulationWindow, v0: V, n_max: u32) -> Result<Degree6Report> {
    let c = cut_locus(w, v0, n_max)?;
    if !c.is_empty() {
        return Err(Error::Hypothesis(format!(
            "{} vertices of the cut locus lie within distance {n_max}",
            c.len()
        )));
    }
    let p = excess_sizes(w, v0, n_max)?;
    let mut sphere_residuals = Vec::new();
    let mut ball_residuals = Vec::new();
    let mut ball = 1i64;
    let mut sum_a = 0i64;
    for n in 1..=n_max as usize {
        ball += p.1[n] as i64;
        sum_a += p.0[n];
        sphere_residuals.push(p.1[n] as i64 - p.0[n]);
        ball_residuals.push(ball - (1 + sum_a));
    }
    Ok(Degree6Report { sphere_residuals, ball_residuals })
}

/// `a_n` (`n = 0 … n_max`) and `|S_n|`, without main bodies.
fn excess_sizes(w: &TriangulationWindow, v0: V, n_max: u32) -> Result<(Vec<i64>, Vec<usize>)> {
    require_radius(w, v0, n_max)?;
    let dist = w.bfs(v0, Some(n_max));
    let mut sphere = vec![0usize; n_max as usize + 1];
    let mut ex = vec![0i64; n_max as usize + 1];
    for v in 0..w.vertex_count() as V {
        let d = dist[v as usize];
        if d <= n_max {
            sphere[d as usize] += 1;
            if d < n_max {
                ex[d as usize] += w.degree(v)? as i64 - 6;
            }
        }
    }
    let mut a = vec![0i64];
    let mut k = 0;
    for j in 0..n_max as usize {
        k += ex[j];
        a.push(a[j] + k + 6);
    }
    Ok((a, sphere))
}

/// Whether `∂B_n` is exactly the set of edges between `S_n` and `S_{n+1}`.
pub fn edge_boundary_is_sphere_cut(w: &TriangulationWindow, v0: V, n: u32) -> Result<bool> {
    let ball = SubgraphSelection::ball(w, v0, n)?;
    let d = w.bfs(v0, Some(n + 1));
    let eb: BTreeSet<(V, V)> = ball.edge_boundary()?.into_iter().collect();
    let mut cut = BTreeSet::new();
    for (a, b, _) in w.edges() {
        let (da, db) = (d[a as usize], d[b as usize]);
        if da == n && db == n + 1 {
            cut.insert((a, b));
        } else if db == n && da == n + 1 {
            cut.insert((b, a));
        }
    }
    Ok(eb == cut)
}

/// One connected subgraph met by a scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanItem {
    pub vertices: Vec<V>,
    pub size: usize,
    pub vertex_boundary: usize,
    pub degree_sum: u64,
    pub kappa: Q,
}

/// Vertices whose full neighborhood is known.
fn scannable(w: &TriangulationWindow, v: V) -> bool {
    w.is_complete(v)
}

struct Enumerator<'a> {
    w: &'a TriangulationWindow,
    cap: usize,
    budget: u64,
    visited: u64,
}

impl Enumerator<'_> {
    /// Visits every connected `S ⊇ s` of size at most `cap` whose vertices avoid
    /// `excluded`, once each. `visit` returns `false` to prune the subtree below `S`.
    fn run(
        &mut self,
        s: &mut Vec<V>,
        in_s: &mut HashSet<V>,
        cand: Vec<V>,
        excluded: &mut HashSet<V>,
        visit: &mut dyn FnMut(&[V]) -> Result<bool>,
    ) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        if !visit(s)? || s.len() >= self.cap {
            return Ok(());
        }
        let mut added = Vec::new();
        for i in 0..cand.len() {
            let u = cand[i];
            let mut next: Vec<V> = cand[i + 1..].to_vec();
            let known: HashSet<V> = cand.iter().copied().collect();
            for &x in self.w.rotation(u) {
                if !in_s.contains(&x) && !known.contains(&x) && !excluded.contains(&x) && scannable(self.w, x) && !next.contains(&x) {
                    next.push(x);
                }
            }
            s.push(u);
            in_s.insert(u);
            self.run(s, in_s, next, excluded, visit)?;
            s.pop();
            in_s.remove(&u);
            excluded.insert(u);
            added.push(u);
        }
        for u in added {
            excluded.remove(&u);
        }
        Ok(())
    }
}

fn start_scan(
    w: &TriangulationWindow,
    s0: &[V],
    cap: usize,
    budget: u64,
    visit: &mut dyn FnMut(&[V]) -> Result<bool>,
) -> Result<u64> {
    if s0.is_empty() {
        return Err(Error::EmptySelection);
    }
    for &v in s0 {
        w.check_vertex(v)?;
        if !scannable(w, v) {
            return Err(Error::Frontier(v));
        }
    }
    let sel = SubgraphSelection::induced(w, s0.iter().copied())?;
    if !sel.is_connected() {
        return Err(Error::Disconnected);
    }
    let in_s: HashSet<V> = s0.iter().copied().collect();
    let mut cand = Vec::new();
    for &v in s0 {
        for &u in w.rotation(v) {
            if !in_s.contains(&u) && scannable(w, u) && !cand.contains(&u) {
                cand.push(u);
            }
        }
    }
    let mut e = Enumerator { w, cap, budget, visited: 0 };
    let mut s = s0.to_vec();
    let mut in_s = in_s;
    e.run(&mut s, &mut in_s, cand, &mut HashSet::new(), visit)?;
    Ok(e.visited)
}

fn scan_item(w: &TriangulationWindow, verts: &[V]) -> Result<ScanItem> {
    let set: HashSet<V> = verts.iter().copied().collect();
    let mut boundary = HashSet::new();
    let mut degree_sum = 0u64;
    let mut kappa = Q::zero();
    for &v in verts {
        degree_sum += w.degree(v)? as u64;
        kappa += vertex_curvature(w, v)?;
        for &u in w.rotation(v) {
            if !set.contains(&u) {
                boundary.insert(u);
            }
        }
    }
    let mut vertices = verts.to_vec();
    vertices.sort_unstable();
    Ok(ScanItem { size: vertices.len(), vertices, vertex_boundary: boundary.len(), degree_sum, kappa })
}

/// Every connected induced `S ⊇ S₀` of size at most `size_cap` inside the completed
/// region, each reported once.
pub fn subgraph_scan(
    w: &TriangulationWindow,
    s0: &[V],
    size_cap: usize,
    budget: u64,
    mut emit: impl FnMut(ScanItem),
) -> Result<u64> {
    start_scan(w, s0, size_cap, budget, &mut |s| {
        emit(scan_item(w, s)?);
        Ok(true)
    })
}

/// The function `g` of the perimetric criterion: `g(x) = x^α (ln(1+x))^β`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GFunction {
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
}

impl GFunction {
    pub fn power(alpha: f64) -> Self {
        GFunction { alpha, beta: 0.0 }
    }

    pub fn eval(&self, x: usize) -> f64 {
        let x = x as f64;
        x.powf(self.alpha) * (1.0 + x).ln().powf(self.beta)
    }

    /// Whether `Σ 1/g(n)²` converges.
    pub fn square_summable(&self) -> bool {
        self.alpha > 0.5 || (self.alpha == 0.5 && self.beta > 0.5)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateData {
    Partition {
        #[serde(with = "crate::rational::serde_q")]
        epsilon: Q,
        k: usize,
        parts: Vec<Vec<V>>,
        /// `κ` of each part, `"p/q"`.
        kappas: Vec<String>,
    },
    BallDegree {
        k: u32,
        /// `(center, vertex of degree ≥ 7 within distance k)`.
        witnesses: Vec<(V, V)>,
        failures: Vec<V>,
    },
    Perimetric {
        g: GFunction,
        s0: Vec<V>,
        size_cap: usize,
        min_ratio: f64,
        argmin: Vec<V>,
        visited: u64,
    },
}

/// Evidence for hyperbolicity at the scale of one window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityCertificate {
    pub passed: bool,
    pub complete_radius: u32,
    pub data: CertificateData,
    pub note: String,
}

const SCALE_NOTE: &str =
    "checked on a finite window only; evidence at this scale, not a proof for the infinite graph";

impl HyperbolicityCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Re-checks the stated conditions from the witness data.
    pub fn recheck(&self, w: &TriangulationWindow) -> Result<bool> {
        match &self.data {
            CertificateData::Partition { epsilon, k, parts, .. } => {
                Ok(partition_certificate(w, parts, epsilon.clone(), *k)?.passed == self.passed)
            }
            CertificateData::BallDegree { k, witnesses, failures } => {
                for &(c, u) in witnesses {
                    let d = w.bfs(c, Some(*k));
                    if d[u as usize] > *k || w.degree(u)? < 7 {
                        return Ok(false);
                    }
                }
                Ok(self.passed == failures.is_empty())
            }
            CertificateData::Perimetric { g, argmin, min_ratio, .. } => {
                let item = scan_item(w, argmin)?;
                let r = (item.degree_sum as f64 - 6.0 * item.size as f64) / g.eval(item.size);
                Ok((r - min_ratio).abs() <= 1e-12 * r.abs().max(1.0))
            }
        }
    }
}

/// Partition check: each part connected, at most `k` vertices and
/// `κ(part) ≤ -ε`. The parts must exactly cover the complete vertices of the window.
pub fn partition_certificate(
    w: &TriangulationWindow,
    parts: &[Vec<V>],
    epsilon: Q,
    k: usize,
) -> Result<HyperbolicityCertificate> {
    let mut seen = vec![false; w.vertex_count()];
    for part in parts {
        for &v in part {
            w.check_vertex(v)?;
            if !w.is_complete(v) {
                return Err(Error::InvalidPartition(format!("vertex {v} is on the frontier")));
            }
            if seen[v as usize] {
                return Err(Error::InvalidPartition(format!("vertex {v} lies in two parts")));
            }
            seen[v as usize] = true;
        }
    }
    if let Some(v) = (0..w.vertex_count()).find(|&v| w.is_complete(v as V) && !seen[v]) {
        return Err(Error::InvalidPartition(format!("vertex {v} is not covered")));
    }
    let mut passed = true;
    let mut kappas = Vec::new();
    for part in parts {
        let sel = SubgraphSelection::induced(w, part.iter().copied())?;
        let mut kappa = Q::zero();
        for &v in part {
            kappa += vertex_curvature(w, v)?;
        }
        if part.is_empty() || part.len() > k || !sel.is_connected() || kappa > -epsilon.clone() {
            passed = false;
        }
        kappas.push(fmt_q(&kappa));
    }
    Ok(HyperbolicityCertificate {
        passed,
        complete_radius: w.complete_radius(),
        data: CertificateData::Partition { epsilon, k, parts: parts.to_vec(), kappas },
        note: SCALE_NOTE.into(),
    })
}

/// Every complete vertex as its own part.
pub fn singleton_partition(w: &TriangulationWindow) -> Vec<Vec<V>> {
    (0..w.vertex_count() as V).filter(|&v| w.is_complete(v)).map(|v| vec![v]).collect()
}

/// Checks that every ball `B_k(v)` whose vertices are all complete contains a vertex of
/// degree at least 7. Requires `deg ≥ 6` on every complete vertex.
pub fn ball_degree_certificate(w: &TriangulationWindow, k: u32) -> Result<HyperbolicityCertificate> {
    for v in 0..w.vertex_count() as V {
        if w.is_complete(v) && w.degree(v)? < 6 {
            return Err(Error::Hypothesis(format!("vertex {v} has degree {}", w.degree(v)?)));
        }
    }
    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    for v in 0..w.vertex_count() as V {
        if !w.is_fragment() && w.dist(v) + k + 1 > w.complete_radius() {
            continue;
        }
        let d = w.bfs(v, Some(k));
        let found = (0..w.vertex_count() as V)
            .filter(|&u| d[u as usize] <= k)
            .find(|&u| w.degree(u).map(|x| x >= 7).unwrap_or(false));
        match found {
            Some(u) => witnesses.push((v, u)),
            None => failures.push(v),
        }
    }
    Ok(HyperbolicityCertificate {
        passed: failures.is_empty() && !witnesses.is_empty(),
        complete_radius: w.complete_radius(),
        data: CertificateData::BallDegree { k, witnesses, failures },
        note: SCALE_NOTE.into(),
    })
}

/// Minimum of `Σ_{v ∈ S} (deg v - 6) / g(|S|)` over connected `S ⊇ S₀` of size at most
/// `size_cap`, by branch and bound on the scan tree.
pub fn perimetric_certificate(
    w: &TriangulationWindow,
    s0: &[V],
    g: GFunction,
    size_cap: usize,
    budget: u64,
) -> Result<HyperbolicityCertificate> {
    let min_excess = (0..w.vertex_count() as V)
        .filter(|&v| scannable(w, v))
        .map(|v| w.degree(v).map(|d| d as i64 - 6))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .unwrap_or(0);
    let mut best = f64::INFINITY;
    let mut argmin = Vec::new();
    let visited = start_scan(w, s0, size_cap, budget, &mut |s| {
        let mut excess = 0i64;
        for &v in s {
            excess += w.degree(v)? as i64 - 6;
        }
        let r = excess as f64 / g.eval(s.len());
        if r < best {
            best = r;
            argmin = s.to_vec();
        }
        // smallest ratio reachable by adding vertices
        let bound = (s.len() + 1..=size_cap)
            .map(|t| (excess + (t - s.len()) as i64 * min_excess) as f64 / g.eval(t))
            .fold(f64::INFINITY, f64::min);
        Ok(bound < best)
    })?;
    argmin.sort_unstable();
    Ok(HyperbolicityCertificate {
        passed: best > 0.0 && g.square_summable(),
        complete_radius: w.complete_radius(),
        data: CertificateData::Perimetric {
            g,
            s0: s0.to_vec(),
            size_cap,
            min_ratio: best,
            argmin,
            visited,
        },
        note: SCALE_NOTE.into(),
    })
}

/// `(|∂S|/Vol(S), |bS|/|F(S)|, |dS|/|V(S)|, |d₀S|/|V(S)|)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoperimetricRatios {
    pub edge: Q,
    pub face: Q,
    pub vertex: Q,
    pub inner_vertex: Q,
}

pub fn isoperimetric_ratios(s: &SubgraphSelection) -> Result<IsoperimetricRatios> {
    s.require_complete()?;
    if s.face_count() == 0 {
        return Err(Error::Hypothesis("F(S) is empty".into()));
    }
    let nv = s.vertex_count() as i64;
    let vol = s.vertices().iter().map(|&v| s.window().degree(v)).sum::<Result<usize>>()? as i64;
    Ok(IsoperimetricRatios {
        edge: q(s.edge_boundary()?.len() as i64, vol),
        face: q(s.boundary_walk()?.len() as i64, s.face_count() as i64),
        vertex: q(s.vertex_boundary()?.len() as i64, nv),
        inner_vertex: q(s.inner_vertex_boundary()?.len() as i64, nv),
    })
}

/// The inequality chain attached to a connected `S`: `T = S ∪ dS`, `W` = `T` with holes
/// filled, `Z = W \ bW`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoleFillReport {
    pub t_size: usize,
    pub w_size: usize,
    pub z_size: usize,
    /// `|dS|`, `|dZ|`, `|V(bW)|`.
    pub ds: usize,
    pub dz: usize,
    pub bw: usize,
    pub dz_is_bw: bool,
    pub s_in_z: bool,
    pub z_connected: bool,
    /// `τ_i(b_i W)`.
    pub tau_i: Q,
    /// `-6 κ(W₋)` and `Σ_Z (deg - 6)`.
    pub minus_six_kappa: Q,
    pub z_excess: i64,
    pub chi: i64,
}

impl HoleFillReport {
    /// Every step: `6τ_i ≤ |V(bW)| = |dZ| ≤ |dS|`, `-6κ(W₋) = Σ_Z(deg - 6) = 6τ_i - 6χ`,
    /// `χ(W₋) = 1`.
    pub fn holds(&self) -> bool {
        let six_tau = qi(6) * &self.tau_i;
        self.dz_is_bw
            && self.s_in_z
            && self.z_connected
            && six_tau <= qi(self.bw as i64)
            && self.dz <= self.ds
            && self.minus_six_kappa == qi(self.z_excess)
            && self.minus_six_kappa == &six_tau - qi(6 * self.chi)
            && self.chi == 1
            && self.minus_six_kappa <= qi(self.dz as i64 - 6)
    }
}

pub fn hole_fill_chain(s: &SubgraphSelection) -> Result<HoleFillReport> {
    if !s.is_connected() {
        return Err(Error::Disconnected);
    }
    let w = s.window();
    let t = closed_neighborhood(s)?;
    let filled = fill_holes(&t)?;
    let z = interior_graph(&filled)?;
    let bw = filled.boundary_walk()?.vertex_set();
    let dz: BTreeSet<V> = z.vertex_boundary()?.into_iter().collect();
    let tau_i = inner_left_turn(w, &filled.inner_boundary_walk()?)?.total;
    let minus_six_kappa = -qi(6) * interior_curvature(&filled)?;
    let z_excess = z.degree_sum()? as i64 - 6 * z.vertex_count() as i64;
    Ok(HoleFillReport {
        t_size: t.vertex_count(),
        w_size: filled.vertex_count(),
        z_size: z.vertex_count(),
        ds: s.vertex_boundary()?.len(),
        dz: dz.len(),
        bw: bw.len(),
        dz_is_bw: dz == bw,
        s_in_z: s.vertices().iter().all(|&v| z.contains(v)),
        z_connected: z.is_connected(),
        tau_i,
        minus_six_kappa,
        z_excess,
        chi: filled.interior_euler_characteristic()?,
    })
}

/// Inclusions from the two-vertex-boundary comparison: for `T = S ∪ dS`, `d₀T ⊆ dS`; for
/// `T = S \ d₀S` (when nonempty), `dT ⊆ d₀S`.
pub fn boundary_inclusions(s: &SubgraphSelection) -> Result<(bool, Option<bool>)> {
    let w = s.window();
    let ds: BTreeSet<V> = s.vertex_boundary()?.into_iter().collect();
    let d0s: BTreeSet<V> = s.inner_vertex_boundary()?.into_iter().collect();
    let grown = closed_neighborhood(s)?;
    let first = grown.inner_vertex_boundary()?.iter().all(|v| ds.contains(v));
    let core: Vec<V> = s.vertices().iter().copied().filter(|v| !d0s.contains(v)).collect();
    let second = if core.is_empty() {
        None
    } else {
        let shrunk = SubgraphSelection::induced(w, core)?;
        Some(shrunk.vertex_boundary()?.iter().all(|v| d0s.contains(v)))
    };
    Ok((first, second))
}

/// `Σ (deg v - 6) = -6 κ(S)` holds for triangulation windows.
pub fn excess_matches_curvature(item: &ScanItem) -> bool {
    qi(item.degree_sum as i64 - 6 * item.size as i64) == -qi(6) * &item.kappa
}

/// Whether `x` is not negative, for big integers read from specs.
pub fn nonnegative(x: &BigInt) -> bool {
    !x.is_negative()
}
