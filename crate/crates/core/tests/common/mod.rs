#![allow(dead_code)]

use cptype::generators::{build_window, hexagonal, layered, ring_stack, ExcessSpec, GraphGenerator, LayerSpec};
use cptype::sequences::SeqRule;
use cptype::TriangulationWindow;

/// Windows used by the sweeps stay below this many vertices.
pub const VERTEX_BUDGET: usize = 60_000;

pub fn layered_specs() -> Vec<(&'static str, LayerSpec)> {
    let mut two = LayerSpec::finite(3, &[3, 3], &[1, 2]);
    two.flat_tail = true;
    let mut cg = LayerSpec::finite(0, &[2, 2, 2], &[2, 1, 1]);
    cg.flat_tail = true;
    vec![
        ("two_layer", two),
        ("comparison", cg),
        ("seven_regular", LayerSpec::new(1, SeqRule::constant(1), SeqRule::constant(1))),
        ("h2_d1", LayerSpec::new(0, SeqRule::constant(2), SeqRule::constant(1))),
        (
            "growing_h",
            LayerSpec::new(-2, SeqRule::Polynomial { coeffs: vec![1, 1] }, SeqRule::constant(1)),
        ),
    ]
}

pub fn ring_specs() -> Vec<(&'static str, ExcessSpec)> {
    vec![
        ("three_spheres", ExcessSpec::three_spheres()),
        ("flat", ExcessSpec::constant(0)),
        ("k2", ExcessSpec::constant(2)),
        ("linear_k", ExcessSpec::from_k(SeqRule::then(&[-2], SeqRule::Polynomial { coeffs: vec![-6, 1] }))),
        ("mixed", ExcessSpec::mixed()),
    ]
}

/// Independent degree excess of sphere `m` of a layered spec: walk the `h` values.
pub fn layer_excess_oracle(spec: &LayerSpec, m: u64) -> Option<i64> {
    if m == 0 {
        return Some(spec.k0);
    }
    let mut theta = 0i64;
    let mut k = 0u64;
    loop {
        let h = match spec.h.get(k) {
            Some(h) => i64::try_from(h).ok()?,
            None if spec.flat_tail => return Some(0),
            None => return None,
        };
        theta += h;
        if theta == m as i64 {
            return i64::try_from(spec.d.get(k)?).ok();
        }
        if theta > m as i64 {
            return Some(0);
        }
        k += 1;
    }
}

/// Sphere sizes `|S_0| … |S_n|` predicted from per-sphere excess, assuming an empty cut
/// locus: `|S_{n+1}| = |S_n| + k_n + 6`. Saturates on overflow.
pub fn spheres_from_excess(excess: impl Fn(u64) -> Option<i64>, n: usize) -> Option<(Vec<i64>, Vec<i64>)> {
    let mut spheres = vec![1i64];
    let mut k = Vec::new();
    let mut acc = 0i64;
    for m in 0..n {
        let e = excess(m as u64)?;
        acc = acc.saturating_add(e.saturating_mul(spheres[m]));
        k.push(acc);
        let next = if m == 0 { acc + 6 } else { spheres[m].saturating_add(acc).saturating_add(6) };
        spheres.push(next);
    }
    Some((spheres, k))
}

/// Largest radius `≤ cap` whose window has at most `VERTEX_BUDGET` vertices, using the
/// predicted sphere sizes (plus one frontier sphere).
pub fn affordable_radius(spheres: &[i64], cap: usize) -> u32 {
    let mut total = 0i64;
    let mut best = 1;
    for (r, &s) in spheres.iter().enumerate() {
        total = total.saturating_add(s);
        let next = spheres.get(r + 1).copied().unwrap_or(s);
        if r >= 1 && r <= cap && total.saturating_add(next) <= VERTEX_BUDGET as i64 {
            best = r;
        }
    }
    best as u32
}

pub fn layered_window(spec: &LayerSpec, cap: usize) -> (TriangulationWindow, u32) {
    let (spheres, _) = spheres_from_excess(|m| layer_excess_oracle(spec, m), cap + 2).expect("infinite spec");
    let r = affordable_radius(&spheres, cap.min(spheres.len() - 2));
    (build_window(&layered(spec.clone()), r).unwrap(), r)
}

pub fn ring_window(spec: &ExcessSpec, cap: usize) -> (TriangulationWindow, u32) {
    let mut spheres = vec![1i64];
    for a in spec.a_prefix(cap + 1).unwrap() {
        spheres.push(i64::try_from(&a).unwrap_or(i64::MAX / 4));
    }
    let r = affordable_radius(&spheres, cap);
    (build_window(&ring_stack(spec.clone()), r).unwrap(), r)
}

/// Every test window, with the largest radius used for sweeps.
pub fn all_windows(cap: usize) -> Vec<(String, GraphGenerator, TriangulationWindow, u32)> {
    let mut out = Vec::new();
    let hr = cap.min(40) as u32;
    out.push(("hexagonal".to_string(), hexagonal(), build_window(&hexagonal(), hr).unwrap(), hr));
    for (name, spec) in layered_specs() {
        let (w, r) = layered_window(&spec, cap);
        out.push((format!("layered/{name}"), layered(spec), w, r));
    }
    for (name, spec) in ring_specs() {
        let (w, r) = ring_window(&spec, cap);
        out.push((format!("ring/{name}"), ring_stack(spec), w, r));
    }
    out
}
