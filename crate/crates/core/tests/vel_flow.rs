use cptype::generators::{
    build_window, hexagonal, ring_stack, triangular_mesh, ExcessSpec, MeshSpec, RingStack, SquareTiling,
};
use cptype::rational::{q, to_f64};
use cptype::sequences::SeqRule;
use cptype::vel::*;
use cptype::{Q, TriangulationWindow, V};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

const TOL: f64 = 1e-7;

fn solve(w: &TriangulationWindow, fam: &PathFamily) -> VelSolution {
    vel_solve(w, fam, TOL, DEFAULT_ROUNDS).unwrap()
}

#[test]
fn single_vertex_family() {
    let w = build_window(&hexagonal(), 3).unwrap();
    let fam = PathFamily::new(&w, vec![5], vec![5]).unwrap();
    let s = solve(&w, &fam);
    assert!((s.value - 1.0).abs() < 1e-9);
}

/// Ring stacks with constant ring size `m` are symmetric under rotation by `1/m`, so the
/// extremal metric is constant on each sphere and the value is `1 + k/m`.
#[test]
fn constant_rings_add_one_over_m_per_sphere() {
    for m in [3i64, 4, 5] {
        let spec = ExcessSpec::from_a(SeqRule::constant(m));
        let w = build_window(&ring_stack(spec), 7).unwrap();
        for k in 1..=5u32 {
            let top = w.sphere_ids(k).map(|v| v as V).collect();
            let fam = PathFamily::new(&w, vec![0], top).unwrap();
            let s = solve(&w, &fam);
            let expect = 1.0 + k as f64 / m as f64;
            assert!((s.value - expect).abs() < 1e-5, "m = {m}, k = {k}: {}", s.value);
            assert!(s.upper >= s.value);
        }
    }
}

#[test]
fn mesh_values_are_harmonic() {
    for n in 1..=5u32 {
        let w = triangular_mesh(&MeshSpec::single(n)).unwrap();
        let d = w.bfs(w.root(), None);
        let far = w.max_dist();
        let top = (0..w.vertex_count() as V).filter(|&v| d[v as usize] == far).collect();
        let s = solve(&w, &PathFamily::new(&w, vec![w.root()], top).unwrap());
        let h: f64 = (1..=n + 1).map(|k| 1.0 / k as f64).sum();
        assert!((s.value - h).abs() < 1e-5, "n = {n}: {} vs {h}", s.value);
    }
}

#[test]
fn tiling_side_lengths_are_extremal() {
    for a in [vec![3u64], vec![4, 4], vec![3, 9], vec![3, 4, 5], vec![6, 3, 7]] {
        let t = SquareTiling::rings(&a).unwrap();
        let ex = vel_exact_tiling(&t).unwrap();
        // the tiling height, summed independently
        let h: Q = a.iter().map(|&m| q(1, m as i64)).sum();
        assert_eq!(ex.value, h);
        let mu = ex.metric();
        let (len, _) = mu_min_length(&ex.window, &mu, &ex.family).unwrap();
        assert!((len - to_f64(&h)).abs() < 1e-12);
        // unit width, so the area is the height too
        assert!((mu.area() - to_f64(&h)).abs() < 1e-12);
        let s = solve(&ex.window, &ex.family);
        assert!((s.value - to_f64(&h)).abs() < 1e-5, "{a:?}: {}", s.value);
    }
}

#[test]
fn smaller_families_have_larger_values() {
    let w = build_window(&hexagonal(), 4).unwrap();
    let ring: Vec<V> = w.sphere_ids(3).map(|v| v as V).collect();
    let all = solve(&w, &PathFamily::new(&w, vec![0], ring.clone()).unwrap()).value;
    let half = solve(&w, &PathFamily::new(&w, vec![0], ring[..ring.len() / 2].to_vec()).unwrap()).value;
    let one = solve(&w, &PathFamily::new(&w, vec![0], vec![ring[0]]).unwrap()).value;
    assert!(all <= half + 1e-6 && half <= one + 1e-6, "{all} {half} {one}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_ratio_is_scale_invariant(
        mu in proptest::collection::vec(0.0f64..3.0, 37),
        t in 0.01f64..100.0,
        target in 7u32..37,
    ) {
        let w = build_window(&hexagonal(), 3).unwrap();
        let fam = PathFamily::new(&w, vec![0], vec![target]).unwrap();
        let m = VertexMetric { mu };
        prop_assume!(m.area() > 1e-9);
        let (l1, _) = mu_min_length(&w, &m, &fam).unwrap();
        let s = m.scaled(t);
        let (l2, _) = mu_min_length(&w, &s, &fam).unwrap();
        prop_assert!((l2 - t * l1).abs() <= 1e-9 * (1.0 + t * l1));
        let r1 = l1 * l1 / m.area();
        let r2 = l2 * l2 / s.area();
        prop_assert!((r1 - r2).abs() <= 1e-9 * (1.0 + r1));
    }

    #[test]
    fn any_metric_bounds_the_value_from_below(mu in proptest::collection::vec(0.0f64..2.0, 37)) {
        let w = build_window(&hexagonal(), 3).unwrap();
        let top: Vec<V> = w.sphere_ids(2).map(|v| v as V).collect();
        let fam = PathFamily::new(&w, vec![0], top).unwrap();
        let m = VertexMetric { mu };
        prop_assume!(m.area() > 1e-9);
        let (l, _) = mu_min_length(&w, &m, &fam).unwrap();
        let best = solve(&w, &fam);
        prop_assert!(l * l / m.area() <= best.upper + 1e-6);
    }
}

/// Contacts between ring `n` and ring `n+1` from the arc geometry, as exact overlaps.
fn overlap_oracle(rs: &RingStack, n: usize) -> Vec<(u64, u64, BigRational)> {
    let a = rs.sizes();
    let (lo, hi) = (a[n - 1], a[n]);
    let (o1, o2) = (rs.offset(n), rs.offset(n + 1));
    let r = |x: u64, m: u64| BigRational::new(BigInt::from(x), BigInt::from(m));
    let mut out = Vec::new();
    for j in 0..lo {
        for i in 0..hi {
            let (s1, e1) = (&o1 + r(j, lo), &o1 + r(j + 1, lo));
            let mut total = BigRational::zero();
            // the outer arc, shifted by whole turns
            for shift in -1i64..=1 {
                let sh = BigRational::from_integer(BigInt::from(shift));
                let (s2, e2) = (&o2 + r(i, hi) + &sh, &o2 + r(i + 1, hi) + &sh);
                let lo_end = if s1 > s2 { s1.clone() } else { s2 };
                let hi_end = if e1 < e2 { e1.clone() } else { e2 };
                if hi_end > lo_end {
                    total += hi_end - lo_end;
                }
            }
            if total > BigRational::zero() {
                out.push((j, i, total));
            }
        }
    }
    out
}

#[test]
fn water_flow_is_the_arc_overlap() {
    for a in [vec![3u64, 6], vec![3, 6, 4], vec![5, 3, 8, 8, 13]] {
        let rs = RingStack::from_sizes(&a).unwrap();
        let w = rs.window();
        let f = water_flow(&rs).unwrap();
        assert!(f.is_antisymmetric(w));
        for j in 0..a[0] {
            assert_eq!(f.value(w, 0, rs.square(1, j)).unwrap(), &q(1, a[0] as i64));
        }
        for n in 1..a.len() {
            let contacts = overlap_oracle(&rs, n);
            assert_eq!(contacts.len() as u64, a[n - 1] + a[n], "{a:?} level {n}");
            for (j, i, len) in contacts {
                assert_eq!(f.value(w, rs.square(n, j), rs.square(n + 1, i)).unwrap(), &len);
            }
        }
        let div = f.divergence(w);
        assert_eq!(div[0], Q::one());
        let last = a.len();
        let frontier = |v: V| w.dist(v) as usize == last;
        assert!(f.conservation_failures(w, &frontier).is_empty());
    }
}

#[test]
fn three_then_six() {
    let rs = RingStack::from_sizes(&[3, 6, 6]).unwrap();
    let f = water_flow(&rs).unwrap();
    let e = flow_energy(rs.window(), &f, 1).unwrap();
    // level 0: three edges of 1/3; level 1: each inner arc [j/3, (j+1)/3) meets outer arcs
    // shifted by 1/36 in pieces 1/36, 1/6, 5/36
    assert_eq!(e.levels[0].energy, q(1, 3));
    assert_eq!(e.levels[1].edges, 9);
    assert_eq!(e.levels[1].energy, q(31, 216));
    assert_eq!(e.levels[1].max_edge, q(1, 6));
    assert!(e.edge_bound_holds() && e.total_bound_holds());
}

#[test]
fn levelwise_agrees_with_exact_energy() {
    for a in [vec![3u64, 6, 4, 9, 9, 5], vec![3, 3, 3, 3], vec![7, 20, 6, 6, 31]] {
        let rs = RingStack::from_sizes(&a).unwrap();
        let f = water_flow(&rs).unwrap();
        let n = a.len() as u32 - 2;
        let exact = flow_energy(rs.window(), &f, n).unwrap();
        let big: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
        let lw = levelwise_energy(&big).unwrap();
        let mut acc = 0.0;
        for (k, lev) in exact.levels.iter().enumerate() {
            acc += to_f64(&lev.energy);
            assert!((acc - lw.energy[k]).abs() < 1e-12, "{a:?} level {k}");
        }
        assert!(lw.edge_counts_match && lw.worst_edge_ratio <= 1.0 + 1e-12);
    }
}
