mod common;

use cptype::criteria::{Justification, Verdict};
use cptype::generators::{build_window, comparison_graph, layered, LayerSpec};
use cptype::layered_analysis::*;
use cptype::rational::{q, to_f64};
use cptype::sequences::SeqRule;
use cptype::vel::{vel_solve, PathFamily};
use cptype::Q;
use common::*;
use num_bigint::BigInt;
use num_traits::Zero;

/// `c_n = |S_{θ_n}|/(6 + k₀)` from the sphere oracle, never touching the recurrences.
fn c_from_spheres(spec: &LayerSpec, n_max: usize) -> Vec<i64> {
    let mut theta = 0;
    let mut out = vec![0];
    let top: u64 = (1..=n_max as u64).map(|k| spec.h_req(k).unwrap()).sum();
    let (spheres, _) = spheres_from_excess(|m| layer_excess_oracle(spec, m), top as usize).unwrap();
    for k in 1..=n_max as u64 {
        theta += spec.h_req(k).unwrap() as usize;
        let s = spheres[theta];
        assert_eq!(s % (6 + spec.k0), 0);
        out.push(s / (6 + spec.k0));
    }
    out
}

fn specs() -> Vec<(LayerSpec, usize)> {
    vec![
        (LayerSpec::finite(3, &[3, 3], &[1, 2]), 2),
        (LayerSpec::finite(0, &[2, 2, 2], &[2, 1, 1]), 3),
        (LayerSpec::new(1, SeqRule::constant(1), SeqRule::constant(1)), 8),
        (LayerSpec::new(0, SeqRule::constant(2), SeqRule::constant(1)), 6),
        (LayerSpec::new(-2, SeqRule::Polynomial { coeffs: vec![1, 1] }, SeqRule::constant(2)), 4),
        (LayerSpec::finite(-3, &[4, 1, 3, 2], &[3, 1, 2, 1]), 4),
    ]
}

#[test]
fn recurrences_match_sphere_oracle() {
    for (spec, n) in specs() {
        let seq = layer_sequences(&spec, n).unwrap();
        assert!(seq.identities_hold());
        let c = c_from_spheres(&spec, n);
        for k in 0..=n {
            assert_eq!(seq.c[k], BigInt::from(c[k]), "{spec:?} c_{k}");
        }
    }
}

#[test]
fn recurrences_match_generated_windows() {
    for (spec, n) in specs() {
        let n = n.min(4);
        let seq = layer_sequences(&spec, n).unwrap();
        let r = seq.theta[n] as u32 + 1;
        let mut s = spec.clone();
        s.flat_tail = true;
        let w = build_window(&layered(s.clone()), r).unwrap();
        let cc = cross_check_c(&s, &w, 0, n).unwrap();
        assert!(cc.all_zero(), "{spec:?}: {cc:?}");
    }
}

#[test]
fn seven_regular_spheres_are_bisected_fibonacci() {
    let spec = LayerSpec::new(1, SeqRule::constant(1), SeqRule::constant(1));
    let seq = layer_sequences(&spec, 10).unwrap();
    let mut fib = vec![0i64, 1];
    for i in 2..=20 {
        fib.push(fib[i - 1] + fib[i - 2]);
    }
    for n in 1..=10 {
        assert_eq!(seq.c[n], BigInt::from(fib[2 * n]));
    }
    let w = build_window(&layered(spec.clone()), 7).unwrap();
    let sizes: Vec<usize> = (1..=6).map(|n| w.sphere_ids(n).len()).collect();
    assert_eq!(sizes, vec![7, 21, 56, 147, 385, 1008]);
}

#[test]
fn alpha_forms_agree() {
    for (spec, n) in specs() {
        let seq = layer_sequences(&spec, n).unwrap();
        for k in 3..=n {
            assert_eq!(seq.alpha(k), seq.alpha_expanded(k), "{spec:?} n = {k}");
        }
        assert!(seq.alpha_bounds_hold());
    }
}

#[test]
fn lambda_is_a_harmonic_tail() {
    let spec = LayerSpec::new(0, SeqRule::Polynomial { coeffs: vec![1, 1] }, SeqRule::constant(1));
    let seq = layer_sequences(&spec, 6).unwrap();
    for n in 1..=6 {
        let h = n as i64;
        let direct: Q = (2..=h + 1).map(|k| q(1, k)).sum();
        assert_eq!(seq.lambda[n], direct);
        // ln(h+1) - 1 + 1/(h+1) ≤ λ ≤ ln(h+1)
        let l = to_f64(&direct);
        assert!(l <= ((h + 1) as f64).ln() + 1e-12);
        assert!(l >= ((h + 1) as f64).ln() - 1.0 + 1.0 / (h + 1) as f64 - 1e-12);
    }
}

#[test]
fn series_verdicts() {
    let rule = LayerSpec::new(0, SeqRule::constant(2), SeqRule::constant(1));
    let (main, comp) = series_lcp(&rule, 20).unwrap();
    assert_eq!(main.verdict, Verdict::Convergent);
    assert_eq!(main.justification, Justification::ComparisonTest);
    assert_eq!(comp.verdict, Verdict::Convergent);
    let fin = LayerSpec::finite(0, &[2, 2, 2], &[2, 1, 1]);
    let (main, _) = series_lcp(&fin, 3).unwrap();
    assert_eq!(main.justification, Justification::PrefixOnly);
    // terms ln h_n / (d_{n-1} c_{n-1}) summed directly
    let seq = layer_sequences(&rule, 20).unwrap();
    let direct: f64 = (2..=20)
        .map(|n| (seq.h[n] as f64).ln() / (seq.d[n - 1] as f64 * seq.c[n - 1].to_string().parse::<f64>().unwrap()))
        .sum();
    let (main, _) = series_lcp(&rule, 20).unwrap();
    let last = main.last().unwrap();
    assert!((last.value - direct).abs() <= last.error + 1e-15);
}

#[test]
fn closed_form_vel_first_generation() {
    for (k0, h1) in [(0i64, 2i64), (1, 1), (3, 3), (-2, 4)] {
        let spec = LayerSpec::finite(k0, &[h1], &[1]);
        let seq = layer_sequences(&spec, 1).unwrap();
        let lambda: Q = (2..=h1 + 1).map(|k| q(1, k)).sum();
        let expect = q(1, 1) + lambda / q(k0 + 6, 1);
        assert_eq!(vel_closed_form(&seq)[0], expect);
        let cg = comparison_graph(&spec, 1).unwrap();
        let fam = PathFamily::new(&cg.window, vec![cg.window.root()], cg.terminal.clone()).unwrap();
        let s = vel_solve(&cg.window, &fam, 1e-8, 10_000).unwrap();
        assert!((s.value - to_f64(&expect)).abs() < 1e-5, "k0 = {k0}, h = {h1}: {}", s.value);
    }
}

#[test]
fn comparison_map_is_a_distance_preserving_cover() {
    for (spec, n) in [
        (LayerSpec::finite(0, &[2, 2, 2], &[2, 1, 1]), 3),
        (LayerSpec::finite(0, &[1, 1, 1], &[1, 1, 1]), 3),
        (LayerSpec::finite(2, &[1, 2, 1], &[1, 2, 1]), 3),
    ] {
        let cg = comparison_graph(&spec, n).unwrap();
        let chk = cg.check_phi();
        assert!(chk.homomorphism && chk.surjective && chk.distance_preserving, "{spec:?}");
        assert!(chk.max_preimages <= 2);
        // the terminal set maps onto S_{θ_n}
        let seq = layer_sequences(&spec, n as usize).unwrap();
        let n = n as usize;
        let image: std::collections::BTreeSet<_> = cg.terminal.iter().map(|&t| cg.phi[t as usize]).collect();
        assert_eq!(BigInt::from(image.len()), BigInt::from(spec.k0 + 6) * &seq.c[n]);
        assert!(!seq.c[n].is_zero());
    }
}
