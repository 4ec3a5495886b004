//! Closed forms for layered triangulations: the `θ, δ, c` recurrences, the two series
//! that decide the type, `α_n`, `λ_k` and the extremal length of the comparison graph.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::criteria::{Justification, PartialSum, SeriesVerdict, Summer, Verdict};
use crate::error::{Error, Result};
use crate::generators::LayerSpec;
use crate::rational::{fmt_q, q, to_f64, Q};
use crate::sequences::big_to_f64;
use crate::window::{TriangulationWindow, V};

/// Sequences indexed by `n = 0 … n_max`; entries at `n = 0` are `θ₀ = 0`, `c₀ = 0`,
/// `δ₀ = 1`, `λ₀ = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerSequences {
    pub k0: i64,
    /// `h_n`, `d_n` with a placeholder `0` at index 0.
    pub h: Vec<u64>,
    pub d: Vec<u64>,
    pub theta: Vec<u64>,
    pub delta: Vec<BigInt>,
    pub c: Vec<BigInt>,
    /// `λ_n = 1/2 + ⋯ + 1/(h_n + 1)`.
    pub lambda: Vec<Q>,
}

pub fn layer_sequences(spec: &LayerSpec, n_max: usize) -> Result<LayerSequences> {
    spec.root_degree()?;
    let mut h = vec![0];
    let mut d = vec![0];
    let mut theta = vec![0];
    let mut delta = vec![BigInt::one()];
    let mut c = vec![BigInt::zero()];
    let mut lambda = vec![Q::zero()];
    for n in 1..=n_max {
        let hn = spec.h_req(n as u64)?;
        let dn = spec.d_req(n as u64)?;
        let cn = &c[n - 1] + BigInt::from(hn) * &delta[n - 1];
        delta.push(&delta[n - 1] + BigInt::from(dn) * &cn);
        c.push(cn);
        theta.push(theta[n - 1] + hn);
        lambda.push((2..=hn as i64 + 1).fold(Q::zero(), |acc, k| acc + q(1, k)));
        h.push(hn);
        d.push(dn);
    }
    Ok(LayerSequences { k0: spec.k0, h, d, theta, delta, c, lambda })
}

impl LayerSequences {
    pub fn n_max(&self) -> usize {
        self.h.len() - 1
    }

    fn m(&self) -> BigInt {
        BigInt::from(self.k0 + 6)
    }

    /// `δ_n - δ_{n-1} = d_n c_n`, `c_n - c_{n-1} = h_n δ_{n-1}`, `c` strictly increasing and
    /// `c_n ≥ 2 c_{n-1}`.
    pub fn identities_hold(&self) -> bool {
        (1..=self.n_max()).all(|n| {
            &self.delta[n] - &self.delta[n - 1] == BigInt::from(self.d[n]) * &self.c[n]
                && &self.c[n] - &self.c[n - 1] == BigInt::from(self.h[n]) * &self.delta[n - 1]
                && self.c[n] > self.c[n - 1]
                && (n == 1 || self.c[n] >= BigInt::from(2) * &self.c[n - 1])
        })
    }

    /// `α_n` with `c_n = (1 + α_n) h_n d_{n-1} c_{n-1}`, for `n ≥ 2`.
    pub fn alpha(&self, n: usize) -> Q {
        let den = BigInt::from(self.h[n]) * BigInt::from(self.d[n - 1]) * &self.c[n - 1];
        Q::new(self.c[n].clone(), den) - Q::one()
    }

    /// The expanded form of `α_n`, for `n ≥ 3`.
    pub fn alpha_expanded(&self, n: usize) -> Q {
        let hd = BigInt::from(self.h[n]) * BigInt::from(self.d[n - 1]);
        let first = Q::new(BigInt::one(), hd);
        let second = Q::new(
            &self.c[n - 1] - &self.c[n - 2],
            BigInt::from(self.h[n - 1]) * BigInt::from(self.d[n - 1]) * &self.c[n - 1],
        );
        first + second
    }

    /// `0 ≤ α_n ≤ 1/h_n + 1/h_{n-1}` for `n ≥ 3`, and the expanded form agrees.
    pub fn alpha_bounds_hold(&self) -> bool {
        (3..=self.n_max()).all(|n| {
            let a = self.alpha(n);
            let cap = q(1, self.h[n] as i64) + q(1, self.h[n - 1] as i64);
            a >= Q::zero() && a <= cap && a == self.alpha_expanded(n)
        })
    }

    /// `|S_{θ_{n-1} + l}| = (6 + k₀)(c_{n-1} + l δ_{n-1})` for `1 ≤ l ≤ h_n`.
    pub fn sphere_size(&self, n: usize, l: u64) -> BigInt {
        self.m() * (&self.c[n - 1] + BigInt::from(l) * &self.delta[n - 1])
    }

    /// `k_{θ_n} - k_{θ_n - 1} = d_n (6 + k₀) c_n`.
    pub fn jump(&self, n: usize) -> BigInt {
        BigInt::from(self.d[n]) * self.m() * &self.c[n]
    }

    /// `Π_{k ≤ n} d_k h_k`.
    pub fn product(&self, n: usize) -> BigInt {
        (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(self.d[k] * self.h[k]))
    }

    /// `d_n c_n / Π_{k ≤ n} d_k h_k`.
    pub fn beta_ratios(&self) -> Vec<f64> {
        (1..=self.n_max())
            .map(|n| to_f64(&Q::new(BigInt::from(self.d[n]) * &self.c[n], self.product(n))))
            .collect()
    }

    pub fn csv(&self) -> String {
        let vel = vel_closed_form(self);
        let (main, companion) = series_lcp_from(self, None);
        let mut s = String::from("n,h,d,theta,delta,c,lambda,sum_ln_h,sum_ln_h1,vel\n");
        for n in 1..=self.n_max() {
            let (a, b) = if n >= 2 {
                (main.partial_sums[n - 2].value, companion.partial_sums[n - 2].value)
            } else {
                (0.0, 0.0)
            };
            s += &format!(
                "{n},{},{},{},{},{},{},{a},{b},{}\n",
                self.h[n],
                self.d[n],
                self.theta[n],
                self.delta[n],
                self.c[n],
                fmt_q(&self.lambda[n]),
                fmt_q(&vel[n - 1])
            );
        }
        s
    }
}

/// Residuals of the sphere counts of a generated window against the recurrences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    /// `(6 + k₀) c_n - |S_{θ_n}|`.
    pub c_residuals: Vec<i64>,
    /// `|S_{θ_{n-1}+l}| - (6 + k₀)(c_{n-1} + l δ_{n-1})` over every `(n, l)`.
    pub sphere_residuals: Vec<i64>,
    /// `k_{θ_n} - k_{θ_n - 1} - d_n (6 + k₀) c_n`.
    pub jump_residuals: Vec<i64>,
}

impl CrossCheck {
    pub fn all_zero(&self) -> bool {
        self.c_residuals
            .iter()
            .chain(&self.sphere_residuals)
            .chain(&self.jump_residuals)
            .all(|&r| r == 0)
    }
}

fn small(x: &BigInt) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::InvalidSpec("count does not fit in 64 bits".into()))
}

pub fn cross_check_c(
    spec: &LayerSpec,
    w: &TriangulationWindow,
    v0: V,
    n_max: usize,
) -> Result<CrossCheck> {
    let seq = layer_sequences(spec, n_max)?;
    let top = seq.theta[n_max] as u32;
    if !w.is_fragment() && w.dist(v0) + top + 1 > w.complete_radius() {
        return Err(Error::WindowTooSmall { needed: w.dist(v0) + top + 1, have: w.complete_radius() });
    }
    let dist = w.bfs(v0, Some(top));
    let mut sphere = vec![0i64; top as usize + 1];
    let mut excess = vec![0i64; top as usize + 1];
    for v in 0..w.vertex_count() as V {
        let d = dist[v as usize];
        if d <= top {
            sphere[d as usize] += 1;
            excess[d as usize] += w.degree(v)? as i64 - 6;
        }
    }
    let mut c_residuals = Vec::new();
    let mut sphere_residuals = Vec::new();
    let mut jump_residuals = Vec::new();
    for n in 1..=n_max {
        let t = seq.theta[n] as usize;
        c_residuals.push(small(&(seq.m() * &seq.c[n]))? - sphere[t]);
        for l in 1..=seq.h[n] {
            let s = sphere[seq.theta[n - 1] as usize + l as usize];
            sphere_residuals.push(s - small(&seq.sphere_size(n, l))?);
        }
        // k_t - k_{t-1} is the excess carried by sphere t
        jump_residuals.push(excess[t] - small(&seq.jump(n))?);
    }
    Ok(CrossCheck { c_residuals, sphere_residuals, jump_residuals })
}

/// Whether a rule-given spec makes every term of the two series small enough to sum:
/// `d_{n-1} c_{n-1} ≥ 2^{n-2}` while `ln h_n` grows at most linearly.
fn symbolic(spec: Option<&LayerSpec>) -> bool {
    spec.is_some_and(|s| s.h.is_infinite() && s.d.is_infinite() && s.h.growth().is_some())
}

fn classify(spec: Option<&LayerSpec>) -> (Verdict, Justification) {
    if symbolic(spec) {
        (Verdict::Convergent, Justification::ComparisonTest)
    } else {
        (Verdict::Undecided, Justification::PrefixOnly)
    }
}

fn ln_rel(x: u64) -> f64 {
    if x <= 1 {
        0.0
    } else {
        4.0 * f64::EPSILON
    }
}

fn series_lcp_from(seq: &LayerSequences, spec: Option<&LayerSpec>) -> (SeriesVerdict, SeriesVerdict) {
    let mut main = Summer::new();
    let mut companion = Summer::new();
    for n in 2..=seq.n_max() {
        let den = big_to_f64(&(BigInt::from(seq.d[n - 1]) * &seq.c[n - 1]));
        main.add((seq.h[n] as f64).ln() / den, ln_rel(seq.h[n]));
        companion.add(((seq.h[n] + 1) as f64).ln() / den, ln_rel(seq.h[n] + 1));
    }
    let (v, j) = classify(spec);
    (
        SeriesVerdict { partial_sums: main.finish(), verdict: v, justification: j },
        SeriesVerdict { partial_sums: companion.finish(), verdict: v, justification: j },
    )
}

/// `Σ_{n≥2} ln h_n / (d_{n-1} c_{n-1})` and its `ln(h_n + 1)` companion.
pub fn series_lcp(spec: &LayerSpec, n_max: usize) -> Result<(SeriesVerdict, SeriesVerdict)> {
    let seq = layer_sequences(spec, n_max)?;
    Ok(series_lcp_from(&seq, Some(spec)))
}

/// `Σ_{n≥2} ln h_n / Π_{k<n} d_k h_k`, with the table of `α_n`.
pub fn series_corollary_lcp(spec: &LayerSpec, n_max: usize) -> Result<(SeriesVerdict, Vec<Q>)> {
    let seq = layer_sequences(spec, n_max)?;
    let mut s = Summer::new();
    for n in 2..=n_max {
        s.add((seq.h[n] as f64).ln() / big_to_f64(&seq.product(n - 1)), ln_rel(seq.h[n]));
    }
    let alphas = (2..=n_max).map(|n| seq.alpha(n)).collect();
    let (verdict, justification) = classify(Some(spec));
    Ok((SeriesVerdict { partial_sums: s.finish(), verdict, justification }, alphas))
}

/// `VEL(w₀, 𝒯_n) = 1 + λ₁/(k₀+6) + (1/(k₀+6)) Σ_{k=2}^n λ_k/δ_{k-1}` for `n = 1 … n_max`.
pub fn vel_closed_form(seq: &LayerSequences) -> Vec<Q> {
    let m = Q::from_integer(seq.m());
    let mut acc = Q::one();
    let mut out = Vec::new();
    for n in 1..=seq.n_max() {
        acc += &seq.lambda[n] / (&m * Q::from_integer(seq.delta[n - 1].clone()));
        out.push(acc.clone());
    }
    out
}

/// The same sum with `λ_k` replaced by `ln(h_k + 1)`.
pub fn vel_upper_bound(seq: &LayerSequences) -> Vec<f64> {
    let m = (seq.k0 + 6) as f64;
    let mut acc = 1.0;
    (1..=seq.n_max())
        .map(|n| {
            acc += ((seq.h[n] + 1) as f64).ln() / (m * big_to_f64(&seq.delta[n - 1]));
            acc
        })
        .collect()
}

/// Last partial sum, for tables.
pub fn last_value(v: &SeriesVerdict) -> Option<PartialSum> {
    v.last()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::build_window;
    use crate::generators::layered;
    use crate::sequences::SeqRule;

    #[test]
    fn small_recurrences() {
        let s = layer_sequences(&LayerSpec::finite(3, &[3, 3], &[1, 2]), 2).unwrap();
        assert_eq!(s.c[1], BigInt::from(3));
        assert_eq!(s.delta[1], BigInt::from(4));
        assert_eq!(s.c[2], BigInt::from(15));
        let s = layer_sequences(&LayerSpec::finite(0, &[2, 2, 2], &[2, 1, 1]), 3).unwrap();
        assert_eq!((s.c[1].clone(), s.delta[1].clone(), s.c[2].clone()), (2.into(), 5.into(), 12.into()));
        assert!(s.identities_hold());
        assert_eq!(vel_closed_form(&s)[0], q(41, 36));
    }

    #[test]
    fn generated_spheres_agree() {
        let spec = LayerSpec::finite(3, &[3, 3], &[1, 2]);
        let w = build_window(&layered(spec.clone()), 7).unwrap();
        let cc = cross_check_c(&spec, &w, 0, 2).unwrap();
        assert!(cc.all_zero(), "{cc:?}");
    }

    #[test]
    fn alpha_for_h2() {
        let spec = LayerSpec::new(0, SeqRule::constant(2), SeqRule::constant(1));
        let s = layer_sequences(&spec, 12).unwrap();
        assert!(s.alpha_bounds_hold());
        let (main, comp) = series_lcp(&spec, 12).unwrap();
        assert_eq!(main.verdict, Verdict::Convergent);
        assert!(main.last().unwrap().value < comp.last().unwrap().value);
    }
}
