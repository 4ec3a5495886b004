//! Deterministic constructors of triangulation windows and finite fragments.

pub mod comparison;
pub mod flipped;
pub mod hexagonal;
pub mod layered;
pub mod mesh;
pub mod ring_stack;
pub mod tiling;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::sequences::{SeqInput, SeqRule};
use crate::window::TriangulationWindow;

pub use comparison::{comparison_graph, ComparisonGraph};
pub use flipped::flipped_hexagonal;
pub use mesh::{triangular_mesh, MeshSpec};
pub use ring_stack::RingStack;
pub use tiling::{square_tiling_contact_graph, Square, SquareTiling, TilingShape};

pub(crate) fn de_seq<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<SeqRule, D::Error> {
    SeqInput::deserialize(d).map(Into::into)
}

fn de_seq_opt<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Option<SeqRule>, D::Error> {
    Option::<SeqInput>::deserialize(d).map(|o| o.map(Into::into))
}

fn flat() -> SeqRule {
    SeqRule::prefix(&[])
}

/// Layered circle-packing recipe: `deg v₀ = k0 + 6`, then `h_k - 1` flat layers of
/// degree-6 vertices followed by a layer of degree `6 + d_k`, for `k = 1, 2, …`.
/// `h` and `d` list `h₁, h₂, …` (rule index `k - 1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub k0: i64,
    #[serde(deserialize_with = "de_seq", default = "flat")]
    pub h: SeqRule,
    #[serde(deserialize_with = "de_seq", default = "flat")]
    pub d: SeqRule,
    /// When `h` runs out, continue with degree-6 layers forever.
    #[serde(default)]
    pub flat_tail: bool,
}

impl LayerSpec {
    pub fn new(k0: i64, h: SeqRule, d: SeqRule) -> Self {
        LayerSpec { k0, h, d, flat_tail: false }
    }

    pub fn finite(k0: i64, h: &[i64], d: &[i64]) -> Self {
        Self::new(k0, SeqRule::prefix(h), SeqRule::prefix(d))
    }

    /// Every layer has degree 6 except the root.
    pub fn flat(k0: i64) -> Self {
        LayerSpec { k0, h: flat(), d: flat(), flat_tail: true }
    }

    pub fn root_degree(&self) -> Result<usize> {
        if self.k0 < -3 {
            return Err(Error::InvalidSpec(format!("k0 = {} gives root degree below 3", self.k0)));
        }
        Ok((self.k0 + 6) as usize)
    }

    /// `h_k` for `k ≥ 1`, `None` past the end of a finite rule.
    pub fn h(&self, k: u64) -> Result<Option<u64>> {
        positive(&self.h, k, "h")
    }

    pub fn d(&self, k: u64) -> Result<Option<u64>> {
        positive(&self.d, k, "d")
    }

    pub fn h_req(&self, k: u64) -> Result<u64> {
        self.h(k)?.ok_or_else(|| Error::SpecExhausted(format!("h_{k} is not given")))
    }

    pub fn d_req(&self, k: u64) -> Result<u64> {
        self.d(k)?.ok_or_else(|| Error::SpecExhausted(format!("d_{k} is not given")))
    }

    /// Degree excess `deg - 6` of every vertex on sphere `m ≥ 1`.
    pub fn layer_excess(&self, m: u64) -> Result<u64> {
        let mut theta = 0u64;
        for k in 1.. {
            let h = match self.h(k)? {
                Some(h) => h,
                None if self.flat_tail => return Ok(0),
                None => {
                    return Err(Error::SpecExhausted(format!(
                        "layer {m} lies beyond the given h values"
                    )))
                }
            };
            theta += h;
            if theta == m {
                return self.d_req(k);
            }
            if theta > m {
                return Ok(0);
            }
        }
        unreachable!()
    }

    /// `θ_k = h₁ + … + h_k`.
    pub fn theta(&self, k: u64) -> Result<u64> {
        (1..=k).map(|j| self.h_req(j)).sum()
    }
}

fn positive(rule: &SeqRule, k: u64, name: &str) -> Result<Option<u64>> {
    if k == 0 {
        return Err(Error::InvalidSpec(format!("{name} is indexed from 1")));
    }
    match rule.get(k - 1) {
        None => Ok(None),
        Some(x) => match x.to_u64() {
            Some(v) if v >= 1 => Ok(Some(v)),
            _ => Err(Error::InvalidSpec(format!("{name}_{k} = {x} is not a positive integer"))),
        },
    }
}

/// Degree-excess recipe for the square-ring construction, given either by the excess
/// sequence `k_n` (rule index `n`, from 0) or directly by the ring sizes `a_n` (rule index
/// `n`, from 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcessSpec {
    #[serde(default, deserialize_with = "de_seq_opt", skip_serializing_if = "Option::is_none")]
    pub k: Option<SeqRule>,
    #[serde(default, deserialize_with = "de_seq_opt", skip_serializing_if = "Option::is_none")]
    pub a: Option<SeqRule>,
}

impl ExcessSpec {
    pub fn from_k(k: SeqRule) -> Self {
        ExcessSpec { k: Some(k), a: None }
    }

    pub fn from_a(a: SeqRule) -> Self {
        ExcessSpec { k: None, a: Some(a) }
    }

    /// `k₀ = -3`, `k_n = -6`: every sphere has three vertices.
    pub fn three_spheres() -> Self {
        Self::from_k(SeqRule::then(&[-3], SeqRule::constant(-6)))
    }

    /// `a_{2n-1} = 3ⁿ`, `a_{2n} = 3`.
    pub fn mixed() -> Self {
        Self::from_a(SeqRule::Interleave {
            odd: Box::new(SeqRule::Geometric { scale: 1, ratio: 3, offset: 0 }),
            even: Box::new(SeqRule::constant(3)),
        })
    }

    /// `k ≡ c`.
    pub fn constant(c: i64) -> Self {
        Self::from_k(SeqRule::constant(c))
    }

    fn check(&self) -> Result<()> {
        match (&self.k, &self.a) {
            (Some(_), None) | (None, Some(_)) => Ok(()),
            _ => Err(Error::InvalidSpec("give exactly one of k and a".into())),
        }
    }

    /// `a₁, …, a_n` (index 0 holds `a₁`), each checked to be at least 3.
    pub fn a_prefix(&self, n: usize) -> Result<Vec<BigInt>> {
        self.check()?;
        let mut out = Vec::with_capacity(n);
        let mut acc = BigInt::zero();
        for i in 1..=n as u64 {
            let a = match (&self.k, &self.a) {
                (Some(k), _) => {
                    let kj = k
                        .get(i - 1)
                        .ok_or_else(|| Error::SpecExhausted(format!("k_{} is not given", i - 1)))?;
                    acc += kj + 6;
                    acc.clone()
                }
                (_, Some(a)) => {
                    a.get(i).ok_or_else(|| Error::SpecExhausted(format!("a_{i} is not given")))?
                }
                _ => unreachable!(),
            };
            if a < BigInt::from(3) {
                return Err(Error::InvalidSpec(format!("a_{i} = {a} is below 3")));
            }
            out.push(a);
        }
        Ok(out)
    }

    /// `k₀, …, k_{n-1}`.
    pub fn k_prefix(&self, n: usize) -> Result<Vec<BigInt>> {
        let a = self.a_prefix(n)?;
        let mut prev = BigInt::zero();
        Ok(a.into_iter()
            .map(|x| {
                let k = &x - &prev - 6;
                prev = x;
                k
            })
            .collect())
    }

    /// The rule for `a_n` as a function of `n ≥ 1`, when one is available.
    pub fn a_rule(&self) -> Option<&SeqRule> {
        self.a.as_ref()
    }

    pub fn k_rule(&self) -> Option<&SeqRule> {
        self.k.as_ref()
    }
}

/// A producer of windows of an infinite triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphGenerator {
    Hexagonal,
    Layered(LayerSpec),
    RingStack(ExcessSpec),
}

pub fn hexagonal() -> GraphGenerator {
    GraphGenerator::Hexagonal
}

pub fn layered(spec: LayerSpec) -> GraphGenerator {
    GraphGenerator::Layered(spec)
}

pub fn ring_stack(spec: ExcessSpec) -> GraphGenerator {
    GraphGenerator::RingStack(spec)
}

/// Window of the given complete radius around the generator's root.
pub fn build_window(gen: &GraphGenerator, radius: u32) -> Result<TriangulationWindow> {
    if radius == 0 {
        return Err(Error::InvalidSpec("radius must be at least 1".into()));
    }
    match gen {
        GraphGenerator::Hexagonal => hexagonal::window(radius),
        GraphGenerator::Layered(spec) => layered::window(spec, radius),
        GraphGenerator::RingStack(spec) => Ok(RingStack::new(spec, radius)?.into_window()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn excess_forms_agree() {
        let a = ExcessSpec::three_spheres().a_prefix(5).unwrap();
        assert!(a.iter().all(|x| *x == BigInt::from(3)));
        let k = ExcessSpec::mixed().k_prefix(4).unwrap();
        // a = 3, 3, 9, 3
        let want: Vec<BigInt> = [-3, -6, 0, -12].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(k, want);
        assert!(ExcessSpec::constant(-4).a_prefix(2).is_err());
    }

    #[test]
    fn layer_degrees() {
        let s = LayerSpec::finite(3, &[3, 3], &[1, 2]);
        let ex: Vec<u64> = (1..=6).map(|m| s.layer_excess(m).unwrap()).collect();
        assert_eq!(ex, vec![0, 0, 1, 0, 0, 2]);
        assert!(matches!(s.layer_excess(7), Err(Error::SpecExhausted(_))));
        assert_eq!(LayerSpec::flat(0).layer_excess(40).unwrap(), 0);
    }

    #[test]
    fn spec_json() {
        let g: GraphGenerator =
            serde_json::from_str(r#"{"kind":"layered","k0":3,"h":[3,3],"d":[1,2]}"#).unwrap();
        assert_eq!(g, layered(LayerSpec::finite(3, &[3, 3], &[1, 2])));
        let r: GraphGenerator = serde_json::from_str(
            r#"{"kind":"ring_stack","k":{"rule":"then","prefix":[-3],"rest":{"rule":"constant","value":-6}}}"#,
        )
        .unwrap();
        assert_eq!(r, ring_stack(ExcessSpec::three_spheres()));
    }
}
