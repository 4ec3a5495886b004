//! Integer sequences given either as finite prefixes or as closed-form rules.
//!
//! Rules carry a growth class so that series built from them can be classified
//! symbolically; prefixes never can.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum SeqRule {
    /// Finite data; indices past the end are exhausted.
    Prefix { values: Vec<i64> },
    Constant { value: i64 },
    /// `Σ coeffs[i] n^i`.
    Polynomial { coeffs: Vec<i64> },
    /// `scale · ratio^n + offset`.
    Geometric { scale: i64, ratio: i64, offset: i64 },
    /// `⌊c ln n⌋`, and `0` at `n = 0`.
    Log { c: i64 },
    /// Explicit values for the first indices, then `rest` at the absolute index.
    Then { prefix: Vec<i64>, rest: Box<SeqRule> },
    /// Odd `n` reads `odd((n+1)/2)`, even `n` reads `even(n/2)`.
    Interleave { odd: Box<SeqRule>, even: Box<SeqRule> },
}

/// Growth of a positive sequence, slowest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Growth {
    Bounded,
    Log,
    Linear,
    NLogN,
    Poly(u32),
    Geometric,
}

impl Growth {
    /// Whether `Σ 1/x_n` diverges for a positive sequence of this class.
    pub fn reciprocal_diverges(self) -> bool {
        self <= Growth::NLogN
    }
}

/// A rule accepted either as a bare list (prefix) or as a tagged rule object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeqInput {
    List(Vec<i64>),
    Rule(SeqRule),
}

impl From<SeqInput> for SeqRule {
    fn from(s: SeqInput) -> Self {
        match s {
            SeqInput::List(values) => SeqRule::Prefix { values },
            SeqInput::Rule(r) => r,
        }
    }
}

impl SeqRule {
    pub fn prefix(values: &[i64]) -> Self {
        SeqRule::Prefix { values: values.to_vec() }
    }

    pub fn constant(value: i64) -> Self {
        SeqRule::Constant { value }
    }

    pub fn then(prefix: &[i64], rest: SeqRule) -> Self {
        SeqRule::Then { prefix: prefix.to_vec(), rest: Box::new(rest) }
    }

    pub fn get(&self, n: u64) -> Option<BigInt> {
        match self {
            SeqRule::Prefix { values } => values.get(n as usize).map(|&x| BigInt::from(x)),
            SeqRule::Constant { value } => Some(BigInt::from(*value)),
            SeqRule::Polynomial { coeffs } => {
                let x = BigInt::from(n);
                let mut acc = BigInt::zero();
                for c in coeffs.iter().rev() {
                    acc = acc * &x + BigInt::from(*c);
                }
                Some(acc)
            }
            SeqRule::Geometric { scale, ratio, offset } => {
                let p = num_traits::pow(BigInt::from(*ratio), n as usize);
                Some(BigInt::from(*scale) * p + BigInt::from(*offset))
            }
            SeqRule::Log { c } => {
                if n == 0 {
                    Some(BigInt::zero())
                } else {
                    Some(BigInt::from((*c as f64 * (n as f64).ln()).floor() as i64))
                }
            }
            SeqRule::Then { prefix, rest } => match prefix.get(n as usize) {
                Some(&x) => Some(BigInt::from(x)),
                None => rest.get(n),
            },
            SeqRule::Interleave { odd, even } => {
                if n % 2 == 1 {
                    odd.get(n.div_ceil(2))
                } else {
                    even.get(n / 2)
                }
            }
        }
    }

    pub fn get_i64(&self, n: u64) -> Result<i64> {
        let v = self
            .get(n)
            .ok_or_else(|| Error::SpecExhausted(format!("no value at index {n}")))?;
        v.to_i64()
            .ok_or_else(|| Error::InvalidSpec(format!("value at index {n} does not fit in 64 bits")))
    }

    /// Whether the rule is defined at every index.
    pub fn is_infinite(&self) -> bool {
        match self {
            SeqRule::Prefix { .. } => false,
            SeqRule::Then { rest, .. } => rest.is_infinite(),
            SeqRule::Interleave { odd, even } => odd.is_infinite() && even.is_infinite(),
            _ => true,
        }
    }

    /// Growth classes of the residue branches of a positive sequence (`n mod p`,
    /// listed from residue `1`), or `None` if the rule is not symbolic.
    pub fn growth(&self) -> Option<Vec<Growth>> {
        match self {
            SeqRule::Prefix { .. } => None,
            SeqRule::Constant { value } => (*value > 0).then(|| vec![Growth::Bounded]),
            SeqRule::Polynomial { coeffs } => {
                let d = coeffs.iter().rposition(|&c| c != 0)?;
                if coeffs[d] <= 0 {
                    return None;
                }
                Some(vec![match d {
                    0 => Growth::Bounded,
                    1 => Growth::Linear,
                    d => Growth::Poly(d as u32),
                }])
            }
            SeqRule::Geometric { scale, ratio, offset } => {
                if *ratio > 1 && *scale > 0 {
                    Some(vec![Growth::Geometric])
                } else if *ratio == 1 && scale + offset > 0 {
                    Some(vec![Growth::Bounded])
                } else {
                    None
                }
            }
            SeqRule::Log { c } => (*c > 0).then(|| vec![Growth::Log]),
            SeqRule::Then { rest, .. } => rest.growth(),
            SeqRule::Interleave { odd, even } => {
                let o = odd.growth()?;
                let e = even.growth()?;
                if o.len() == 1 && e.len() == 1 {
                    Some(vec![o[0], e[0]])
                } else {
                    None
                }
            }
        }
    }

    /// Growth of `a_n = Σ_{j<n} (k_j + 6)` when `self` is the excess sequence `k`.
    pub fn cumulative_growth(&self) -> Option<Vec<Growth>> {
        match self {
            SeqRule::Constant { value } => match value + 6 {
                x if x > 0 => Some(vec![Growth::Linear]),
                0 => Some(vec![Growth::Bounded]),
                _ => None,
            },
            SeqRule::Polynomial { coeffs } => {
                let d = coeffs.iter().rposition(|&c| c != 0).unwrap_or(0);
                if d == 0 {
                    return SeqRule::constant(coeffs.first().copied().unwrap_or(0)).cumulative_growth();
                }
                (coeffs[d] > 0).then(|| {
                    vec![if d + 1 == 1 { Growth::Linear } else { Growth::Poly(d as u32 + 1) }]
                })
            }
            SeqRule::Log { c } => match c {
                c if *c > 0 => Some(vec![Growth::NLogN]),
                0 => Some(vec![Growth::Linear]),
                _ => None,
            },
            SeqRule::Geometric { scale, ratio, .. } if *ratio > 1 && *scale > 0 => {
                Some(vec![Growth::Geometric])
            }
            SeqRule::Geometric { scale, ratio, offset } if *ratio == 1 => {
                SeqRule::constant(scale + offset).cumulative_growth()
            }
            SeqRule::Then { rest, .. } => rest.cumulative_growth(),
            _ => None,
        }
    }
}

/// Branch classes of `x_n + x_{n+1}` from those of `x_n`.
pub fn adjacent_sum_growth(branches: &[Growth]) -> Vec<Growth> {
    let p = branches.len();
    (0..p).map(|r| branches[r].max(branches[(r + 1) % p])).collect()
}

/// Big integer as `f64`, saturating at infinity.
pub fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// `n / d` in floating point without forming the reduced fraction. Keeps the leading 64
/// bits of each operand.
pub fn ratio_f64(n: &BigInt, d: &BigInt) -> f64 {
    let top = |x: &BigInt| -> (f64, i64) {
        let shift = x.bits().saturating_sub(64);
        (big_to_f64(&(x >> shift)), shift as i64)
    };
    let (nf, ns) = top(n);
    let (df, ds) = top(d);
    let e = ns - ds;
    let scale = |x: f64, e: i64| x * 2f64.powi(e.clamp(-2000, 2000) as i32);
    scale(nf / df, e)
}
