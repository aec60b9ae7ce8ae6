//! JSON system descriptions.
//!
//! ```json
//! {"kind": "SGAP", "S": {"explicit": [1, 2], "tail": {"first": 5, "step": 2}}}
//! {"kind": "BETA", "beta": {"num": 3, "den": 2}}
//! {"kind": "BETA", "beta": {"minpoly": [-1, -1, 1], "lo": "1", "hi": "2"}}
//! {"kind": "SMALLCENTER", "base_system": {"kind": "SFT", "alphabet": 2, "forbidden": ["11"]}}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    make_counterexample, BetaNumber, BetaSystem, CodedGraph, GapSet, ShiftSystem, Substitution,
    SystemKind, TwoErgodic, DEFAULT_DIGIT_BUDGET,
};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};
use crate::seqcore::parse_symbols;

const MAX_DIGIT_BUDGET: usize = 1 << 14;
const MAX_FORBIDDEN: usize = 4096;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum NumText {
    Int(i64),
    Text(String),
}

impl NumText {
    pub fn rational(&self) -> Result<Rational> {
        match self {
            NumText::Int(n) => Ok(crate::rational::int(*n)),
            NumText::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TailDoc {
    pub first: u64,
    pub step: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GapDoc {
    #[serde(default)]
    pub explicit: Vec<u64>,
    #[serde(default)]
    pub tail: Option<TailDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum BetaDoc {
    Fraction {
        num: NumText,
        den: NumText,
        #[serde(default)]
        precision: Option<usize>,
    },
    Decimal {
        decimal: String,
        #[serde(default)]
        precision: Option<usize>,
    },
    Algebraic {
        minpoly: Vec<NumText>,
        lo: NumText,
        hi: NumText,
        #[serde(default)]
        precision: Option<usize>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OmegaDoc {
    /// Symbol → image word, e.g. `{"0": "01", "1": "0"}`.
    pub rules: BTreeMap<String, String>,
    #[serde(default)]
    pub seed: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    pub kind: String,
    #[serde(default)]
    pub alphabet: Option<u32>,
    #[serde(default, rename = "S")]
    pub s: Option<GapDoc>,
    #[serde(default)]
    pub beta: Option<BetaDoc>,
    #[serde(default)]
    pub omega: Option<OmegaDoc>,
    #[serde(default)]
    pub base_system: Option<Box<SystemDoc>>,
    #[serde(default)]
    pub forbidden: Option<Vec<String>>,
    /// Coded graph family; only `gamma-ent` is defined.
    #[serde(default)]
    pub graph: Option<String>,
    /// Gluing constant of the two-ergodic system.
    #[serde(default, rename = "K")]
    pub k: Option<usize>,
}

pub fn parse_system(text: &str) -> Result<ShiftSystem> {
    let doc: SystemDoc = serde_json::from_str(text)?;
    doc.build()
}

fn need<T>(x: Option<T>, what: &str) -> Result<T> {
    x.ok_or_else(|| Error::InvalidInput(format!("missing field {what:?}")))
}

impl OmegaDoc {
    fn build(&self) -> Result<Substitution> {
        let mut images = Vec::new();
        for (i, (k, v)) in self.rules.iter().enumerate() {
            let sym: usize = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad rule symbol {k:?}")))?;
            if sym != i {
                return Err(Error::InvalidInput(
                    "rules must cover symbols 0..n without gaps".into(),
                ));
            }
            images.push(parse_symbols(v)?);
        }
        Substitution::new(images, self.seed)
    }
}

impl BetaDoc {
    fn build(&self) -> Result<BetaSystem> {
        let (beta, precision) = match self {
            BetaDoc::Fraction {
                num,
                den,
                precision,
            } => {
                let d = den.rational()?;
                if d == crate::rational::int(0) {
                    return Err(Error::InvalidInput("zero denominator".into()));
                }
                (BetaNumber::rational(num.rational()? / d)?, *precision)
            }
            BetaDoc::Decimal { decimal, precision } => {
                (BetaNumber::rational(parse_rational(decimal)?)?, *precision)
            }
            BetaDoc::Algebraic {
                minpoly,
                lo,
                hi,
                precision,
            } => {
                let coeffs = minpoly
                    .iter()
                    .map(NumText::rational)
                    .collect::<Result<Vec<_>>>()?;
                let a = super::AlgebraicBeta::new(coeffs, lo.rational()?, hi.rational()?)?;
                (BetaNumber::Algebraic(a), *precision)
            }
        };
        let budget = precision.unwrap_or(DEFAULT_DIGIT_BUDGET);
        if budget == 0 || budget > MAX_DIGIT_BUDGET {
            return Err(Error::InvalidInput(format!(
                "precision must lie in 1..={MAX_DIGIT_BUDGET}"
            )));
        }
        BetaSystem::from_beta(beta, budget)
    }
}

impl SystemDoc {
    pub fn build(&self) -> Result<ShiftSystem> {
        let kind = SystemKind::from_name(&self.kind)?;
        match kind {
            SystemKind::Full => {
                let a = need(self.alphabet, "alphabet")?;
                if a == 0 {
                    return Err(Error::InvalidInput("empty alphabet".into()));
                }
                Ok(ShiftSystem::Full { alphabet: a })
            }
            SystemKind::Sft => {
                let a = need(self.alphabet, "alphabet")?;
                if a == 0 {
                    return Err(Error::InvalidInput("empty alphabet".into()));
                }
                let f = need(self.forbidden.as_ref(), "forbidden")?;
                if f.len() > MAX_FORBIDDEN {
                    return Err(Error::InvalidInput("too many forbidden words".into()));
                }
                let forbidden = f
                    .iter()
                    .map(|w| parse_symbols(w))
                    .collect::<Result<Vec<_>>>()?;
                if forbidden.iter().flatten().any(|&s| s >= a) {
                    return Err(Error::InvalidInput(
                        "forbidden word outside the alphabet".into(),
                    ));
                }
                Ok(ShiftSystem::Sft {
                    alphabet: a,
                    forbidden,
                })
            }
            SystemKind::SGap => {
                let g = need(self.s.as_ref(), "S")?;
                Ok(ShiftSystem::SGap(GapSet::new(
                    g.explicit.clone(),
                    g.tail.as_ref().map(|t| (t.first, t.step)),
                )?))
            }
            SystemKind::Beta => Ok(ShiftSystem::Beta(
                need(self.beta.as_ref(), "beta")?.build()?,
            )),
            SystemKind::Dyck => Ok(ShiftSystem::Dyck),
            SystemKind::Coded => {
                let g = self.graph.as_deref().unwrap_or("gamma-ent");
                if !g.eq_ignore_ascii_case("gamma-ent") {
                    return Err(Error::InvalidInput(format!("unknown coded graph {g:?}")));
                }
                let o = self.omega.as_ref().map(OmegaDoc::build).transpose()?;
                Ok(ShiftSystem::Coded(CodedGraph::GammaEnt(
                    o.unwrap_or_else(Substitution::fibonacci),
                )))
            }
            SystemKind::SmallCenter => {
                let base = need(self.base_system.as_ref(), "base_system")?.build()?;
                if base.kind() == SystemKind::SmallCenter {
                    return Err(Error::InvalidInput(
                        "nested small-center extensions are not supported".into(),
                    ));
                }
                let added = base.alphabet_size();
                Ok(ShiftSystem::SmallCenter {
                    base: Box::new(base),
                    added,
                })
            }
            SystemKind::TwoErgodic => {
                let y = self.omega.as_ref().map(OmegaDoc::build).transpose()?;
                Ok(ShiftSystem::TwoErgodic(TwoErgodic::new(
                    y.unwrap_or_else(Substitution::fibonacci),
                    self.k.unwrap_or(3),
                )))
            }
            SystemKind::XPrime | SystemKind::XDoublePrime => {
                let o = self.omega.as_ref().map(OmegaDoc::build).transpose()?;
                make_counterexample(kind, o)
            }
        }
    }
}
