//! Language-membership oracles for the shift spaces of the workbench.

mod beta;
mod doc;
mod dyck;
mod gapset;
mod omega;
mod smallcenter;
mod twoergodic;

pub use beta::{
    beta_contains, beta_expand, beta_hat, beta_to_f64, expansion_of_one, parry_valid,
    parry_valid_prefix, AlgebraicBeta, BetaExpansion, BetaHat, BetaNumber, DBeta,
    DEFAULT_DIGIT_BUDGET, DEFAULT_MAX_BISECTIONS,
};
pub use doc::{parse_system, BetaDoc, GapDoc, NumText, OmegaDoc, SystemDoc, TailDoc};
pub use dyck::{
    dyck_classify, dyck_contains, dyck_periodic_admissible, dyck_reduce, DyckClass, Reduced,
};
pub use gapset::GapSet;
pub use omega::Substitution;
pub use smallcenter::{small_center_contains, sparse_enough};
pub use twoergodic::TwoErgodic;

use crate::error::{Error, Result};
use crate::graphview::{
    self, FiniteGraph, GammaBeta, GammaDoublePrime, GammaEnt, GammaPrime, GammaS, LabelledGraph,
};
use crate::seqcore::Symbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SystemKind {
    Full,
    Sft,
    SGap,
    Beta,
    Dyck,
    Coded,
    SmallCenter,
    TwoErgodic,
    XPrime,
    XDoublePrime,
}

impl SystemKind {
    pub fn name(self) -> &'static str {
        match self {
            SystemKind::Full => "FULL",
            SystemKind::Sft => "SFT",
            SystemKind::SGap => "SGAP",
            SystemKind::Beta => "BETA",
            SystemKind::Dyck => "DYCK",
            SystemKind::Coded => "CODED",
            SystemKind::SmallCenter => "SMALLCENTER",
            SystemKind::TwoErgodic => "TWOERGODIC",
            SystemKind::XPrime => "XPRIME",
            SystemKind::XDoublePrime => "XDOUBLEPRIME",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        let all = [
            SystemKind::Full,
            SystemKind::Sft,
            SystemKind::SGap,
            SystemKind::Beta,
            SystemKind::Dyck,
            SystemKind::Coded,
            SystemKind::SmallCenter,
            SystemKind::TwoErgodic,
            SystemKind::XPrime,
            SystemKind::XDoublePrime,
        ];
        all.into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown system kind {s:?}")))
    }
}

/// A β-shift given by `d̂_β`, remembering β when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaSystem {
    pub beta: Option<BetaNumber>,
    pub hat: BetaHat,
}

impl BetaSystem {
    pub fn from_beta(beta: BetaNumber, budget: usize) -> Result<Self> {
        let d = expansion_of_one(&beta, budget)?;
        Ok(BetaSystem {
            hat: beta_hat(&d)?,
            beta: Some(beta),
        })
    }

    pub fn golden() -> Self {
        Self::from_beta(BetaNumber::golden(), DEFAULT_DIGIT_BUDGET).expect("golden ratio expansion")
    }

    pub fn max_digit(&self) -> Symbol {
        self.hat.first_digit()
    }
}

/// Coded systems given directly by a graph family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodedGraph {
    GammaEnt(Substitution),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftSystem {
    Full {
        alphabet: Symbol,
    },
    Sft {
        alphabet: Symbol,
        forbidden: Vec<Vec<Symbol>>,
    },
    SGap(GapSet),
    Beta(BetaSystem),
    Dyck,
    Coded(CodedGraph),
    /// `base` extended by the sparse symbol `added` (= base alphabet size).
    SmallCenter {
        base: Box<ShiftSystem>,
        added: Symbol,
    },
    TwoErgodic(TwoErgodic),
    XPrime(Substitution),
    XDoublePrime,
}

/// `X'` (labels from `omega`) or `X''`.
pub fn make_counterexample(kind: SystemKind, omega: Option<Substitution>) -> Result<ShiftSystem> {
    match kind {
        SystemKind::XPrime => Ok(ShiftSystem::XPrime(
            omega.unwrap_or_else(Substitution::fibonacci),
        )),
        SystemKind::XDoublePrime => Ok(ShiftSystem::XDoublePrime),
        other => Err(Error::InvalidInput(format!(
            "{} is not a counterexample kind",
            other.name()
        ))),
    }
}

impl ShiftSystem {
    pub fn sgap(explicit: &[u64]) -> Self {
        ShiftSystem::SGap(GapSet::finite(explicit))
    }

    pub fn golden_mean() -> Self {
        ShiftSystem::Sft {
            alphabet: 2,
            forbidden: vec![vec![1, 1]],
        }
    }

    pub fn golden_beta() -> Self {
        ShiftSystem::Beta(BetaSystem::golden())
    }

    pub fn gamma_ent() -> Self {
        ShiftSystem::Coded(CodedGraph::GammaEnt(Substitution::fibonacci()))
    }

    /// Golden-mean shift extended by the sparse symbol 2.
    pub fn small_center_golden() -> Self {
        ShiftSystem::SmallCenter {
            base: Box::new(Self::golden_mean()),
            added: 2,
        }
    }

    pub fn kind(&self) -> SystemKind {
        match self {
            ShiftSystem::Full { .. } => SystemKind::Full,
            ShiftSystem::Sft { .. } => SystemKind::Sft,
            ShiftSystem::SGap(_) => SystemKind::SGap,
            ShiftSystem::Beta(_) => SystemKind::Beta,
            ShiftSystem::Dyck => SystemKind::Dyck,
            ShiftSystem::Coded(_) => SystemKind::Coded,
            ShiftSystem::SmallCenter { .. } => SystemKind::SmallCenter,
            ShiftSystem::TwoErgodic(_) => SystemKind::TwoErgodic,
            ShiftSystem::XPrime(_) => SystemKind::XPrime,
            ShiftSystem::XDoublePrime => SystemKind::XDoublePrime,
        }
    }

    /// Alphabet size.
    pub fn alphabet_size(&self) -> Symbol {
        match self {
            ShiftSystem::Full { alphabet } | ShiftSystem::Sft { alphabet, .. } => *alphabet,
            ShiftSystem::SGap(_) | ShiftSystem::TwoErgodic(_) | ShiftSystem::XDoublePrime => 2,
            ShiftSystem::Beta(b) => b.max_digit() + 1,
            ShiftSystem::Dyck => 4,
            ShiftSystem::Coded(_) | ShiftSystem::XPrime(_) => 3,
            ShiftSystem::SmallCenter { added, .. } => added + 1,
        }
    }

    pub fn contains(&self, w: &[Symbol]) -> Result<bool> {
        let a = self.alphabet_size();
        if w.iter().any(|&s| s >= a) {
            return Ok(false);
        }
        match self {
            ShiftSystem::Full { .. } => Ok(true),
            ShiftSystem::Sft { forbidden, .. } => Ok(!forbidden.iter().any(|f| {
                !f.is_empty() && f.len() <= w.len() && w.windows(f.len()).any(|x| x == f.as_slice())
            })),
            ShiftSystem::SGap(s) => Ok(sgap_contains(s, w)),
            ShiftSystem::Beta(b) => beta_contains(&b.hat, w),
            ShiftSystem::Dyck => Ok(dyck_contains(w)),
            ShiftSystem::SmallCenter { base, added } => small_center_contains(base, *added, w),
            ShiftSystem::TwoErgodic(t) => Ok(t.contains(w)),
            ShiftSystem::Coded(_) | ShiftSystem::XPrime(_) | ShiftSystem::XDoublePrime => {
                let g = self.graph()?.expect("graph-presented kinds");
                Ok(graphview::readable(g.as_ref(), w))
            }
        }
    }

    /// The presenting graph for kinds that have one.
    pub fn graph(&self) -> Result<Option<Box<dyn LabelledGraph>>> {
        Ok(match self {
            ShiftSystem::SGap(s) => Some(Box::new(GammaS { s: s.clone() })),
            ShiftSystem::Beta(b) => Some(Box::new(GammaBeta { hat: b.hat.clone() })),
            ShiftSystem::XPrime(o) => Some(Box::new(GammaPrime { omega: o.clone() })),
            ShiftSystem::XDoublePrime => Some(Box::new(GammaDoublePrime)),
            ShiftSystem::Coded(CodedGraph::GammaEnt(o)) => {
                Some(Box::new(GammaEnt { omega: o.clone() }))
            }
            ShiftSystem::Full { alphabet } => {
                Some(Box::new(FiniteGraph::from_sft(*alphabet, &[])?))
            }
            ShiftSystem::Sft {
                alphabet,
                forbidden,
            } => Some(Box::new(FiniteGraph::from_sft(*alphabet, forbidden)?)),
            _ => None,
        })
    }

    /// Kinds whose closed paths all pass through a fixed root vertex.
    pub fn is_root_coded(&self) -> bool {
        matches!(
            self,
            ShiftSystem::SGap(_)
                | ShiftSystem::Beta(_)
                | ShiftSystem::XPrime(_)
                | ShiftSystem::XDoublePrime
                | ShiftSystem::Coded(_)
        )
    }
}

/// No completed gap `1 0^n 1` with `n ∉ S`.
fn sgap_contains(s: &GapSet, w: &[Symbol]) -> bool {
    let mut last_one: Option<usize> = None;
    for (i, &x) in w.iter().enumerate() {
        if x == 1 {
            if let Some(j) = last_one {
                if !s.contains((i - j - 1) as u64) {
                    return false;
                }
            }
            last_one = Some(i);
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::{parse_symbols, Word};

    fn w(s: &str) -> Vec<Symbol> {
        parse_symbols(s).unwrap()
    }

    #[test]
    fn spec_membership_examples() {
        let s = ShiftSystem::sgap(&[1, 2]);
        assert!(s.contains(&w("1001")).unwrap());
        assert!(!s.contains(&w("10001")).unwrap());
        assert!(!ShiftSystem::Dyck.contains(&w("[)")).unwrap());
        let sc = ShiftSystem::small_center_golden();
        assert!(!sc.contains(&w("22")).unwrap());
        assert!(sc.contains(&w("212")).unwrap());
        assert!(!sc.contains(&w("2112")).unwrap());
    }

    #[test]
    fn counterexample_words() {
        let xpp = make_counterexample(SystemKind::XDoublePrime, None).unwrap();
        assert!(xpp.contains(Word::digits("0011").symbols()).unwrap());
        assert!(xpp.contains(Word::digits("10").symbols()).unwrap());
        assert!(xpp.contains(Word::digits("1111").symbols()).unwrap());
        assert!(xpp.contains(Word::digits("0110").symbols()).unwrap());
        assert!(!xpp.contains(&[2]).unwrap());
        let xp = make_counterexample(SystemKind::XPrime, None).unwrap();
        assert!(xp.contains(&[2, 2, 0, 1, 0]).unwrap());
        assert!(!xp.contains(&[1, 1]).unwrap());
        assert!(make_counterexample(SystemKind::Dyck, None).is_err());
    }

    #[test]
    fn empty_word_everywhere() {
        let systems = vec![
            ShiftSystem::Full { alphabet: 2 },
            ShiftSystem::golden_mean(),
            ShiftSystem::sgap(&[1, 2]),
            ShiftSystem::golden_beta(),
            ShiftSystem::Dyck,
            ShiftSystem::gamma_ent(),
            ShiftSystem::small_center_golden(),
            ShiftSystem::TwoErgodic(TwoErgodic::fibonacci()),
            ShiftSystem::XPrime(Substitution::fibonacci()),
            ShiftSystem::XDoublePrime,
        ];
        for s in systems {
            assert!(s.contains(&[]).unwrap(), "{:?}", s.kind());
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ["SGAP", "beta", "XDoublePrime"] {
            let kind = SystemKind::from_name(k).unwrap();
            assert!(kind.name().eq_ignore_ascii_case(k));
        }
        assert!(SystemKind::from_name("nope").is_err());
    }
}
