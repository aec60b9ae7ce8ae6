//! Dyck shift over `[ ] ( )`, coded as symbols 0, 1, 2, 3.

use crate::error::{Error, Result};
use crate::seqcore::{EventuallyPeriodic, Symbol};

pub const OPEN_SQUARE: Symbol = 0;
pub const CLOSE_SQUARE: Symbol = 1;
pub const OPEN_ROUND: Symbol = 2;
pub const CLOSE_ROUND: Symbol = 3;

fn is_opener(s: Symbol) -> bool {
    s == OPEN_SQUARE || s == OPEN_ROUND
}

fn partner(closer: Symbol) -> Symbol {
    match closer {
        CLOSE_SQUARE => OPEN_SQUARE,
        _ => OPEN_ROUND,
    }
}

/// Image of a word in the bracket monoid: the absorbing `𝟎`, or unmatched
/// closers followed by unmatched openers (both empty is `𝟏`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduced {
    Zero,
    Word {
        closers: Vec<Symbol>,
        openers: Vec<Symbol>,
    },
}

impl Reduced {
    pub fn is_one(&self) -> bool {
        matches!(self, Reduced::Word { closers, openers } if closers.is_empty() && openers.is_empty())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Reduced::Zero)
    }

    /// The reduced word, `None` for `𝟎`.
    pub fn symbols(&self) -> Option<Vec<Symbol>> {
        match self {
            Reduced::Zero => None,
            Reduced::Word { closers, openers } => {
                let mut v = closers.clone();
                v.extend_from_slice(openers);
                Some(v)
            }
        }
    }
}

/// Single pass with a pushdown of unmatched openers. Symbols outside the
/// bracket alphabet reduce to `𝟎`.
pub fn dyck_reduce(w: &[Symbol]) -> Reduced {
    let mut closers = Vec::new();
    let mut openers: Vec<Symbol> = Vec::new();
    for &s in w {
        if s > CLOSE_ROUND {
            return Reduced::Zero;
        }
        if is_opener(s) {
            openers.push(s);
            continue;
        }
        match openers.last() {
            Some(&top) if top == partner(s) => {
                openers.pop();
            }
            Some(_) => return Reduced::Zero,
            None => closers.push(s),
        }
    }
    Reduced::Word { closers, openers }
}

pub fn dyck_contains(w: &[Symbol]) -> bool {
    !dyck_reduce(w).is_zero()
}

/// Whether `w^∞` is a point of the Dyck shift: `red(ww) ≠ 𝟎`.
///
/// Sufficient because `red(w^n)` for `n >= 2` is `c·(o·c)^{n-2}·o` with
/// `red(w) = c·o`, and `o·c` already occurs in `red(ww)`.
pub fn dyck_periodic_admissible(w: &[Symbol]) -> bool {
    let mut ww = w.to_vec();
    ww.extend_from_slice(w);
    !dyck_reduce(&ww).is_zero()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DyckClass {
    KPrime,
    KDoublePrime,
    Both,
    Neither,
}

pub fn dyck_classify(p: &EventuallyPeriodic) -> Result<DyckClass> {
    if !p.is_periodic() {
        return Err(Error::InvalidInput(
            "classification needs a purely periodic point".into(),
        ));
    }
    let w = p.period();
    match dyck_reduce(&w) {
        Reduced::Zero => Err(Error::NotInSystem("period reduces to 0".into())),
        Reduced::Word { closers, openers } => {
            if !dyck_periodic_admissible(&w) {
                return Err(Error::NotInSystem("w·w reduces to 0".into()));
            }
            Ok(match (closers.is_empty(), openers.is_empty()) {
                (true, true) => DyckClass::Both,
                (true, false) => DyckClass::KPrime,
                (false, true) => DyckClass::KDoublePrime,
                (false, false) => DyckClass::Neither,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::parse_symbols;

    fn red(s: &str) -> Reduced {
        dyck_reduce(&parse_symbols(s).unwrap())
    }

    fn per(s: &str) -> EventuallyPeriodic {
        EventuallyPeriodic::periodic(parse_symbols(s).unwrap()).unwrap()
    }

    #[test]
    fn reduction_table() {
        assert!(red("[]").is_one());
        assert!(red("()").is_one());
        assert!(red("").is_one());
        assert_eq!(red("[(").symbols().unwrap(), vec![0, 2]);
        assert!(red("(]").is_zero());
        assert!(red("[)").is_zero());
        assert_eq!(red("])[(").symbols().unwrap(), vec![1, 3, 0, 2]);
        assert_eq!(red("[()]]").symbols().unwrap(), vec![1]);
    }

    #[test]
    fn classification() {
        assert_eq!(dyck_classify(&per("[]")).unwrap(), DyckClass::Both);
        assert_eq!(dyck_classify(&per("[")).unwrap(), DyckClass::KPrime);
        assert_eq!(dyck_classify(&per("]")).unwrap(), DyckClass::KDoublePrime);
        assert_eq!(dyck_classify(&per("][")).unwrap(), DyckClass::Neither);
        assert!(dyck_classify(&per("(]")).is_err());
        assert!(dyck_classify(&per(")[")).is_err());
    }

    #[test]
    fn periodic_admissibility_matches_long_powers() {
        let words = ["][", ")[", "[]]", "(()", "])([", "]("];
        for w in words {
            let s = parse_symbols(w).unwrap();
            let long: Vec<Symbol> = s.iter().copied().cycle().take(s.len() * 8).collect();
            assert_eq!(dyck_periodic_admissible(&s), dyck_contains(&long), "{w}");
        }
    }
}
