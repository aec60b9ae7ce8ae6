use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_integer::Integer;

use super::word::{least_rotation, primitive_root, Symbol, Word};
use crate::error::{Error, Result};
use crate::rational::{dyadic, Rational};

/// Primitive cycle stored as its least rotation, shared between all shifts
/// of a point so orbits cost one allocation.
#[derive(Debug)]
struct Cycle {
    word: Vec<Symbol>,
    fingerprint: u64,
}

impl Cycle {
    fn new(word: Vec<Symbol>) -> Self {
        // FNV-1a over the symbols.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &s in &word {
            for b in s.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        Cycle {
            word,
            fingerprint: h,
        }
    }
}

/// The point `u·w^∞` in canonical form: `w` primitive, `u` minimal.
///
/// The period is kept as a shared least rotation plus a phase, so
/// `shift` on the periodic part is O(1) and equal cycles compare by pointer
/// on the fast path. `Ord` is the lexicographic order of the symbol streams.
#[derive(Clone, Debug)]
pub struct EventuallyPeriodic {
    pre: Vec<Symbol>,
    cycle: Arc<Cycle>,
    phase: usize,
}

impl EventuallyPeriodic {
    pub fn new(pre: Vec<Symbol>, period: Vec<Symbol>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidInput("empty period".into()));
        }
        let (root, _) = primitive_root(&period);
        let n = root.len();
        let mut pre = pre;
        // The period currently reads root[rot..] root[..rot].
        let mut rot = 0usize;
        while let Some(&last) = pre.last() {
            let period_last = root[(rot + n - 1) % n];
            if last != period_last {
                break;
            }
            pre.pop();
            rot = (rot + n - 1) % n;
        }
        let lr = least_rotation(&root);
        let word: Vec<Symbol> = (0..n).map(|i| root[(lr + i) % n]).collect();
        let phase = (rot + n - lr) % n;
        Ok(EventuallyPeriodic {
            pre,
            cycle: Arc::new(Cycle::new(word)),
            phase,
        })
    }

    pub fn from_words(pre: &Word, period: &Word) -> Result<Self> {
        Self::new(pre.symbols().to_vec(), period.symbols().to_vec())
    }

    /// `w^∞`.
    pub fn periodic(period: Vec<Symbol>) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    /// `s^∞`.
    pub fn constant(s: Symbol) -> Self {
        Self::new(Vec::new(), vec![s]).expect("nonempty period")
    }

    pub fn preperiod(&self) -> &[Symbol] {
        &self.pre
    }

    /// The period word as it follows the preperiod.
    pub fn period(&self) -> Vec<Symbol> {
        let n = self.cycle.word.len();
        (0..n)
            .map(|i| self.cycle.word[(self.phase + i) % n])
            .collect()
    }

    pub fn period_len(&self) -> usize {
        self.cycle.word.len()
    }

    pub fn is_periodic(&self) -> bool {
        self.pre.is_empty()
    }

    /// Minimal period of a purely periodic point.
    pub fn minimal_period(&self) -> Option<usize> {
        self.is_periodic().then(|| self.period_len())
    }

    /// Symbol at 0-based position `i`, written `x_{i+1}` in 1-based notation.
    pub fn get(&self, i: usize) -> Symbol {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            let n = self.cycle.word.len();
            self.cycle.word[(self.phase + (i - self.pre.len())) % n]
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<Symbol> {
        (0..len).map(|i| self.get(i)).collect()
    }

    pub fn prefix_word(&self, len: usize) -> Word {
        Word::new(self.prefix(len))
    }

    /// `σ^k(x)` in canonical form.
    pub fn shift(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        if k < self.pre.len() {
            // Dropping leading symbols keeps the last preperiod symbol, so
            // minimality is preserved.
            return EventuallyPeriodic {
                pre: self.pre[k..].to_vec(),
                cycle: Arc::clone(&self.cycle),
                phase: self.phase,
            };
        }
        let n = self.cycle.word.len();
        EventuallyPeriodic {
            pre: Vec::new(),
            cycle: Arc::clone(&self.cycle),
            phase: (self.phase + (k - self.pre.len()) % n) % n,
        }
    }

    /// Index past which two streams agreeing so far agree forever.
    pub fn decision_bound(&self, other: &Self) -> usize {
        let a = self.period_len();
        let b = other.period_len();
        self.pre.len().max(other.pre.len()) + a.lcm(&b)
    }

    /// Number of leading symbols on which the streams agree, `None` if equal.
    pub fn agreement(&self, other: &Self) -> Option<usize> {
        if self == other {
            return None;
        }
        // Unequal canonical forms differ somewhere before the decision bound.
        Some(self.mismatch(other, usize::MAX))
    }

    /// Agreement length capped at `cap`; never scans beyond `cap`.
    pub fn agreement_capped(&self, other: &Self, cap: usize) -> usize {
        if self.pre.is_empty()
            && other.pre.is_empty()
            && self.phase == other.phase
            && Arc::ptr_eq(&self.cycle, &other.cycle)
        {
            return cap;
        }
        self.mismatch(other, cap)
    }

    /// Longest contiguous run of stored symbols starting at position `i`.
    fn run_at(&self, i: usize) -> &[Symbol] {
        if i < self.pre.len() {
            &self.pre[i..]
        } else {
            let n = self.cycle.word.len();
            &self.cycle.word[(self.phase + (i - self.pre.len())) % n..]
        }
    }

    fn mismatch(&self, other: &Self, cap: usize) -> usize {
        let mut i = 0;
        while i < cap {
            let (a, b) = (self.run_at(i), other.run_at(i));
            let len = a.len().min(b.len()).min(cap - i);
            if let Some(k) = a[..len].iter().zip(&b[..len]).position(|(x, y)| x != y) {
                return i + k;
            }
            i += len;
        }
        cap
    }

    /// Whether `self` starts with `w`.
    pub fn starts_with(&self, w: &[Symbol]) -> bool {
        w.iter().enumerate().all(|(i, &s)| self.get(i) == s)
    }

    /// The canonical orbit `σ^j(x)` for `j = 0..n`.
    pub fn orbit(&self, n: usize) -> Vec<EventuallyPeriodic> {
        (0..n).map(|j| self.shift(j)).collect()
    }
}

impl PartialEq for EventuallyPeriodic {
    fn eq(&self, other: &Self) -> bool {
        if self.phase != other.phase || self.pre != other.pre {
            return false;
        }
        Arc::ptr_eq(&self.cycle, &other.cycle)
            || (self.cycle.fingerprint == other.cycle.fingerprint
                && self.cycle.word == other.cycle.word)
    }
}

impl Eq for EventuallyPeriodic {}

impl Hash for EventuallyPeriodic {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.pre.hash(state);
        self.cycle.word.len().hash(state);
        self.cycle.fingerprint.hash(state);
        self.phase.hash(state);
    }
}

impl Ord for EventuallyPeriodic {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_compare(self, other)
    }
}

impl PartialOrd for EventuallyPeriodic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EventuallyPeriodic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::render_sequence(self))
    }
}

/// `ρ(x, y) = 2^{-k}` with `k` the 1-based index of the first disagreement.
pub fn rho(x: &EventuallyPeriodic, y: &EventuallyPeriodic) -> Rational {
    match x.agreement(y) {
        None => Rational::from_integer(0.into()),
        Some(i) => dyadic(i as u32 + 1),
    }
}

/// 1-based index of the first disagreement, `None` when equal.
pub fn first_disagreement(x: &EventuallyPeriodic, y: &EventuallyPeriodic) -> Option<usize> {
    x.agreement(y).map(|i| i + 1)
}

pub fn lex_compare(x: &EventuallyPeriodic, y: &EventuallyPeriodic) -> Ordering {
    match x.agreement(y) {
        None => Ordering::Equal,
        Some(i) => x.get(i).cmp(&y.get(i)),
    }
}
