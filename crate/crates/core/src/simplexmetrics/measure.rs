use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::seqcore::{primitive_root, render_sequence, render_symbols, EventuallyPeriodic, Symbol};

/// How atoms are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    /// Atoms are blocks of length `m`; blocks that agree are one point.
    Truncated(usize),
}

pub const DEFAULT_TRUNCATION: usize = 12;

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "EXACT"),
            Mode::Truncated(m) => write!(f, "TRUNCATED({m})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Seq(EventuallyPeriodic),
    Block(Vec<Symbol>),
}

impl Point {
    /// Leading symbols on which the two points agree, `None` when they are
    /// the same point.
    pub fn agreement(&self, other: &Point) -> Option<usize> {
        match (self, other) {
            (Point::Seq(a), Point::Seq(b)) => a.agreement(b),
            (Point::Block(a), Point::Block(b)) => {
                let n = a.len().min(b.len());
                match (0..n).find(|&i| a[i] != b[i]) {
                    Some(i) => Some(i),
                    None if a.len() == b.len() => None,
                    None => Some(n),
                }
            }
            _ => Some(0),
        }
    }

    /// Agreement length capped at `cap`; equal points give `cap`.
    pub fn agreement_capped(&self, other: &Point, cap: usize) -> usize {
        match (self, other) {
            (Point::Seq(a), Point::Seq(b)) => a.agreement_capped(b, cap),
            _ => self.agreement(other).unwrap_or(cap).min(cap),
        }
    }

    /// First `len` symbols.
    pub fn head(&self, len: usize) -> Vec<Symbol> {
        match self {
            Point::Seq(x) => x.prefix(len),
            Point::Block(b) => b[..len.min(b.len())].to_vec(),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Point::Seq(x) => render_sequence(x),
            Point::Block(b) => render_symbols(b),
        }
    }
}

/// Distance between two points: `2^{-(a+1)}` for agreement `a`, else 0.
pub fn point_distance(a: &Point, b: &Point) -> Rational {
    match a.agreement(b) {
        None => Rational::zero(),
        Some(k) => rational::dyadic(k as u32 + 1),
    }
}

/// Finitely supported probability measure with exact masses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinMeasure {
    mode: Mode,
    atoms: Vec<(Point, Rational)>,
}

impl FinMeasure {
    /// Merges repeated points and checks the masses.
    pub fn new(mode: Mode, atoms: Vec<(Point, Rational)>) -> Result<Self> {
        let mut merged: BTreeMap<Point, Rational> = BTreeMap::new();
        for (p, m) in atoms {
            match (&p, mode) {
                (Point::Seq(_), Mode::Exact) => {}
                (Point::Block(b), Mode::Truncated(k)) if b.len() == k => {}
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "atom {} does not fit mode {mode}",
                        p.render()
                    )))
                }
            }
            if m <= Rational::zero() {
                return Err(Error::InvalidInput(format!(
                    "non-positive mass {m} at {}",
                    p.render()
                )));
            }
            *merged.entry(p).or_insert_with(Rational::zero) += m;
        }
        let total: Rational = merged.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidInput(format!("masses sum to {total}, not 1")));
        }
        Ok(FinMeasure {
            mode,
            atoms: merged.into_iter().collect(),
        })
    }

    pub fn dirac(x: EventuallyPeriodic) -> Self {
        FinMeasure {
            mode: Mode::Exact,
            atoms: vec![(Point::Seq(x), Rational::one())],
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Atoms in point order.
    pub fn atoms(&self) -> &[(Point, Rational)] {
        &self.atoms
    }

    /// Atoms already sorted, distinct and normalized.
    pub(crate) fn from_sorted(mode: Mode, atoms: Vec<(Point, Rational)>) -> Self {
        FinMeasure { mode, atoms }
    }

    pub fn support_len(&self) -> usize {
        self.atoms.len()
    }

    pub fn mass_of(&self, p: &Point) -> Rational {
        self.atoms
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.atoms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// Push-forward to `TRUNCATED(m)`: every atom replaced by its first `m`
    /// symbols.
    pub fn truncate(&self, m: usize) -> Result<FinMeasure> {
        if m == 0 {
            return Err(Error::InvalidInput(
                "truncation depth must be positive".into(),
            ));
        }
        match self.mode {
            Mode::Truncated(k) if k < m => {
                return Err(Error::InvalidInput(format!(
                    "cannot deepen TRUNCATED({k}) to {m}"
                )))
            }
            _ => {}
        }
        let atoms = self
            .atoms
            .iter()
            .map(|(p, w)| (Point::Block(p.head(m)), w.clone()))
            .collect();
        FinMeasure::new(Mode::Truncated(m), atoms)
    }
}

impl fmt::Display for FinMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, m)) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·δ[{}]", rational::format_rational(m), p.render())?;
        }
        Ok(())
    }
}

const MAX_EMPIRICAL_LEN: usize = 1 << 24;

fn counts_to_measure(mode: Mode, counts: BTreeMap<Point, usize>, n: usize) -> Result<FinMeasure> {
    let atoms = counts
        .into_iter()
        .map(|(p, c)| (p, rational::ratio(c as i64, n as i64)))
        .collect();
    FinMeasure::new(mode, atoms)
}

/// Start indices of the rotations of a primitive word in increasing order
/// of the periodic streams they generate (prefix doubling).
pub(crate) fn rotation_order(w: &[Symbol]) -> Vec<usize> {
    let n = w.len();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut rank: Vec<usize> = w.iter().map(|&s| s as usize).collect();
    let mut next = vec![0usize; n];
    let mut k = 1usize;
    loop {
        let key = |i: usize| (rank[i], rank[(i + k) % n]);
        sa.sort_unstable_by_key(|&i| key(i));
        next[sa[0]] = 0;
        for t in 1..n {
            next[sa[t]] = next[sa[t - 1]] + usize::from(key(sa[t - 1]) != key(sa[t]));
        }
        std::mem::swap(&mut rank, &mut next);
        if rank[sa[n - 1]] == n - 1 || k >= n {
            return sa;
        }
        k *= 2;
    }
}

/// `Emp(x, n)`: mass `1/n` on each of `σ^j(x)`, `j < n`.
pub fn empirical(x: &EventuallyPeriodic, n: usize, mode: Mode) -> Result<FinMeasure> {
    if n == 0 {
        return Err(Error::InvalidInput("empirical measure needs n >= 1".into()));
    }
    if n > MAX_EMPIRICAL_LEN {
        return Err(Error::LimitExceeded(format!("empirical length {n}")));
    }
    let pre = x.preperiod().len();
    let per = x.period_len();
    let count = |j: usize| if j < pre { 1 } else { (n - 1 - j) / per + 1 };
    let m = match mode {
        Mode::Truncated(0) => {
            return Err(Error::InvalidInput(
                "truncation depth must be positive".into(),
            ))
        }
        Mode::Truncated(m) => m,
        Mode::Exact => {
            // Orbit points are pairwise distinct, so only their order is needed.
            let mut atoms: Vec<(Point, Rational)> = Vec::new();
            if n > pre {
                let cyc = x.shift(pre);
                for r in rotation_order(&cyc.period()) {
                    let j = pre + r;
                    if j < n {
                        atoms.push((
                            Point::Seq(cyc.shift(r)),
                            rational::ratio(count(j) as i64, n as i64),
                        ));
                    }
                }
            }
            for j in 0..pre.min(n) {
                let p = Point::Seq(x.shift(j));
                let at = atoms.partition_point(|(q, _)| *q < p);
                atoms.insert(at, (p, rational::ratio(1, n as i64)));
            }
            return Ok(FinMeasure::from_sorted(mode, atoms));
        }
    };
    let mut counts: BTreeMap<Point, usize> = BTreeMap::new();
    for j in 0..n.min(pre + per) {
        *counts
            .entry(Point::Block(x.shift(j).prefix(m)))
            .or_default() += count(j);
    }
    counts_to_measure(mode, counts, n)
}

/// `Emp(x, n)` of a finite prefix in `TRUNCATED(m)` mode.
pub fn empirical_word(x: &[Symbol], n: usize, m: usize) -> Result<FinMeasure> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidInput(
            "empirical measure needs n, m >= 1".into(),
        ));
    }
    if x.len() < n + m {
        return Err(Error::InsufficientPrefix {
            needed: n + m,
            have: x.len(),
        });
    }
    let mut counts: BTreeMap<Point, usize> = BTreeMap::new();
    for j in 0..n {
        *counts
            .entry(Point::Block(x[j..j + m].to_vec()))
            .or_default() += 1;
    }
    counts_to_measure(Mode::Truncated(m), counts, n)
}

/// CO-measure of a periodic point: uniform on its orbit.
pub fn co_measure(p: &EventuallyPeriodic) -> Result<FinMeasure> {
    if !p.is_periodic() {
        return Err(Error::InvalidInput(format!(
            "{} is not purely periodic",
            render_sequence(p)
        )));
    }
    empirical(p, p.period_len(), Mode::Exact)
}

/// CO-measure of `w^∞` for a primitive word `w`.
pub fn co_measure_word(w: &[Symbol]) -> Result<FinMeasure> {
    if w.is_empty() {
        return Err(Error::InvalidInput("empty period".into()));
    }
    let (_, reps) = primitive_root(w);
    if reps != 1 {
        return Err(Error::NotPrimitive);
    }
    co_measure(&EventuallyPeriodic::periodic(w.to_vec())?)
}

/// Exact mixture `Σ λ_i μ_i`.
pub fn convex(parts: &[(Rational, FinMeasure)]) -> Result<FinMeasure> {
    let Some((_, first)) = parts.first() else {
        return Err(Error::WeightsNotNormalized);
    };
    let mode = first.mode;
    let mut total = Rational::zero();
    let mut atoms = Vec::new();
    for (lambda, mu) in parts {
        if mu.mode != mode {
            return Err(Error::ModeMismatch);
        }
        if *lambda < Rational::zero() || *lambda > Rational::one() {
            return Err(Error::WeightsNotNormalized);
        }
        total += lambda;
        if lambda.is_zero() {
            continue;
        }
        atoms.extend(mu.atoms.iter().map(|(p, m)| (p.clone(), m * lambda)));
    }
    if !total.is_one() {
        return Err(Error::WeightsNotNormalized);
    }
    FinMeasure::new(mode, atoms)
}
