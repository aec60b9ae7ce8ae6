//! β-expansions of 1 with certified floors.
//!
//! Elements of ℚ(β) are polynomials in β of degree below the minimal
//! polynomial's, so the greedy map `x ↦ βx − ⌊βx⌋` stays exact. A rational
//! β is the degree-one case. Floors of irrational elements are decided by
//! bisecting β's isolating interval until the enclosure clears an integer.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{floor, int, Rational};
use crate::seqcore::{lex_compare, EventuallyPeriodic, Symbol};

pub const DEFAULT_MAX_BISECTIONS: usize = 4096;
pub const DEFAULT_DIGIT_BUDGET: usize = 512;

/// β > 1, rational or algebraic with an isolating interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BetaNumber {
    Rational(Rational),
    Algebraic(AlgebraicBeta),
}

/// Root of `minpoly` (coefficients low to high, assumed irreducible) lying
/// in `[lo, hi]` with `1 <= lo`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicBeta {
    minpoly: Vec<Rational>,
    lo: Rational,
    hi: Rational,
}

fn eval_poly(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

impl AlgebraicBeta {
    pub fn new(minpoly: Vec<Rational>, lo: Rational, hi: Rational) -> Result<Self> {
        let mut minpoly = minpoly;
        while minpoly.last().is_some_and(|c| c.is_zero()) {
            minpoly.pop();
        }
        if minpoly.len() < 3 {
            return Err(Error::InvalidInput(
                "minimal polynomial must have degree >= 2".into(),
            ));
        }
        if lo < int(1) || lo >= hi {
            return Err(Error::InvalidInput(
                "isolating interval must satisfy 1 <= lo < hi".into(),
            ));
        }
        let a = eval_poly(&minpoly, &lo);
        let b = eval_poly(&minpoly, &hi);
        if a.is_zero() || b.is_zero() || a.signum() == b.signum() {
            return Err(Error::InvalidInput(
                "minimal polynomial must change sign strictly inside the interval".into(),
            ));
        }
        Ok(AlgebraicBeta { minpoly, lo, hi })
    }

    /// The golden ratio, root of `x² − x − 1` in `[1, 2]`.
    pub fn golden() -> Self {
        Self::new(vec![int(-1), int(-1), int(1)], int(1), int(2)).expect("golden ratio")
    }

    pub fn minpoly(&self) -> &[Rational] {
        &self.minpoly
    }

    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.lo, &self.hi)
    }

    fn bisect(&mut self) -> Result<()> {
        let mid = (&self.lo + &self.hi) / int(2);
        let fm = eval_poly(&self.minpoly, &mid);
        if fm.is_zero() {
            return Err(Error::InvalidInput(
                "minimal polynomial has a rational root".into(),
            ));
        }
        let flo = eval_poly(&self.minpoly, &self.lo);
        if fm.signum() == flo.signum() {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
        Ok(())
    }
}

impl BetaNumber {
    pub fn rational(q: Rational) -> Result<Self> {
        if q <= int(1) {
            return Err(Error::InvalidInput("beta must exceed 1".into()));
        }
        Ok(BetaNumber::Rational(q))
    }

    pub fn golden() -> Self {
        BetaNumber::Algebraic(AlgebraicBeta::golden())
    }

    /// `⌊β⌋`, the largest digit.
    pub fn floor(&self) -> Result<Symbol> {
        let mut f = Field::new(self);
        let b = f.beta_element();
        f.floor(&b)
    }
}

/// ℚ(β) as polynomials modulo the monic minimal polynomial.
struct Field {
    /// Monic minimal polynomial, low to high.
    monic: Vec<Rational>,
    alg: Option<AlgebraicBeta>,
    max_bisections: usize,
}

type Elem = Vec<Rational>;

impl Field {
    fn new(beta: &BetaNumber) -> Self {
        match beta {
            BetaNumber::Rational(q) => Field {
                monic: vec![-q.clone(), int(1)],
                alg: None,
                max_bisections: DEFAULT_MAX_BISECTIONS,
            },
            BetaNumber::Algebraic(a) => {
                let lead = a.minpoly.last().expect("nonempty").clone();
                Field {
                    monic: a.minpoly.iter().map(|c| c / &lead).collect(),
                    alg: Some(a.clone()),
                    max_bisections: DEFAULT_MAX_BISECTIONS,
                }
            }
        }
    }

    fn degree(&self) -> usize {
        self.monic.len() - 1
    }

    fn one(&self) -> Elem {
        let mut e = vec![Rational::zero(); self.degree()];
        e[0] = int(1);
        e
    }

    fn beta_element(&self) -> Elem {
        let mut e = vec![Rational::zero(); self.degree()];
        if self.degree() == 1 {
            e[0] = -self.monic[0].clone();
        } else {
            e[1] = int(1);
        }
        e
    }

    fn mul_beta(&self, e: &Elem) -> Elem {
        let d = self.degree();
        let top = e[d - 1].clone();
        let mut out = vec![Rational::zero(); d];
        for i in (1..d).rev() {
            out[i] = e[i - 1].clone();
        }
        if !top.is_zero() {
            for (i, o) in out.iter_mut().enumerate() {
                *o -= &top * &self.monic[i];
            }
        }
        out
    }

    fn floor(&mut self, e: &Elem) -> Result<Symbol> {
        let f = if e[1..].iter().all(|c| c.is_zero()) {
            floor(&e[0])
        } else {
            let alg = self
                .alg
                .as_mut()
                .expect("irrational element needs an algebraic beta");
            let mut found = None;
            for _ in 0..=self.max_bisections {
                let (lo, hi) = enclosure(e, alg);
                let (fl, fh) = (floor(&lo), floor(&hi));
                if fl == fh {
                    found = Some(fl);
                    break;
                }
                alg.bisect()?;
            }
            found.ok_or(Error::PrecisionExhausted)?
        };
        if f.is_negative() {
            return Err(Error::InvalidInput("negative digit".into()));
        }
        f.to_u32()
            .ok_or_else(|| Error::InvalidInput("digit exceeds the symbol range".into()))
    }
}

fn enclosure(e: &Elem, alg: &AlgebraicBeta) -> (Rational, Rational) {
    let mut lo = e[0].clone();
    let mut hi = e[0].clone();
    let mut plo = int(1);
    let mut phi = int(1);
    for c in &e[1..] {
        plo = &plo * &alg.lo;
        phi = &phi * &alg.hi;
        if c.is_negative() {
            lo += c * &phi;
            hi += c * &plo;
        } else {
            lo += c * &plo;
            hi += c * &phi;
        }
    }
    (lo, hi)
}

/// Greedy digits `d_1..d_n` of the β-expansion of 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaExpansion {
    pub digits: Vec<Symbol>,
    /// Least `j` with `x_j = 0`, certified exactly.
    pub finite_at: Option<usize>,
}

pub fn beta_expand(beta: &BetaNumber, n: usize) -> Result<BetaExpansion> {
    let mut f = Field::new(beta);
    let mut x = f.one();
    let mut digits = Vec::with_capacity(n);
    let mut finite_at = None;
    for j in 1..=n {
        if finite_at.is_some() {
            digits.push(0);
            continue;
        }
        let bx = f.mul_beta(&x);
        let d = f.floor(&bx)?;
        let mut next = bx;
        next[0] -= int(d as i64);
        digits.push(d);
        if next.iter().all(|c| c.is_zero()) {
            finite_at = Some(j);
        }
        x = next;
    }
    Ok(BetaExpansion { digits, finite_at })
}

/// `d_β`, classified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DBeta {
    /// `d_1..d_k 0^∞` with `d_k > 0`.
    Finite(Vec<Symbol>),
    /// Eventually periodic and not ending in `0^∞`.
    Infinite(EventuallyPeriodic),
    /// Neither detected within the digit budget; the known prefix.
    Truncated(Vec<Symbol>),
}

/// Runs the greedy map until `x_j = 0`, a repeated state, or `budget`
/// digits.
pub fn expansion_of_one(beta: &BetaNumber, budget: usize) -> Result<DBeta> {
    let mut f = Field::new(beta);
    let mut x = f.one();
    let mut seen: HashMap<Elem, usize> = HashMap::new();
    let mut digits: Vec<Symbol> = Vec::new();
    for j in 0..budget {
        if let Some(&i) = seen.get(&x) {
            let ep = EventuallyPeriodic::new(digits[..i].to_vec(), digits[i..j].to_vec())?;
            return Ok(DBeta::Infinite(ep));
        }
        seen.insert(x.clone(), j);
        let bx = f.mul_beta(&x);
        let d = f.floor(&bx)?;
        let mut next = bx;
        next[0] -= int(d as i64);
        digits.push(d);
        if next.iter().all(|c| c.is_zero()) {
            return Ok(DBeta::Finite(digits));
        }
        x = next;
    }
    Ok(DBeta::Truncated(digits))
}

/// `d̂_β`: periodic, or a known prefix when `d_β` was truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BetaHat {
    Periodic(EventuallyPeriodic),
    Truncated(Vec<Symbol>),
}

impl BetaHat {
    /// 0-based digit `d_{i+1}`, `None` past a truncated prefix.
    pub fn digit(&self, i: usize) -> Option<Symbol> {
        match self {
            BetaHat::Periodic(x) => Some(x.get(i)),
            BetaHat::Truncated(d) => d.get(i).copied(),
        }
    }

    pub fn known_len(&self) -> Option<usize> {
        match self {
            BetaHat::Periodic(_) => None,
            BetaHat::Truncated(d) => Some(d.len()),
        }
    }

    pub fn first_digit(&self) -> Symbol {
        self.digit(0).unwrap_or(0)
    }

    pub fn is_truncated(&self) -> bool {
        matches!(self, BetaHat::Truncated(_))
    }
}

fn check_digits(d: &[Symbol]) -> Result<()> {
    let first = *d
        .first()
        .ok_or_else(|| Error::InvalidInput("empty digit data".into()))?;
    if first == 0 {
        return Err(Error::InvalidInput(
            "d_1 = floor(beta) must be positive".into(),
        ));
    }
    if d.iter().any(|&x| x > first) {
        return Err(Error::InvalidInput(
            "digit exceeds d_1 = floor(beta)".into(),
        ));
    }
    Ok(())
}

pub fn beta_hat(d: &DBeta) -> Result<BetaHat> {
    match d {
        DBeta::Finite(digits) => {
            let mut w = digits.clone();
            while w.last() == Some(&0) {
                w.pop();
            }
            check_digits(&w)?;
            let last = w.last_mut().expect("nonempty after check");
            *last -= 1;
            Ok(BetaHat::Periodic(EventuallyPeriodic::periodic(w)?))
        }
        DBeta::Infinite(x) => {
            if x.period() == [0] {
                return beta_hat(&DBeta::Finite(x.preperiod().to_vec()));
            }
            let mut all = x.preperiod().to_vec();
            all.extend(x.period());
            check_digits(&all)?;
            Ok(BetaHat::Periodic(x.clone()))
        }
        DBeta::Truncated(digits) => {
            check_digits(digits)?;
            Ok(BetaHat::Truncated(digits.clone()))
        }
    }
}

/// `σ^k(x) ⪯ x` for every `k`, checked for `k <= |pre| + |period|`.
pub fn parry_valid(x: &EventuallyPeriodic) -> bool {
    let bound = x.preperiod().len() + x.period_len();
    (1..=bound).all(|k| lex_compare(&x.shift(k), x) != Ordering::Greater)
}

/// Prefix form of the Parry condition: every suffix of `d` is `⪯` the
/// prefix of the same length.
pub fn parry_valid_prefix(d: &[Symbol]) -> bool {
    (1..d.len()).all(|k| d[k..] <= d[..d.len() - k])
}

/// Finite-word admissibility: every suffix of `w` is `⪯` the prefix of
/// `d̂_β` of equal length.
pub fn beta_contains(hat: &BetaHat, w: &[Symbol]) -> Result<bool> {
    for i in 0..w.len() {
        for (t, &s) in w[i..].iter().enumerate() {
            let h = hat.digit(t).ok_or(Error::Undecided)?;
            match s.cmp(&h) {
                Ordering::Less => break,
                Ordering::Greater => return Ok(false),
                Ordering::Equal => {}
            }
        }
    }
    Ok(true)
}

/// Decimal approximation of β for display.
pub fn beta_to_f64(beta: &BetaNumber) -> f64 {
    match beta {
        BetaNumber::Rational(q) => crate::rational::to_f64(q),
        BetaNumber::Algebraic(a) => {
            let mut a = a.clone();
            for _ in 0..64 {
                if a.bisect().is_err() {
                    break;
                }
            }
            crate::rational::to_f64(&((&a.lo + &a.hi) / int(2)))
        }
    }
}
