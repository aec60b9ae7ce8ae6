//! Test-side reference computations. Nothing here calls into the library's
//! distance, language or expansion code; inputs are plain vectors.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Point `pre (period)^inf` as raw vectors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pt {
    pub pre: Vec<u32>,
    pub per: Vec<u32>,
}

impl Pt {
    pub fn new(pre: &[u32], per: &[u32]) -> Pt {
        Pt {
            pre: pre.to_vec(),
            per: per.to_vec(),
        }
    }

    pub fn at(&self, i: usize) -> u32 {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }
}

/// `2^{-k}` for the first disagreement `k` (1-based), scanning far enough
/// for both tails to have cycled jointly.
pub fn rho(x: &Pt, y: &Pt) -> Q {
    let bound = x.pre.len().max(y.pre.len()) + x.per.len() * y.per.len() + 1;
    for i in 0..bound {
        if x.at(i) != y.at(i) {
            return Q::new(BigInt::one(), BigInt::one() << (i + 1));
        }
    }
    Q::zero()
}

/// Prokhorov distance of two finite measures by levels: on the band
/// `(t, t']` between consecutive realised distances the fattening `A^ε` is
/// the closed `t`-neighbourhood, so the band contributes `max(t, D(t))`
/// whenever the worst deficiency `D(t) = max_A μ(A) − ν(A^t)` fits below
/// `t'`.
pub fn prokhorov(mu: &[(Pt, Q)], nu: &[(Pt, Q)]) -> Q {
    assert!(mu.len() <= 16, "oracle enumerates subsets");
    let mut levels: BTreeSet<Q> = BTreeSet::new();
    levels.insert(Q::zero());
    for (x, _) in mu {
        for (y, _) in nu {
            levels.insert(rho(x, y));
        }
    }
    let levels: Vec<Q> = levels.into_iter().collect();
    let mut best: Option<Q> = None;
    for (i, t) in levels.iter().enumerate() {
        let mut worst = Q::zero();
        for mask in 1u32..(1 << mu.len()) {
            let mass: Q = (0..mu.len())
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| mu[k].1.clone())
                .sum();
            let cover: Q = nu
                .iter()
                .filter(|(y, _)| {
                    (0..mu.len()).any(|k| mask >> k & 1 == 1 && rho(&mu[k].0, y) <= *t)
                })
                .map(|(_, m)| m.clone())
                .sum();
            if mass.clone() - cover.clone() > worst {
                worst = mass - cover;
            }
        }
        let fits = match levels.get(i + 1) {
            Some(next) => worst <= *next,
            None => true,
        };
        if fits {
            let cand = if worst > *t { worst } else { t.clone() };
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.expect("top band always fits")
}

/// Greedy digits of 1 in base `beta` (rational).
pub fn greedy_digits(beta: &Q, n: usize) -> Vec<u32> {
    let mut x = Q::one();
    let mut out = Vec::new();
    for _ in 0..n {
        let y = beta * &x;
        let d = y.floor();
        x = y - &d;
        out.push(d.to_integer().try_into().unwrap());
    }
    out
}

/// `1 0^n 1` with `n ∉ S` never occurs.
pub fn sgap_scan(w: &[u32], s: &[u64]) -> bool {
    if w.iter().any(|&c| c > 1) {
        return false;
    }
    let ones: Vec<usize> = (0..w.len()).filter(|&i| w[i] == 1).collect();
    ones.windows(2)
        .all(|p| s.contains(&((p[1] - p[0] - 1) as u64)))
}

/// Every suffix is `⪯` the equal-length prefix of `hat`.
pub fn beta_suffix_rule(w: &[u32], hat: impl Fn(usize) -> u32) -> bool {
    (0..w.len()).all(|k| {
        for (i, &c) in w[k..].iter().enumerate() {
            let h = hat(i);
            if c != h {
                return c < h;
            }
        }
        true
    })
}

/// Stack reduction over `[ ] ( )` = 0 1 2 3; `None` is the zero element.
pub fn dyck_reduce(w: &[u32]) -> Option<Vec<u32>> {
    let mut stack: Vec<u32> = Vec::new();
    for &c in w {
        match c {
            0 | 2 => stack.push(c),
            1 | 3 => {
                let want = c - 1;
                match stack.last() {
                    Some(&top) if top == want => {
                        stack.pop();
                    }
                    Some(&top) if top == 0 || top == 2 => return None,
                    _ => stack.push(c),
                }
            }
            _ => return None,
        }
    }
    Some(stack)
}

/// Compositions of `n` into parts `≥ 2`.
pub fn compositions_min2(n: usize) -> u64 {
    if n == 0 {
        return 1;
    }
    (2..=n).map(|p| compositions_min2(n - p)).sum()
}

pub fn fibonacci(n: usize) -> u128 {
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 0..n {
        let c = a + b;
        a = b;
        b = c;
    }
    a
}

/// `x_j … x_{j+len-1}` of a periodic point given by its period.
pub fn window(per: &[u32], j: usize, len: usize) -> Vec<u32> {
    (j..j + len).map(|i| per[i % per.len()]).collect()
}
