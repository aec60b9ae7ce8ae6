use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::flow::{Capacity, FlowNetwork};
use super::measure::{FinMeasure, Mode};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Radius level: `Equal` is `t = 0`; `Agree(j)` is `t = 2^{-(j+1)}`, the
/// pairs agreeing on their first `j` symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    Equal,
    Agree(usize),
}

impl Level {
    pub fn radius(self) -> Rational {
        match self {
            Level::Equal => Rational::zero(),
            Level::Agree(j) => rational::dyadic(j as u32 + 1),
        }
    }
}

/// One direction of the distance: `inf{ε : μ(A) ≤ ν(A^ε) + ε}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneSided {
    pub value: Rational,
    /// Whether the infimum is a minimum.
    pub attained: bool,
    /// Flow problems solved.
    pub flows: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceResult {
    pub mode: Mode,
    /// Value under the mode's metric; exact in `EXACT` mode.
    pub value: Rational,
    pub lo: Rational,
    pub hi: Rational,
    pub forward: OneSided,
    pub backward: OneSided,
}

impl DistanceResult {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

/// Atoms of both measures in merged stream order, with the agreement of
/// each consecutive pair. At a dyadic radius "distance ≤ t" is an
/// equivalence whose classes are runs of this order.
struct Layout {
    /// `(from_mu, index)` per position.
    order: Vec<(bool, usize)>,
    /// Agreement between positions `i` and `i + 1`, capped at `deepest + 1`;
    /// `None` for equal points.
    adj: Vec<Option<usize>>,
    /// Largest agreement between a μ-atom and a ν-atom.
    deepest: usize,
}

impl Layout {
    fn new(mu: &FinMeasure, nu: &FinMeasure) -> Self {
        let ma = mu.atoms();
        let mut slots: Vec<Vec<usize>> = vec![Vec::new(); ma.len() + 1];
        let mut deepest = 0usize;
        for (j, (q, _)) in nu.atoms().iter().enumerate() {
            let at = ma.partition_point(|(p, _)| p < q);
            slots[at].push(j);
            // The nearest μ-atoms in stream order carry the longest agreement.
            for k in [at.checked_sub(1), Some(at), Some(at + 1)]
                .into_iter()
                .flatten()
            {
                if let Some((p, _)) = ma.get(k) {
                    if let Some(a) = p.agreement(q) {
                        deepest = deepest.max(a);
                    }
                }
            }
        }
        let mut order = Vec::with_capacity(ma.len() + nu.support_len());
        for (i, slot) in slots.iter().enumerate() {
            order.extend(slot.iter().map(|&j| (false, j)));
            if i < ma.len() {
                order.push((true, i));
            }
        }
        let point = |(side, i): (bool, usize)| if side { &ma[i].0 } else { &nu.atoms()[i].0 };
        let adj = order
            .windows(2)
            .map(|w| {
                let (a, b) = (point(w[0]), point(w[1]));
                if a == b {
                    None
                } else {
                    Some(a.agreement_capped(b, deepest + 1))
                }
            })
            .collect();
        Layout {
            order,
            adj,
            deepest,
        }
    }

    fn levels(&self) -> Vec<Level> {
        let mut out = vec![Level::Equal];
        out.extend((0..=self.deepest).rev().map(Level::Agree));
        out
    }

    /// Class index of every position at `level`.
    fn classes(&self, level: Level) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.order.len());
        let mut c = 0usize;
        for i in 0..self.order.len() {
            if i > 0 {
                let split = match (level, self.adj[i - 1]) {
                    (_, None) => false,
                    (Level::Equal, Some(_)) => true,
                    (Level::Agree(j), Some(a)) => a < j,
                };
                c += usize::from(split);
            }
            out.push(c);
        }
        out
    }
}

/// `max_A μ(A) − ν(A at radius t)`, as `1 − maxflow` in the network
/// source → μ-atoms → class hubs → ν-atoms → sink.
///
/// At a dyadic radius the relation "distance ≤ t" is an equivalence on
/// atoms, so routing μ-atom → ν-atom edges through one hub per class gives
/// the same cuts as the complete bipartite edge set.
pub fn deficiency(mu: &FinMeasure, nu: &FinMeasure, level: Level) -> Rational {
    let layout = Layout::new(mu, nu);
    Masses::new(mu, nu).deficiency(&layout, level)
}

/// Masses scaled to integers by a common denominator. Small scales run the
/// flow in `u128`, which cannot overflow since every flow is at most `scale`.
struct Masses {
    scale: BigInt,
    mu: Vec<BigInt>,
    nu: Vec<BigInt>,
    small: Option<(u128, Vec<u128>, Vec<u128>)>,
}

impl Masses {
    fn new(mu: &FinMeasure, nu: &FinMeasure) -> Self {
        let scale =
            rational::common_denominator(mu.atoms().iter().chain(nu.atoms()).map(|(_, m)| m));
        let scaled = |m: &Rational| -> BigInt { m.numer() * (&scale / m.denom()) };
        let mu: Vec<BigInt> = mu.atoms().iter().map(|(_, m)| scaled(m)).collect();
        let nu: Vec<BigInt> = nu.atoms().iter().map(|(_, m)| scaled(m)).collect();
        let small = u64::try_from(&scale).ok().map(|s| {
            let cast = |v: &[BigInt]| v.iter().map(|x| u128::try_from(x).unwrap()).collect();
            (u128::from(s), cast(&mu), cast(&nu))
        });
        Masses {
            scale,
            mu,
            nu,
            small,
        }
    }

    fn deficiency(&self, layout: &Layout, level: Level) -> Rational {
        let flow = match &self.small {
            Some((scale, mu, nu)) => BigInt::from(max_flow(layout, level, mu, nu, *scale)),
            None => max_flow(layout, level, &self.mu, &self.nu, self.scale.clone()),
        };
        Rational::one() - Rational::new(flow, self.scale.clone())
    }
}

fn max_flow<C: Capacity>(layout: &Layout, level: Level, mu: &[C], nu: &[C], unbounded: C) -> C {
    let class = layout.classes(level);
    let hubs = class.last().map_or(0, |c| c + 1);
    let (s, t) = (0, 1);
    let mu0 = 2;
    let hub0 = mu0 + mu.len();
    let nu0 = hub0 + hubs;
    let mut g = FlowNetwork::<C>::new(nu0 + nu.len());
    for (pos, &(side, i)) in layout.order.iter().enumerate() {
        let hub = hub0 + class[pos];
        if side {
            g.add_edge(s, mu0 + i, mu[i].clone());
            g.add_edge(mu0 + i, hub, unbounded.clone());
        } else {
            g.add_edge(hub, nu0 + i, unbounded.clone());
            g.add_edge(nu0 + i, t, nu[i].clone());
        }
    }
    g.max_flow(s, t, unbounded)
}

/// Forward value by bisection over the levels.
///
/// With `D_i` nonincreasing and `t_i` increasing, the first level where
/// `D_i ≤ t_i` is `i*`; the infimum of `max(t_i, D_i)` over bands is
/// `min(t_{i*}, D_{i*-1})`.
pub fn one_sided(mu: &FinMeasure, nu: &FinMeasure) -> Result<OneSided> {
    if mu.mode() != nu.mode() {
        return Err(Error::ModeMismatch);
    }
    let layout = Layout::new(mu, nu);
    let masses = Masses::new(mu, nu);
    let lv = layout.levels();
    let mut cache: HashMap<usize, Rational> = HashMap::new();
    let mut d = |i: usize| -> Rational {
        cache
            .entry(i)
            .or_insert_with(|| masses.deficiency(&layout, lv[i]))
            .clone()
    };
    let holds = |i: usize, d: &mut dyn FnMut(usize) -> Rational| d(i) <= lv[i].radius();
    let (mut lo, mut hi) = (0usize, lv.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if holds(mid, &mut d) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let star = lo;
    let (value, attained) = if star == 0 {
        (Rational::zero(), false)
    } else {
        let t = lv[star].radius();
        let prev = d(star - 1);
        if prev < t {
            (prev, true)
        } else {
            (t.clone(), prev == t)
        }
    };
    Ok(OneSided {
        value,
        attained,
        flows: cache.len(),
    })
}

/// Both one-sided values; the distance is their maximum. In `TRUNCATED(m)`
/// mode the true distance of any measures with these truncations lies in
/// `[value, value + 2^{-(m+1)}]`.
pub fn dbar(mu: &FinMeasure, nu: &FinMeasure) -> Result<DistanceResult> {
    let forward = one_sided(mu, nu)?;
    let backward = one_sided(nu, mu)?;
    let value = forward.value.clone().max(backward.value.clone());
    let hi = match mu.mode() {
        Mode::Exact => value.clone(),
        Mode::Truncated(m) => &value + rational::dyadic(m as u32 + 1),
    };
    Ok(DistanceResult {
        mode: mu.mode(),
        lo: value.clone(),
        hi,
        value,
        forward,
        backward,
    })
}
