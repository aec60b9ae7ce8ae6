use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graphview::{loops_through, return_counts, GammaDoublePrime, GammaEnt, LabelledGraph};
use crate::orbitlab::{
    approx_convex, generic_prefix, oscillation_prefix, Combo, GenericOptions, GenericReport,
};
use crate::rational::{self, Rational};
use crate::seqcore::{primitive_root, render_sequence, EventuallyPeriodic, Symbol};
use crate::simplexmetrics::{
    brute_feasible, co_measure, convex, dbar, dbar_bruteforce, FinMeasure,
};
use crate::systems::{dyck_periodic_admissible, dyck_reduce, Reduced, ShiftSystem, Substitution};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn render_combo(c: &Combo) -> String {
    c.iter()
        .map(|(w, p)| format!("{}*{}", rational::format_rational(w), render_sequence(p)))
        .collect::<Vec<_>>()
        .join("+")
}

pub fn combo_measure(c: &Combo) -> Result<FinMeasure> {
    let parts: Vec<(Rational, FinMeasure)> = c
        .iter()
        .filter(|(w, _)| !w.is_zero())
        .map(|(w, p)| Ok((w.clone(), co_measure(p)?)))
        .collect::<Result<_>>()?;
    convex(&parts)
}

#[derive(Clone, Debug)]
pub struct DensityConfig {
    pub system: ShiftSystem,
    pub trials: usize,
    pub epsilons: Vec<Rational>,
    pub seed: u64,
    /// At most this many parts per random combination.
    pub max_parts: usize,
    /// Longest root loop in the sampling pool.
    pub max_loop_len: usize,
}

impl DensityConfig {
    pub fn new(system: ShiftSystem, trials: usize, seed: u64) -> Self {
        DensityConfig {
            system,
            trials,
            epsilons: vec![
                rational::dyadic(3),
                rational::dyadic(4),
                rational::dyadic(5),
            ],
            seed,
            max_parts: 4,
            max_loop_len: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityRow {
    pub trial: usize,
    pub combo: String,
    pub epsilon: Rational,
    pub distance: Rational,
    pub period: usize,
    pub links: usize,
    /// Re-verified by subset enumeration.
    pub brute_checked: bool,
}

/// Periodic points presented by primitive root loops up to `max_len`.
pub fn root_loop_pool(system: &ShiftSystem, max_len: usize) -> Result<Vec<EventuallyPeriodic>> {
    if !system.is_root_coded() {
        return Err(Error::InvalidInput(format!(
            "{} has no root-loop presentation",
            system.kind().name()
        )));
    }
    let g = system.graph()?.expect("root-coded kinds carry a graph");
    let mut pool = BTreeSet::new();
    for w in loops_through(g.as_ref(), max_len)? {
        let (root, _) = primitive_root(&w);
        pool.insert(EventuallyPeriodic::periodic(root)?);
    }
    Ok(pool.into_iter().collect())
}

fn random_combo(pool: &[EventuallyPeriodic], max_parts: usize, r: &mut ChaCha8Rng) -> Combo {
    let k = r.gen_range(1..=max_parts.min(pool.len()).max(1));
    let picks: Vec<&EventuallyPeriodic> = pool.choose_multiple(r, k).collect();
    let weights: Vec<i64> = (0..k).map(|_| r.gen_range(1..=6)).collect();
    let total: i64 = weights.iter().sum();
    picks
        .into_iter()
        .zip(weights)
        .map(|(p, w)| (rational::ratio(w, total), p.clone()))
        .collect()
}

/// Random convex combinations of root-loop CO-measures, each approximated
/// at every tolerance. A row whose distance is not below its tolerance, or
/// whose brute-force recheck disagrees, aborts the run.
pub fn run_density(cfg: &DensityConfig) -> Result<Vec<DensityRow>> {
    let pool = root_loop_pool(&cfg.system, cfg.max_loop_len)?;
    if pool.is_empty() {
        return Err(Error::InvalidInput("no root loops in range".into()));
    }
    let mut r = rng(cfg.seed);
    let combos: Vec<Combo> = (0..cfg.trials)
        .map(|_| random_combo(&pool, cfg.max_parts, &mut r))
        .collect();
    let mut rows = Vec::new();
    for (trial, combo) in combos.iter().enumerate() {
        for eps in &cfg.epsilons {
            let res = approx_convex(&cfg.system, combo, eps)?;
            if res.distance >= *eps {
                return Err(Error::CertificateRejected(format!(
                    "trial {trial}: distance {} >= {eps}",
                    res.distance
                )));
            }
            let gamma = co_measure(&res.z)?;
            let target = combo_measure(combo)?;
            let brute_checked = brute_feasible(&gamma, &target);
            if brute_checked {
                let b = dbar_bruteforce(&gamma, &target)?;
                if b != dbar(&gamma, &target)?.value {
                    return Err(Error::CertificateRejected(format!(
                        "trial {trial}: flow and subset values differ"
                    )));
                }
            }
            rows.push(DensityRow {
                trial,
                combo: render_combo(combo),
                epsilon: eps.clone(),
                distance: res.distance,
                period: res.z.period_len(),
                links: res.trace.len(),
                brute_checked,
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub target: FinMeasure,
    pub max_period: usize,
    pub min_distance: Rational,
    pub argmin: EventuallyPeriodic,
    /// Running minimum over periods `≤ P`, for each `P` with candidates.
    pub by_bound: Vec<(usize, Rational)>,
    pub candidates: usize,
}

pub const MAX_PERIOD_XDOUBLEPRIME: usize = 16;
pub const MAX_PERIOD_DYCK: usize = 14;

struct MinTracker {
    best: Option<(Rational, EventuallyPeriodic)>,
    candidates: usize,
}

impl MinTracker {
    fn offer(&mut self, target: &FinMeasure, p: EventuallyPeriodic) -> Result<()> {
        self.candidates += 1;
        let d = dbar(&co_measure(&p)?, target)?.value;
        if self.best.as_ref().is_none_or(|(b, _)| d < *b) {
            self.best = Some((d, p));
        }
        Ok(())
    }

    fn bound(&self) -> Option<&Rational> {
        self.best.as_ref().map(|(b, _)| b)
    }
}

/// Least-rotation test for a primitive word.
fn is_lyndon(w: &[Symbol]) -> bool {
    let n = w.len();
    (1..n).all(|k| {
        for i in 0..n {
            let (a, b) = (w[(i + k) % n], w[i]);
            if a != b {
                return a > b;
            }
        }
        false
    })
}

/// Lower bound from single-symbol cylinders: for `t < 1/2` the
/// `t`-neighbourhood of `[s]` is `[s]` itself.
fn cylinder_bound(target_first: &[(Symbol, Rational)], counts: &[usize], n: usize) -> Rational {
    let half = rational::ratio(1, 2);
    let mut lb = Rational::zero();
    for (s, mass) in target_first {
        let f = Rational::new(counts[*s as usize].into(), n.into());
        let gap = mass - f;
        if gap > lb {
            lb = gap;
        }
    }
    lb.min(half)
}

fn first_symbol_masses(target: &FinMeasure) -> Vec<(Symbol, Rational)> {
    let mut out: Vec<(Symbol, Rational)> = Vec::new();
    for (p, m) in target.atoms() {
        let s = p.head(1)[0];
        match out.iter_mut().find(|(t, _)| *t == s) {
            Some((_, acc)) => *acc += m,
            None => out.push((s, m.clone())),
        }
    }
    out
}

struct DyckSearch<'a> {
    target: &'a FinMeasure,
    first: Vec<(Symbol, Rational)>,
    len: usize,
    word: Vec<Symbol>,
    counts: [usize; 4],
    tracker: MinTracker,
}

impl DyckSearch<'_> {
    fn dfs(&mut self) -> Result<()> {
        let depth = self.word.len();
        if let Some(b) = self.tracker.bound() {
            // Best case: every remaining symbol raises the deficient count.
            let rem = self.len - depth;
            let optimistic: Vec<usize> = self.counts.iter().map(|c| c + rem).collect();
            if cylinder_bound(&self.first, &optimistic, self.len) >= *b {
                return Ok(());
            }
        }
        if depth == self.len {
            if is_lyndon(&self.word) && dyck_periodic_admissible(&self.word) {
                let p = EventuallyPeriodic::periodic(self.word.clone())?;
                self.tracker.offer(self.target, p)?;
            }
            return Ok(());
        }
        for s in 0..4 {
            self.word.push(s);
            if !matches!(dyck_reduce(&self.word), Reduced::Zero) {
                self.counts[s as usize] += 1;
                self.dfs()?;
                self.counts[s as usize] -= 1;
            }
            self.word.pop();
        }
        Ok(())
    }
}

/// Minimum exact distance from `target` to the CO-measures of admissible
/// periodic points of period at most `max_period`.
///
/// `X''`: root loops plus the fixed points `0^∞`, `1^∞`. Dyck: every
/// admissible primitive word, pruned by a cylinder lower bound.
pub fn run_obstruction(
    system: &ShiftSystem,
    target: &FinMeasure,
    max_period: usize,
) -> Result<ObstructionReport> {
    let mut tracker = MinTracker {
        best: None,
        candidates: 0,
    };
    let mut by_bound = Vec::new();
    match system {
        ShiftSystem::XDoublePrime => {
            if max_period > MAX_PERIOD_XDOUBLEPRIME {
                return Err(Error::LimitExceeded(format!(
                    "period bound {max_period} above {MAX_PERIOD_XDOUBLEPRIME}"
                )));
            }
            let mut by_len: Vec<BTreeSet<EventuallyPeriodic>> =
                vec![BTreeSet::new(); max_period + 1];
            by_len[1].insert(EventuallyPeriodic::constant(0));
            by_len[1].insert(EventuallyPeriodic::constant(1));
            for w in loops_through(&GammaDoublePrime, max_period)? {
                let (root, _) = primitive_root(&w);
                by_len[root.len()].insert(EventuallyPeriodic::periodic(root)?);
            }
            for (len, set) in by_len.into_iter().enumerate().skip(1) {
                for p in set {
                    tracker.offer(target, p)?;
                }
                if let Some(b) = tracker.bound() {
                    by_bound.push((len, b.clone()));
                }
            }
        }
        ShiftSystem::Dyck => {
            if max_period > MAX_PERIOD_DYCK {
                return Err(Error::LimitExceeded(format!(
                    "period bound {max_period} above {MAX_PERIOD_DYCK}"
                )));
            }
            let first = first_symbol_masses(target);
            for len in 1..=max_period {
                let mut search = DyckSearch {
                    target,
                    first: first.clone(),
                    len,
                    word: Vec::with_capacity(len),
                    counts: [0; 4],
                    tracker,
                };
                search.dfs()?;
                tracker = search.tracker;
                if let Some(b) = tracker.bound() {
                    by_bound.push((len, b.clone()));
                }
            }
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "no obstruction search for {}",
                other.kind().name()
            )));
        }
    }
    let (min_distance, argmin) = tracker
        .best
        .ok_or_else(|| Error::InvalidInput("no admissible periodic points in range".into()))?;
    Ok(ObstructionReport {
        target: target.clone(),
        max_period,
        min_distance,
        argmin,
        by_bound,
        candidates: tracker.candidates,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyRow {
    pub n: usize,
    pub r: BigUint,
    pub l: BigUint,
    pub estimate: Option<f64>,
    /// `r_n = r_{n-1} + r_{n-2}`, checked for `n ≥ 4`.
    pub recurrence: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyTable {
    pub rows: Vec<EntropyRow>,
    pub spr_margin: Option<f64>,
    /// `|(1/N) ln r_N − ln φ|`.
    pub phi_gap: Option<f64>,
}

pub fn ln_golden() -> f64 {
    ((1.0 + 5f64.sqrt()) / 2.0).ln()
}

/// Return counts of the entropy-gap graph over the Fibonacci sequence.
pub fn run_entropy(n_max: usize) -> Result<EntropyTable> {
    let g = GammaEnt {
        omega: Substitution::fibonacci(),
    };
    entropy_table(&g, n_max)
}

pub fn entropy_table(g: &dyn LabelledGraph, n_max: usize) -> Result<EntropyTable> {
    let c = return_counts(g, n_max)?;
    let rows = (0..=n_max)
        .map(|n| EntropyRow {
            n,
            r: c.r[n].clone(),
            l: c.l[n].clone(),
            estimate: c.est_r[n],
            recurrence: (n >= 4).then(|| c.r[n] == &c.r[n - 1] + &c.r[n - 2]),
        })
        .collect();
    let phi_gap = c
        .est_r
        .last()
        .copied()
        .flatten()
        .map(|e| (e - ln_golden()).abs());
    Ok(EntropyTable {
        rows,
        spr_margin: c.spr_margin,
        phi_gap,
    })
}

#[derive(Clone, Debug)]
pub struct GenericConfig {
    pub system: ShiftSystem,
    pub targets: Vec<Combo>,
    pub horizon: usize,
    /// Cycle through the targets instead of converging along them.
    pub oscillate: bool,
    pub options: GenericOptions,
    pub seed: u64,
}

pub fn run_generic(cfg: &GenericConfig) -> Result<GenericReport> {
    if cfg.oscillate {
        oscillation_prefix(&cfg.system, &cfg.targets, cfg.horizon, &cfg.options)
    } else {
        generic_prefix(&cfg.system, &cfg.targets, cfg.horizon, &cfg.options)
    }
}

/// Random admissible word of length `len`, extended one symbol at a time.
pub fn sample_word(system: &ShiftSystem, len: usize, r: &mut ChaCha8Rng) -> Result<Vec<Symbol>> {
    let a = system.alphabet_size();
    let mut w = Vec::with_capacity(len);
    while w.len() < len {
        let mut symbols: Vec<Symbol> = (0..a).collect();
        symbols.shuffle(r);
        let mut grown = false;
        for s in symbols {
            w.push(s);
            if system.contains(&w)? {
                grown = true;
                break;
            }
            w.pop();
        }
        if !grown {
            return Err(Error::LimitExceeded(format!(
                "dead end after {} symbols",
                w.len()
            )));
        }
    }
    Ok(w)
}

/// Largest zero run tried between `u` and `s·v`.
pub const MAX_GLUING_GAP: usize = 1 << 16;

/// Runs up to this length are tried one by one.
const LINEAR_GLUING_SCAN: usize = 256;

/// Least `n ≤ MAX_GLUING_GAP` with `u 0^n s v` admissible.
///
/// Past the linear range the gap is found by doubling and then bisection,
/// which relies on admissibility being monotone in `n`: extra zeros only
/// thin out the windows that straddle the gap. The returned word is
/// checked directly.
pub fn find_gluing(
    system: &ShiftSystem,
    u: &[Symbol],
    s: Symbol,
    v: &[Symbol],
) -> Result<Option<usize>> {
    let glued = |n: usize| -> Result<bool> {
        let mut w = u.to_vec();
        w.extend(std::iter::repeat_n(0, n));
        w.push(s);
        w.extend_from_slice(v);
        system.contains(&w)
    };
    for n in 0..=LINEAR_GLUING_SCAN {
        if glued(n)? {
            return Ok(Some(n));
        }
    }
    let mut lo = LINEAR_GLUING_SCAN;
    let mut hi = loop {
        if lo >= MAX_GLUING_GAP {
            return Ok(None);
        }
        let next = (2 * lo).min(MAX_GLUING_GAP);
        if glued(next)? {
            break next;
        }
        lo = next;
    };
    // glued(lo) fails, glued(hi) holds.
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if glued(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}
