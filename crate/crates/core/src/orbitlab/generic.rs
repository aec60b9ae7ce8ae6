use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};

use super::approx::approx_convex;
use super::check::check_link;
use super::linking::LinkCertificate;
use super::{seam_margin, within_stretch};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::seqcore::{EventuallyPeriodic, Symbol};
use crate::simplexmetrics::{co_measure, convex, dbar, empirical_word, FinMeasure};
use crate::systems::ShiftSystem;

/// Weighted periodic points describing a CO-measure combination.
pub type Combo = Vec<(Rational, EventuallyPeriodic)>;

/// Longest stage loop built before giving up.
pub const MAX_BLOCK_LEN: usize = 1 << 26;

pub fn default_eps0() -> Rational {
    rational::ratio(1, 4)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericOptions {
    pub eps0: Rational,
    /// Block length of the checkpoint measurements.
    pub truncation: usize,
    pub max_stages: usize,
}

impl Default for GenericOptions {
    fn default() -> Self {
        GenericOptions {
            eps0: default_eps0(),
            truncation: 12,
            max_stages: 24,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: usize,
    /// Index into [`GenericReport::targets`].
    pub target: usize,
    pub eps_n: Rational,
    /// Tolerance of the stage link.
    pub eps_link: Rational,
    /// Repetitions of the previous loop and of the stage realization.
    pub k: usize,
    pub l: usize,
    pub p1: usize,
    pub q1: usize,
    pub p2: usize,
    pub q2: usize,
    /// Minimal period of the stage realization.
    pub m_n: usize,
    /// Exact distance from the realization to the stage measure.
    pub realization: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub n: usize,
    pub stage: usize,
    pub target: usize,
    pub lo: Rational,
    pub hi: Rational,
}

#[derive(Clone, Debug)]
pub struct GenericReport {
    pub prefix: Vec<Symbol>,
    pub stages: Vec<StageRecord>,
    pub checkpoints: Vec<Checkpoint>,
    pub targets: Vec<Combo>,
    /// Smallest upper bound over the checkpoints, per target.
    pub per_target_min: Vec<Option<Rational>>,
}

fn measure_of(combo: &Combo) -> Result<FinMeasure> {
    let parts: Vec<(Rational, FinMeasure)> = combo
        .iter()
        .filter(|(w, _)| !w.is_zero())
        .map(|(w, p)| Ok((w.clone(), co_measure(p)?)))
        .collect::<Result<_>>()?;
    convex(&parts)
}

/// `(1−t)·a + t·b`, merging repeated points.
fn mix(a: &Combo, b: &Combo, t: &Rational) -> Combo {
    let mut acc: BTreeMap<EventuallyPeriodic, Rational> = BTreeMap::new();
    let s = Rational::one() - t;
    for (w, p) in a {
        *acc.entry(p.clone()).or_insert_with(Rational::zero) += w * &s;
    }
    for (w, p) in b {
        *acc.entry(p.clone()).or_insert_with(Rational::zero) += w * t;
    }
    acc.into_iter()
        .filter(|(_, w)| !w.is_zero())
        .map(|(p, w)| (w, p))
        .collect()
}

fn largest_multiple(x: usize, d: usize) -> usize {
    x / d * d
}

fn ceil_usize(q: &Rational) -> usize {
    q.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
}

/// Length of the common prefix of two streams, capped.
fn lcp(f: impl Fn(usize) -> Symbol, g: impl Fn(usize) -> Symbol, cap: usize) -> usize {
    (0..cap).take_while(|&i| f(i) == g(i)).count()
}

/// How a stage picks its link tolerance and block-growth rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rule {
    /// `ε_n = 2^{-n}ε₀`, link at `2^{-(n+1)}ε_n`, growth
    /// `p1(1+2^{-n}ε_n) + 2^n M_n ≤ 2^{-n} p2`.
    Generic,
    /// Fixed `ε₀`, growth `16(p1(1+ε₀) + M_n) ≤ p2`.
    Oscillation,
}

struct StageLink {
    k: usize,
    b: usize,
    p1: usize,
    p2: usize,
}

/// Counts `(k, b)` for `z = u^k v^b`, using the actual agreement of `z`
/// with `u^∞` and `v^∞` across each seam.
fn stage_counts(
    u: &[Symbol],
    v: &[Symbol],
    m: usize,
    delta: &Rational,
    growth: impl Fn(usize) -> Rational,
) -> Option<StageLink> {
    let s = seam_margin(delta);
    let (nu, nv) = (u.len(), v.len());
    let k_max = ceil_usize(&(Rational::one() / delta)) + 2;
    for k in 1..=k_max {
        let q1 = k * nu;
        let p2_floor = ceil_usize(&growth(largest_multiple(q1, nu)));
        let b_start = p2_floor.div_ceil(nv).max(1);
        let b_span = ceil_usize(&(Rational::from_integer((s + m + nv).into()) / delta)) / nv + 4;
        for b in b_start..=b_start + b_span {
            let r = b * nv;
            let zlen = q1 + r;
            let z = |j: usize| {
                let j = j % zlen;
                if j < q1 {
                    u[j % nu]
                } else {
                    v[(j - q1) % nv]
                }
            };
            let cap = s.saturating_sub(1);
            let a1 = q1 + lcp(|i| z(q1 + i), |i| u[i % nu], cap);
            let a2 = r + lcp(|i| z(zlen + i), |i| v[i % nv], cap);
            if a1 + 1 < s || a2 + 1 < s {
                continue;
            }
            let p1 = largest_multiple(q1.min(a1 + 1 - s), nu);
            let p2 = largest_multiple(r.min(a2 + 1 - s), m);
            if p1 == 0 || p2 == 0 || !within_stretch(q1, p1, delta) || !within_stretch(r, p2, delta)
            {
                continue;
            }
            if growth(p1) <= Rational::from_integer(p2.into()) {
                return Some(StageLink { k, b, p1, p2 });
            }
        }
    }
    None
}

struct Realization {
    word: Vec<Symbol>,
    period: usize,
    distance: Rational,
}

/// Shortest realization found within `tol`: looser approximation
/// tolerances are tried first and kept when their exact distance already
/// meets `tol`. Short loops keep the partial-block error at checkpoints small.
fn realize(system: &ShiftSystem, combo: &Combo, tol: &Rational) -> Result<Realization> {
    let half = rational::ratio(1, 2);
    let mut best: Option<Realization> = None;
    for scale in [8, 4, 2, 1] {
        let t = (tol * rational::int(scale)).min(half.clone());
        let r = match approx_convex(system, combo, &t) {
            Ok(r) => r,
            Err(e) if scale == 1 => return Err(e),
            Err(_) => continue,
        };
        if r.distance < *tol && best.as_ref().is_none_or(|b| r.word.len() < b.word.len()) {
            best = Some(Realization {
                period: r.z.period_len(),
                word: r.word,
                distance: r.distance,
            });
        }
        if best.is_some() {
            break;
        }
    }
    best.ok_or_else(|| Error::LimitExceeded(format!("no realization within {tol}")))
}

fn checkpoint_lengths(horizon: usize, m: usize, extra: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = horizon.saturating_sub(m);
    while n >= 16 {
        out.push(n);
        n /= 2;
    }
    out.extend(
        extra
            .iter()
            .copied()
            .filter(|&e| e >= 1 && e + m <= horizon),
    );
    out.sort_unstable();
    out.dedup();
    out
}

fn stage_at(stage_ends: &[usize], n: usize) -> usize {
    stage_ends
        .iter()
        .position(|&e| n <= e)
        .unwrap_or(stage_ends.len().saturating_sub(1))
}

struct Plan<'a> {
    system: &'a ShiftSystem,
    horizon: usize,
    opts: &'a GenericOptions,
    rule: Rule,
}

impl Plan<'_> {
    fn eps_n(&self, n: usize) -> Rational {
        match self.rule {
            Rule::Generic => &self.opts.eps0 * rational::dyadic(n as u32),
            Rule::Oscillation => self.opts.eps0.clone(),
        }
    }

    fn eps_link(&self, n: usize) -> Rational {
        match self.rule {
            Rule::Generic => self.eps_n(n) * rational::dyadic(n as u32 + 1),
            Rule::Oscillation => self.opts.eps0.clone(),
        }
    }

    /// Least admissible `p2` for a given `p1` and realization period `m`.
    fn growth(&self, n: usize, p1: usize, m: usize) -> Rational {
        let p1 = Rational::from_integer(p1.into());
        let m = Rational::from_integer(m.into());
        match self.rule {
            Rule::Generic => {
                let two_n = Rational::from_integer(num_bigint::BigInt::one() << n);
                let inner = p1 * (Rational::one() + self.eps_n(n) * rational::dyadic(n as u32))
                    + &two_n * m;
                two_n * inner
            }
            Rule::Oscillation => rational::int(16) * (p1 * (Rational::one() + &self.opts.eps0) + m),
        }
    }

    /// Runs the stages; `pick(n, previous)` returns the stage combo and the
    /// index of the target it heads for.
    fn run(
        &self,
        targets: &[Combo],
        mut pick: impl FnMut(usize, &Combo, &Rational) -> Result<(Combo, usize)>,
    ) -> Result<(Vec<Symbol>, Vec<StageRecord>, Vec<usize>)> {
        let first = targets[0].clone();
        let tol0 = self.eps_n(0) / rational::int(2);
        let x0 = realize(self.system, &first, &tol0)?;
        let mut u = x0.word.repeat(2);
        let mut stages = vec![StageRecord {
            stage: 0,
            target: 0,
            eps_n: self.eps_n(0),
            eps_link: self.eps_link(0),
            k: 0,
            l: 2,
            p1: 0,
            q1: 0,
            p2: u.len(),
            q2: u.len(),
            m_n: x0.period,
            realization: x0.distance,
        }];
        let mut ends = vec![u.len()];
        let mut current = first;
        let mut n = 0;
        while n < 2 || u.len() < self.horizon {
            n += 1;
            if n > self.opts.max_stages {
                return Err(Error::LimitExceeded(format!(
                    "{} stages without reaching the horizon",
                    self.opts.max_stages
                )));
            }
            let eps_n = self.eps_n(n);
            let (combo, target) = pick(n, &current, &eps_n)?;
            let x = realize(self.system, &combo, &(&eps_n / rational::int(2)))?;
            let delta = self.eps_link(n);
            let link = stage_counts(&u, &x.word, x.period, &delta, |p1| {
                self.growth(n, p1, x.period)
            })
            .ok_or(Error::NoCountsInRange)?;
            let q1 = link.k * u.len();
            let q2 = q1 + link.b * x.word.len();
            if q2 > MAX_BLOCK_LEN {
                return Err(Error::LimitExceeded(format!("stage {n} block length {q2}")));
            }
            let mut word = u.repeat(link.k);
            word.extend(x.word.repeat(link.b));
            let cert = LinkCertificate {
                y1: EventuallyPeriodic::periodic(u.clone())?,
                y2: EventuallyPeriodic::periodic(x.word.clone())?,
                w1: u.clone(),
                w2: x.word.clone(),
                lambda: Rational::new(link.p1.into(), (link.p1 + link.p2).into()),
                epsilon: delta.clone(),
                divisors: (u.len(), x.period),
                a: link.k,
                b: link.b,
                p1: link.p1,
                p2: link.p2,
                q1,
                q2,
                z: EventuallyPeriodic::periodic(word.clone())?,
                degenerate: false,
            };
            check_link(self.system, &cert)?;
            stages.push(StageRecord {
                stage: n,
                target,
                eps_n,
                eps_link: delta,
                k: link.k,
                l: link.b,
                p1: link.p1,
                q1,
                p2: link.p2,
                q2,
                m_n: x.period,
                realization: x.distance,
            });
            u = word;
            ends.push(u.len());
            current = combo;
        }
        if ends[2] > self.horizon {
            return Err(Error::HorizonTooSmall {
                horizon: self.horizon,
                needed: ends[2],
            });
        }
        u.truncate(self.horizon);
        Ok((u, stages, ends))
    }

    fn measure(
        &self,
        prefix: &[Symbol],
        lengths: &[usize],
        ends: &[usize],
        stages: &[StageRecord],
        compare: impl Fn(usize) -> Vec<usize>,
        targets: &[FinMeasure],
    ) -> Result<Vec<Checkpoint>> {
        let m = self.opts.truncation;
        let mut out = Vec::new();
        for &n in lengths {
            let emp = empirical_word(prefix, n, m)?;
            let stage = stage_at(ends, n);
            for t in compare(stages[stage].target) {
                let r = dbar(&emp, &targets[t])?;
                out.push(Checkpoint {
                    n,
                    stage,
                    target: t,
                    lo: r.lo,
                    hi: r.hi,
                });
            }
        }
        Ok(out)
    }
}

fn validate(targets: &[Combo], horizon: usize, opts: &GenericOptions) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::InvalidInput("no targets".into()));
    }
    if opts.eps0 <= Rational::zero() || opts.eps0 > rational::ratio(1, 2) {
        return Err(Error::InvalidInput("eps0 outside (0, 1/2]".into()));
    }
    if opts.truncation == 0 || horizon <= opts.truncation {
        return Err(Error::InvalidInput(
            "horizon must exceed the truncation depth".into(),
        ));
    }
    Ok(())
}

fn per_target_min(checkpoints: &[Checkpoint], count: usize) -> Vec<Option<Rational>> {
    (0..count)
        .map(|t| {
            checkpoints
                .iter()
                .filter(|c| c.target == t)
                .map(|c| c.hi.clone())
                .min()
        })
        .collect()
}

/// Prefix of length `horizon` of a point generic along `targets`: stage
/// `n` heads for `targets[min(n, len-1)]`, inserting convex waypoints when
/// a jump exceeds `ε_n`.
pub fn generic_prefix(
    system: &ShiftSystem,
    targets: &[Combo],
    horizon: usize,
    opts: &GenericOptions,
) -> Result<GenericReport> {
    validate(targets, horizon, opts)?;
    let measures: Vec<FinMeasure> = targets.iter().map(measure_of).collect::<Result<_>>()?;
    let plan = Plan {
        system,
        horizon,
        opts,
        rule: Rule::Generic,
    };
    let mut reached = 0usize;
    let (prefix, stages, ends) = plan.run(targets, |_, current, eps_n| {
        let goal = (reached + 1).min(targets.len() - 1);
        let gap = dbar(&measure_of(current)?, &measures[goal])?.value;
        if gap <= *eps_n {
            reached = goal;
            Ok((targets[goal].clone(), goal))
        } else {
            // The waypoint at parameter ε_n lies within ε_n of the current measure.
            Ok((mix(current, &targets[goal], eps_n), goal))
        }
    })?;
    let truncated: Vec<FinMeasure> = measures
        .iter()
        .map(|m| m.truncate(opts.truncation))
        .collect::<Result<_>>()?;
    let lengths = checkpoint_lengths(horizon, opts.truncation, &[]);
    let checkpoints = plan.measure(&prefix, &lengths, &ends, &stages, |t| vec![t], &truncated)?;
    let per_target_min = per_target_min(&checkpoints, targets.len());
    Ok(GenericReport {
        prefix,
        stages,
        checkpoints,
        targets: targets.to_vec(),
        per_target_min,
    })
}

/// Prefix of a point whose empirical measures visit every member of `v` in
/// turn. Stage `n` heads for `v[n mod |v|]` directly; checkpoints include
/// the stage ends and compare against every member.
pub fn oscillation_prefix(
    system: &ShiftSystem,
    v: &[Combo],
    horizon: usize,
    opts: &GenericOptions,
) -> Result<GenericReport> {
    validate(v, horizon, opts)?;
    if v.len() == 1 {
        return generic_prefix(system, v, horizon, opts);
    }
    let plan = Plan {
        system,
        horizon,
        opts,
        rule: Rule::Oscillation,
    };
    let (prefix, stages, ends) =
        plan.run(v, |n, _, _| Ok((v[n % v.len()].clone(), n % v.len())))?;
    let truncated: Vec<FinMeasure> = v
        .iter()
        .map(|c| measure_of(c)?.truncate(opts.truncation))
        .collect::<Result<_>>()?;
    let lengths = checkpoint_lengths(horizon, opts.truncation, &ends);
    let all: Vec<usize> = (0..v.len()).collect();
    let checkpoints = plan.measure(
        &prefix,
        &lengths,
        &ends,
        &stages,
        |_| all.clone(),
        &truncated,
    )?;
    let per_target_min = per_target_min(&checkpoints, v.len());
    Ok(GenericReport {
        prefix,
        stages,
        checkpoints,
        targets: v.to_vec(),
        per_target_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::seqcore::parse_sequence;

    fn ep(s: &str) -> EventuallyPeriodic {
        parse_sequence(s).unwrap()
    }

    #[test]
    fn fixed_point_target() {
        let sys = ShiftSystem::golden_beta();
        let target = vec![(ratio(1, 1), ep("(0)^inf"))];
        let r = generic_prefix(&sys, &[target], 2000, &GenericOptions::default()).unwrap();
        assert!(r.prefix.iter().all(|&s| s == 0));
        assert!(r.checkpoints.iter().all(|c| c.lo.is_zero()));
    }

    #[test]
    fn stage_rule_holds() {
        let sys = ShiftSystem::sgap(&[1, 2]);
        let target = vec![
            (ratio(1, 3), ep("(01)^inf")),
            (ratio(2, 3), ep("(001)^inf")),
        ];
        let opts = GenericOptions::default();
        let r = generic_prefix(&sys, &[target], 100_000, &opts).unwrap();
        assert_eq!(r.prefix.len(), 100_000);
        let last = r.checkpoints.last().unwrap();
        assert!(last.hi <= ratio(1, 20), "final hi {}", last.hi);
        for st in r.stages.iter().skip(1) {
            let n = st.stage as u32;
            let lhs = Rational::from_integer(st.p1.into())
                * (Rational::one() + &st.eps_n * rational::dyadic(n))
                + Rational::from_integer(((1usize << n) * st.m_n).into());
            assert!(lhs <= Rational::from_integer(st.p2.into()) * rational::dyadic(n));
            assert_eq!(st.p1 % r.stages[st.stage - 1].q2, 0);
            assert_eq!(st.p2 % st.m_n, 0);
        }
    }

    #[test]
    fn tiny_horizon_rejected() {
        let sys = ShiftSystem::sgap(&[1, 2]);
        let target = vec![
            (ratio(1, 3), ep("(01)^inf")),
            (ratio(2, 3), ep("(001)^inf")),
        ];
        let r = generic_prefix(&sys, &[target], 100, &GenericOptions::default());
        assert!(matches!(r, Err(Error::HorizonTooSmall { .. })));
    }

    #[test]
    fn oscillation_visits_both() {
        let sys = ShiftSystem::sgap(&[1, 2]);
        let v = vec![
            vec![(ratio(1, 1), ep("(01)^inf"))],
            vec![(ratio(1, 1), ep("(001)^inf"))],
        ];
        let r = oscillation_prefix(&sys, &v, 100_000, &GenericOptions::default()).unwrap();
        for m in &r.per_target_min {
            assert!(m.clone().unwrap() <= ratio(1, 10));
        }
    }
}
