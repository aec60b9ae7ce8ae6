use num_traits::{One, Zero};

use super::linking::{link_words, root_loop_word, LinkCertificate, LinkRequest};
use super::{check_eps, check_unit};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::seqcore::{EventuallyPeriodic, Symbol};
use crate::simplexmetrics::{co_measure, convex, dbar, FinMeasure};
use crate::systems::ShiftSystem;

/// Tolerance of the `j`-th link (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// `ε / 2^{j+1}`.
    Halving,
    /// `ε / (3·2^{j+1})`, used when the halving run misses `ε`.
    Thirds,
}

impl Schedule {
    pub fn tolerance(self, eps: &Rational, j: usize) -> Rational {
        let t = eps * rational::dyadic(j as u32 + 1);
        match self {
            Schedule::Halving => t,
            Schedule::Thirds => t / rational::int(3),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ApproxStage {
    pub stage: usize,
    pub epsilon: Rational,
    pub cert: LinkCertificate,
    /// Exact distance from the stage loop to the normalized partial target.
    pub distance: Rational,
    /// `3·Σ ε_i` over the stages so far.
    pub budget: Rational,
}

#[derive(Clone, Debug)]
pub struct ApproxResult {
    pub z: EventuallyPeriodic,
    /// Root loop presenting `z`.
    pub word: Vec<Symbol>,
    pub distance: Rational,
    pub schedule: Schedule,
    pub trace: Vec<ApproxStage>,
}

fn partial_target(parts: &[(Rational, FinMeasure)]) -> Result<FinMeasure> {
    let total: Rational = parts.iter().map(|(w, _)| w.clone()).sum();
    let normalized: Vec<(Rational, FinMeasure)> =
        parts.iter().map(|(w, m)| (w / &total, m.clone())).collect();
    convex(&normalized)
}

/// A single periodic point within `ε` of `Σ λ_i γ(p_i)`, built by chaining
/// pairwise links with `Λ_j / Λ_{j+1}` weights.
pub fn approx_convex(
    system: &ShiftSystem,
    parts: &[(Rational, EventuallyPeriodic)],
    eps: &Rational,
) -> Result<ApproxResult> {
    check_eps(eps)?;
    for (w, _) in parts {
        check_unit(w, "weight")?;
    }
    let sum: Rational = parts.iter().map(|(w, _)| w.clone()).sum();
    if !sum.is_one() {
        return Err(Error::WeightsNotNormalized);
    }
    if !system.is_root_coded() {
        return Err(Error::InvalidInput(format!(
            "{} has no root-loop presentation",
            system.kind().name()
        )));
    }
    let g = system.graph()?.expect("root-coded kinds carry a graph");
    let live: Vec<(Rational, EventuallyPeriodic, Vec<Symbol>)> = parts
        .iter()
        .filter(|(w, _)| !w.is_zero())
        .map(|(w, p)| Ok((w.clone(), p.clone(), root_loop_word(g.as_ref(), p)?)))
        .collect::<Result<_>>()?;
    let measures: Vec<(Rational, FinMeasure)> = live
        .iter()
        .map(|(w, p, _)| Ok((w.clone(), co_measure(p)?)))
        .collect::<Result<_>>()?;
    let target = convex(&measures)?;
    let mut last = None;
    for schedule in [Schedule::Halving, Schedule::Thirds] {
        let mut word = live[0].2.clone();
        let mut mass = live[0].0.clone();
        let mut trace = Vec::new();
        let mut budget = Rational::zero();
        for (j, (w, _, loop_word)) in live.iter().enumerate().skip(1) {
            let next_mass = &mass + w;
            let lambda = &mass / &next_mass;
            let tol = schedule.tolerance(eps, j);
            let req = LinkRequest {
                lambda,
                epsilon: tol.clone(),
                divisors: (1, 1),
            };
            let cert = link_words(system, &word, loop_word, &req)?;
            word = cert.loop_word();
            budget += rational::int(3) * &tol;
            let distance = dbar(&co_measure(&cert.z)?, &partial_target(&measures[..=j])?)?.value;
            trace.push(ApproxStage {
                stage: j,
                epsilon: tol,
                cert,
                distance,
                budget: budget.clone(),
            });
            mass = next_mass;
        }
        let z = EventuallyPeriodic::periodic(word.clone())?;
        // The last stage already measured against the full target.
        let distance = match trace.last() {
            Some(st) => st.distance.clone(),
            None => dbar(&co_measure(&z)?, &target)?.value,
        };
        if distance < *eps {
            return Ok(ApproxResult {
                z,
                word,
                distance,
                schedule,
                trace,
            });
        }
        last = Some(distance);
    }
    Err(Error::LimitExceeded(format!(
        "approximation stays at distance {} >= {eps}",
        last.map_or_else(String::new, |d| rational::format_rational(&d))
    )))
}
