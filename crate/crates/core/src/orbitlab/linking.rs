use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::check::check_link;
use super::{check_eps, check_unit, seam_margin, within_stretch};
use crate::error::{Error, Result};
use crate::graphview::{word_walk, LabelledGraph};
use crate::rational::{self, format_rational, Rational};
use crate::seqcore::{render_sequence, render_symbols, EventuallyPeriodic, Symbol};
use crate::simplexmetrics::{co_measure, convex, dbar};
use crate::systems::ShiftSystem;

/// Weight, tolerance and the divisors required of `p1` and `p2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkRequest {
    pub lambda: Rational,
    pub epsilon: Rational,
    pub divisors: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkCertificate {
    pub y1: EventuallyPeriodic,
    pub y2: EventuallyPeriodic,
    pub w1: Vec<Symbol>,
    pub w2: Vec<Symbol>,
    pub lambda: Rational,
    pub epsilon: Rational,
    pub divisors: (usize, usize),
    /// Repetitions of `w1` and `w2` in the loop of `z`.
    pub a: usize,
    pub b: usize,
    pub p1: usize,
    pub p2: usize,
    pub q1: usize,
    pub q2: usize,
    pub z: EventuallyPeriodic,
    /// `λ ∈ {0, 1}`: `z` is one of the two loops.
    pub degenerate: bool,
}

impl LinkCertificate {
    /// `w1^a w2^b`.
    pub fn loop_word(&self) -> Vec<Symbol> {
        let mut w = self.w1.repeat(self.a);
        w.extend(self.w2.repeat(self.b));
        w
    }

    pub fn to_json(&self) -> Value {
        json!({
            "y1": render_sequence(&self.y1),
            "y2": render_sequence(&self.y2),
            "w1": render_symbols(&self.w1),
            "w2": render_symbols(&self.w2),
            "lambda": format_rational(&self.lambda),
            "epsilon": format_rational(&self.epsilon),
            "divisors": [self.divisors.0, self.divisors.1],
            "a": self.a,
            "b": self.b,
            "p1": self.p1,
            "p2": self.p2,
            "q1": self.q1,
            "q2": self.q2,
            "z": render_sequence(&self.z),
            "degenerate": self.degenerate,
        })
    }
}

/// Loop label at the root presenting the periodic point `y`: the shortest
/// power `w^k`, `k ≤ 4`, of its period word that returns to the root.
pub fn root_loop_word(g: &dyn LabelledGraph, y: &EventuallyPeriodic) -> Result<Vec<Symbol>> {
    if !y.is_periodic() {
        return Err(Error::NotRootLoop(format!(
            "{} is not purely periodic",
            render_sequence(y)
        )));
    }
    let w = y.period();
    for k in 1..=4 {
        let wk = w.repeat(k);
        if word_walk(g, g.root(), &wk).contains(&g.root()) {
            return Ok(wk);
        }
    }
    Err(Error::NotRootLoop(render_sequence(y)))
}

fn largest_multiple(x: usize, d: usize) -> usize {
    x / d * d
}

fn ceil_usize(q: &Rational) -> usize {
    q.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
}

fn root_graph(system: &ShiftSystem) -> Result<Box<dyn LabelledGraph>> {
    if !system.is_root_coded() {
        return Err(Error::InvalidInput(format!(
            "{} has no root-loop presentation",
            system.kind().name()
        )));
    }
    Ok(system.graph()?.expect("root-coded kinds carry a graph"))
}

/// Links `y1` and `y2` with weight `λ`; `divisor` applies to both `p1`
/// and `p2`.
pub fn link(
    system: &ShiftSystem,
    y1: &EventuallyPeriodic,
    y2: &EventuallyPeriodic,
    lambda: &Rational,
    eps: &Rational,
    divisor: Option<usize>,
) -> Result<LinkCertificate> {
    let g = root_graph(system)?;
    let w1 = root_loop_word(g.as_ref(), y1)?;
    let w2 = root_loop_word(g.as_ref(), y2)?;
    let d = divisor.unwrap_or(1);
    let req = LinkRequest {
        lambda: lambda.clone(),
        epsilon: eps.clone(),
        divisors: (d, d),
    };
    link_words(system, &w1, &w2, &req)
}

/// Link over explicit root loops. Scans `a` upward and for each `a` the
/// admissible range of `b`; the first feasible pair wins.
pub fn link_words(
    system: &ShiftSystem,
    w1: &[Symbol],
    w2: &[Symbol],
    req: &LinkRequest,
) -> Result<LinkCertificate> {
    let LinkRequest {
        lambda,
        epsilon: eps,
        divisors,
    } = req;
    check_eps(eps)?;
    check_unit(lambda, "lambda")?;
    let (d1, d2) = *divisors;
    if d1 == 0 || d2 == 0 {
        return Err(Error::InvalidInput("divisor must be positive".into()));
    }
    if w1.is_empty() || w2.is_empty() {
        return Err(Error::InvalidInput("empty loop word".into()));
    }
    let y1 = EventuallyPeriodic::periodic(w1.to_vec())?;
    let y2 = EventuallyPeriodic::periodic(w2.to_vec())?;
    let base =
        |a: usize, b: usize, p1: usize, p2: usize, degenerate: bool| -> Result<LinkCertificate> {
            let mut word = w1.repeat(a);
            word.extend(w2.repeat(b));
            Ok(LinkCertificate {
                y1: y1.clone(),
                y2: y2.clone(),
                w1: w1.to_vec(),
                w2: w2.to_vec(),
                lambda: lambda.clone(),
                epsilon: eps.clone(),
                divisors: *divisors,
                a,
                b,
                p1,
                p2,
                q1: a * w1.len(),
                q2: a * w1.len() + b * w2.len(),
                z: EventuallyPeriodic::periodic(word)?,
                degenerate,
            })
        };
    if lambda.is_one() || lambda.is_zero() {
        let cert = if lambda.is_one() {
            base(d1, 0, d1 * w1.len(), 0, true)?
        } else {
            base(0, d2, 0, d2 * w2.len(), true)?
        };
        check_link(system, &cert)?;
        return Ok(cert);
    }
    let s = seam_margin(eps);
    let one = Rational::one();
    let a_max = ceil_usize(
        &(Rational::from_integer((4 * (s + 1)).into())
            / (eps * eps * Rational::from_integer(w1.len().into()))),
    )
    .saturating_mul(d1)
    .max(1);
    let upper = lambda + eps;
    let lower = lambda - eps;
    for a in 1..=a_max {
        let l1 = a * w1.len();
        if l1 + 1 < s {
            continue;
        }
        let p1 = largest_multiple(l1 + 1 - s, d1);
        if p1 == 0 || !within_stretch(l1, p1, eps) {
            continue;
        }
        let p1r = Rational::from_integer(p1.into());
        // p1/(p1+p2) ≤ λ+ε gives the least p2.
        let p2_min = if upper >= one {
            1
        } else {
            ceil_usize(&(&p1r * (&one - &upper) / &upper)).max(1)
        };
        let b_start = (p2_min + s - 1).div_ceil(w2.len()).max(1);
        for b in b_start.. {
            let l2 = b * w2.len();
            let p2 = largest_multiple(l2 + 1 - s.min(l2 + 1), d2);
            if p2 == 0 {
                continue;
            }
            let ratio = Rational::new(p1.into(), (p1 + p2).into());
            if ratio < lower {
                break;
            }
            if ratio > upper || !within_stretch(l2, p2, eps) {
                continue;
            }
            let cert = base(a, b, p1, p2, false)?;
            check_link(system, &cert)?;
            return Ok(cert);
        }
    }
    Err(Error::NoCountsInRange)
}

/// `d(γ(z), λγ(y1) + (1−λ)γ(y2))`, exact.
pub fn link_distance(cert: &LinkCertificate) -> Result<Rational> {
    let target = convex(&[
        (cert.lambda.clone(), co_measure(&cert.y1)?),
        (Rational::one() - &cert.lambda, co_measure(&cert.y2)?),
    ])?;
    Ok(dbar(&co_measure(&cert.z)?, &target)?.value)
}

/// `3ε`, the guaranteed bound on [`link_distance`].
pub fn link_bound(cert: &LinkCertificate) -> Rational {
    rational::int(3) * &cert.epsilon
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
    fn sgap_half_link() {
        let sys = ShiftSystem::sgap(&[1, 2]);
        let c = link(
            &sys,
            &ep("(01)^inf"),
            &ep("(001)^inf"),
            &ratio(1, 2),
            &ratio(1, 10),
            None,
        )
        .unwrap();
        assert_eq!((c.a, c.b), (11, 8));
        assert!(link_distance(&c).unwrap() <= link_bound(&c));
    }

    #[test]
    fn manual_certificate_passes() {
        let sys = ShiftSystem::sgap(&[1, 2]);
        let w1 = vec![0, 1];
        let w2 = vec![0, 0, 1];
        let mut word = w1.repeat(30);
        word.extend(w2.repeat(20));
        let cert = LinkCertificate {
            y1: ep("(01)^inf"),
            y2: ep("(001)^inf"),
            w1,
            w2,
            lambda: ratio(1, 2),
            epsilon: ratio(1, 10),
            divisors: (1, 1),
            a: 30,
            b: 20,
            p1: 58,
            p2: 58,
            q1: 60,
            q2: 120,
            z: EventuallyPeriodic::periodic(word).unwrap(),
            degenerate: false,
        };
        check_link(&sys, &cert).unwrap();
    }

    #[test]
    fn degenerate_weights() {
        let sys = ShiftSystem::sgap(&[1, 2]);
        let c = link(
            &sys,
            &ep("(01)^inf"),
            &ep("(001)^inf"),
            &ratio(1, 1),
            &ratio(1, 10),
            None,
        )
        .unwrap();
        assert!(c.degenerate);
        assert_eq!(c.z, ep("(01)^inf"));
        let c = link(
            &sys,
            &ep("(01)^inf"),
            &ep("(001)^inf"),
            &ratio(0, 1),
            &ratio(1, 10),
            None,
        )
        .unwrap();
        assert_eq!(c.z, ep("(001)^inf"));
    }

    #[test]
    fn divisors_respected() {
        let sys = ShiftSystem::golden_beta();
        let c = link(
            &sys,
            &ep("(0)^inf"),
            &ep("(100)^inf"),
            &ratio(1, 3),
            &ratio(1, 8),
            Some(4),
        )
        .unwrap();
        assert_eq!(c.p1 % 4, 0);
        assert_eq!(c.p2 % 4, 0);
    }

    #[test]
    fn not_a_root_loop() {
        let sys = ShiftSystem::sgap(&[1, 2]);
        let r = link(
            &sys,
            &ep("1(01)^inf"),
            &ep("(001)^inf"),
            &ratio(1, 2),
            &ratio(1, 10),
            None,
        );
        assert!(matches!(r, Err(Error::NotRootLoop(_))));
    }
}
