use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use serde_json::{json, Value};

use super::check::{check_closing, periodic_admissible};
use super::{check_eps, seam_margin, within_stretch};
use crate::error::{Error, Result};
use crate::graphview::{word_walk, FiniteGraph, LabelledGraph, Vertex};
use crate::rational::{self, format_rational, Rational};
use crate::seqcore::{render_sequence, render_symbols, EventuallyPeriodic, Symbol};
use crate::simplexmetrics::{co_measure, dbar, empirical, Mode};
use crate::systems::{BetaHat, ShiftSystem};

/// Largest cut length tried for an infinite source.
pub const MAX_CLOSE_LEN: usize = 1 << 14;

/// Point to be closed: a full eventually periodic sequence or a finite prefix
/// of an arbitrary one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Seq(EventuallyPeriodic),
    Prefix(Vec<Symbol>),
}

impl Source {
    pub fn get(&self, i: usize) -> Option<Symbol> {
        match self {
            Source::Seq(x) => Some(x.get(i)),
            Source::Prefix(w) => w.get(i).copied(),
        }
    }

    /// Number of known symbols, `None` when unbounded.
    pub fn available(&self) -> Option<usize> {
        match self {
            Source::Seq(_) => None,
            Source::Prefix(w) => Some(w.len()),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Source::Seq(x) => render_sequence(x),
            Source::Prefix(w) => render_symbols(w),
        }
    }

    fn head(&self, n: usize) -> Vec<Symbol> {
        (0..n).map_while(|i| self.get(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosingCertificate {
    pub x: Source,
    pub epsilon: Rational,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub y: EventuallyPeriodic,
    /// `a(ε)`.
    pub margin: usize,
    pub strategy: &'static str,
}

impl ClosingCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "x": self.x.render(),
            "epsilon": format_rational(&self.epsilon),
            "N": self.n,
            "p": self.p,
            "q": self.q,
            "y": render_sequence(&self.y),
            "per_y": self.y.period_len(),
            "margin": self.margin,
            "strategy": self.strategy,
        })
    }
}

enum Strategy {
    SGap,
    Beta(BetaHat),
    RootReturn(Box<dyn LabelledGraph>),
}

fn strategy_for(system: &ShiftSystem) -> Result<Strategy> {
    Ok(match system {
        ShiftSystem::SGap(_) => Strategy::SGap,
        ShiftSystem::Beta(b) => Strategy::Beta(b.hat.clone()),
        ShiftSystem::Coded(_) | ShiftSystem::XPrime(_) | ShiftSystem::XDoublePrime => {
            Strategy::RootReturn(system.graph()?.expect("graph-presented kind"))
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "no closing strategy for {}; use sft_close for finite graphs",
                other.kind().name()
            )))
        }
    })
}

/// Shortest label of a path from any of `from` back to the root, of length
/// at most `max_len`; ties go to the smaller label.
fn shortest_return(
    g: &dyn LabelledGraph,
    from: &BTreeSet<Vertex>,
    max_len: usize,
) -> Option<Vec<Symbol>> {
    let root = g.root();
    if from.contains(&root) {
        return Some(Vec::new());
    }
    let mut parent: HashMap<Vertex, Option<(Vertex, Symbol)>> = HashMap::new();
    let mut queue = VecDeque::new();
    for &v in from {
        parent.insert(v, None);
        queue.push_back((v, 0usize));
    }
    while let Some((v, d)) = queue.pop_front() {
        if d >= max_len {
            continue;
        }
        let mut edges = g.out_edges(v);
        edges.sort_by_key(|e| e.label);
        for e in edges {
            if parent.contains_key(&e.target) {
                continue;
            }
            match g.min_return_len(e.target) {
                Some(r) if d + 1 + r <= max_len => {}
                _ => continue,
            }
            parent.insert(e.target, Some((v, e.label)));
            if e.target == root {
                let mut label = Vec::new();
                let mut cur = root;
                while let Some(Some((p, s))) = parent.get(&cur) {
                    label.push(*s);
                    cur = *p;
                }
                label.reverse();
                return Some(label);
            }
            queue.push_back((e.target, d + 1));
        }
    }
    None
}

fn agreement_with(y: &EventuallyPeriodic, x: &Source, cap: usize) -> usize {
    match x {
        Source::Seq(s) => y.agreement_capped(s, cap),
        Source::Prefix(w) => (0..w.len().min(cap))
            .take_while(|&i| y.get(i) == w[i])
            .count(),
    }
}

fn source_admissible(system: &ShiftSystem, x: &Source) -> Result<bool> {
    match x {
        Source::Seq(s) => system.contains(&s.prefix(s.preperiod().len() + 2 * s.period_len() + 1)),
        Source::Prefix(w) => system.contains(w),
    }
}

/// Closes an orbit segment of `x` into a periodic point `y` with
/// `N ≤ p ≤ q ≤ (1+ε)p` and `y ∈ B(x, p, ε)`.
///
/// Cut lengths are scanned upward; the first candidate meeting every bound
/// is returned after the independent checker accepts it.
pub fn close_orbit(
    system: &ShiftSystem,
    x: &Source,
    eps: &Rational,
    n: usize,
) -> Result<ClosingCertificate> {
    check_eps(eps)?;
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    if !source_admissible(system, x)? {
        return Err(Error::NotInSystem(x.render()));
    }
    let strategy = strategy_for(system)?;
    let a = seam_margin(eps);
    let limit = x.available().unwrap_or(MAX_CLOSE_LEN);
    // S-gap cuts go before a 1 first; when no such cut closes (the wrapped
    // gap misses S), a second pass cuts right after a 1.
    let passes = if matches!(strategy, Strategy::SGap) {
        2
    } else {
        1
    };
    for pass in 0..passes {
        let mut cur: BTreeSet<Vertex> = match &strategy {
            Strategy::RootReturn(g) => BTreeSet::from([g.root()]),
            _ => BTreeSet::new(),
        };
        let mut beta_vertex: usize = 0;
        for l in 1..=limit {
            let s = x.get(l - 1).expect("within limit");
            let w: Vec<Symbol> = match &strategy {
                Strategy::SGap => {
                    let cut = if pass == 0 {
                        x.get(l) == Some(1)
                    } else {
                        s == 1
                    };
                    if !cut {
                        continue;
                    }
                    x.head(l)
                }
                Strategy::Beta(hat) => {
                    let d = hat.digit(beta_vertex).ok_or(Error::Undecided)?;
                    beta_vertex = match s.cmp(&d) {
                        Ordering::Equal => beta_vertex + 1,
                        Ordering::Less => 0,
                        Ordering::Greater => return Err(Error::NotInSystem(x.render())),
                    };
                    let j = beta_vertex;
                    if j == 0 {
                        x.head(l)
                    } else {
                        // The walk sits at v_j after reading d̂_1..d̂_j; reroute
                        // the last positive edge d̂_i back to the root.
                        let Some(i) = (1..=j).rev().find(|&i| hat.digit(i - 1).unwrap_or(0) > 0)
                        else {
                            continue;
                        };
                        let mut w = x.head(l - j + i - 1);
                        w.push(hat.digit(i - 1).unwrap_or(0) - 1);
                        w
                    }
                }
                Strategy::RootReturn(g) => {
                    let mut next = BTreeSet::new();
                    for &v in &cur {
                        next.extend(word_walk(g.as_ref(), v, &[s]));
                    }
                    cur = next;
                    if cur.is_empty() {
                        return Err(Error::NotInSystem(x.render()));
                    }
                    let budget = rational::floor(&(eps * Rational::from_integer(l.into())));
                    let budget = budget.try_into().unwrap_or(usize::MAX);
                    let Some(ret) = shortest_return(g.as_ref(), &cur, budget) else {
                        continue;
                    };
                    let mut w = x.head(l);
                    w.extend(ret);
                    w
                }
            };
            if w.is_empty() {
                continue;
            }
            let y = EventuallyPeriodic::periodic(w.clone())?;
            if !periodic_admissible(system, &y)? {
                continue;
            }
            if let Some(cert) = candidate(x, eps, n, a, y, w.len(), strategy_name(&strategy)) {
                check_closing(system, &cert)?;
                return Ok(cert);
            }
        }
    }
    Err(Error::NoClosureInRange)
}

fn strategy_name(s: &Strategy) -> &'static str {
    match s {
        Strategy::SGap => "sgap",
        Strategy::Beta(_) => "beta",
        Strategy::RootReturn(_) => "root-return",
    }
}

fn candidate(
    x: &Source,
    eps: &Rational,
    n: usize,
    a: usize,
    y: EventuallyPeriodic,
    q: usize,
    strategy: &'static str,
) -> Option<ClosingCertificate> {
    let agree = agreement_with(&y, x, q + a);
    if agree + 1 < a {
        return None;
    }
    let p = q.min(agree + 1 - a);
    if p < n || !within_stretch(q, p, eps) {
        return None;
    }
    Some(ClosingCertificate {
        x: x.clone(),
        epsilon: eps.clone(),
        n,
        p,
        q,
        y,
        margin: a,
        strategy,
    })
}

/// `(d(γ(y), Emp(x, p)), d(Emp(y, q), Emp(x, p)))` for a sequence source,
/// both exact.
pub fn closing_distances(cert: &ClosingCertificate) -> Result<(Rational, Rational)> {
    let Source::Seq(x) = &cert.x else {
        return Err(Error::InvalidInput(
            "closing distances need a sequence source".into(),
        ));
    };
    let emp_x = empirical(x, cert.p, Mode::Exact)?;
    let gamma = co_measure(&cert.y)?;
    let emp_y = empirical(&cert.y, cert.q, Mode::Exact)?;
    Ok((dbar(&gamma, &emp_x)?.value, dbar(&emp_y, &emp_x)?.value))
}

/// Closes a word readable on a finite graph by the shortest path back to its
/// start vertex, over all start vertices.
pub fn sft_close(g: &FiniteGraph, w: &[Symbol]) -> Result<EventuallyPeriodic> {
    if w.is_empty() {
        return Err(Error::InvalidInput("cannot close the empty word".into()));
    }
    let mut best: Option<(usize, Vertex, Vec<Symbol>)> = None;
    for v in 0..g.vertex_count() as Vertex {
        for t in word_walk(g, v, w) {
            if let Some(conn) = g.shortest_path_label(t, v) {
                let key = (conn.len(), v);
                if best.as_ref().is_none_or(|(l, bv, _)| key < (*l, *bv)) {
                    best = Some((conn.len(), v, conn));
                }
            }
        }
    }
    let (_, v, conn) = best.ok_or(Error::NotReadable)?;
    let mut word = w.to_vec();
    word.extend(conn);
    if !word_walk(g, v, &word).contains(&v) {
        return Err(Error::NotReadable);
    }
    EventuallyPeriodic::periodic(word)
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
    fn sgap_alternating() {
        let sys = ShiftSystem::sgap(&[1, 2]);
        let x = Source::Seq(ep("(01)^inf"));
        let c = close_orbit(&sys, &x, &ratio(1, 8), 5).unwrap();
        assert_eq!((c.p, c.q), (17, 19));
        let (d1, d2) = closing_distances(&c).unwrap();
        assert!(d1 < ratio(1, 8) && d2 <= ratio(1, 8));
    }

    #[test]
    fn sgap_cut_after_one() {
        // Cutting (001)^inf before a 1 wraps to a gap of 4.
        let sys = ShiftSystem::sgap(&[1, 2]);
        let x = Source::Seq(ep("(001)^inf"));
        let c = close_orbit(&sys, &x, &ratio(1, 2), 1).unwrap();
        assert_eq!(c.y, ep("(001)^inf"));
        assert_eq!((c.p, c.q), (3, 3));
    }

    #[test]
    fn longer_sgap_certificate_passes() {
        let sys = ShiftSystem::sgap(&[1, 2]);
        let mut w = [0, 1].repeat(49);
        w.push(0);
        let cert = ClosingCertificate {
            x: Source::Seq(ep("(01)^inf")),
            epsilon: ratio(1, 8),
            n: 5,
            p: 97,
            q: 99,
            y: EventuallyPeriodic::periodic(w).unwrap(),
            margin: 3,
            strategy: "sgap",
        };
        check_closing(&sys, &cert).unwrap();
    }

    #[test]
    fn beta_fixed_point() {
        let sys = ShiftSystem::golden_beta();
        let c = close_orbit(&sys, &Source::Seq(ep("(0)^inf")), &ratio(1, 4), 7).unwrap();
        assert_eq!(c.y, ep("(0)^inf"));
        assert_eq!((c.p, c.q), (7, 7));
    }

    #[test]
    fn beta_reroutes_last_edge() {
        let sys = ShiftSystem::golden_beta();
        let x = Source::Seq(ep("(10)^inf"));
        let c = close_orbit(&sys, &x, &ratio(1, 8), 6).unwrap();
        check_closing(&sys, &c).unwrap();
        let (d1, _) = closing_distances(&c).unwrap();
        assert!(d1 < ratio(1, 8));
    }

    #[test]
    fn short_prefix_runs_out() {
        let sys = ShiftSystem::sgap(&[1, 2]);
        let x = Source::Prefix(vec![0, 1, 0, 1, 0, 1]);
        assert_eq!(
            close_orbit(&sys, &x, &ratio(1, 8), 5),
            Err(Error::NoClosureInRange)
        );
    }

    #[test]
    fn sft_closing() {
        let full = FiniteGraph::from_sft(2, &[]).unwrap();
        assert_eq!(sft_close(&full, &[0, 1, 1, 0]).unwrap(), ep("(0110)^inf"));
        let golden = FiniteGraph::from_sft(2, &[vec![1, 1]]).unwrap();
        assert_eq!(sft_close(&golden, &[0, 1, 0]).unwrap(), ep("(010)^inf"));
        assert_eq!(sft_close(&golden, &[0, 1, 1, 0]), Err(Error::NotReadable));
    }
}
