//! Certificate checkers. They re-derive every inequality of the closing and
//! linking definitions symbol by symbol and share no search code with the
//! constructors.

use std::cmp::Ordering;

use num_traits::Zero;

use super::closing::{ClosingCertificate, Source};
use super::linking::LinkCertificate;
use super::within_stretch;
use crate::error::{Error, Result};
use crate::graphview::word_walk;
use crate::rational::Rational;
use crate::seqcore::{EventuallyPeriodic, Symbol};
use crate::systems::{dyck_periodic_admissible, BetaHat, ShiftSystem};

fn reject(msg: impl Into<String>) -> Error {
    Error::CertificateRejected(msg.into())
}

/// `y ∈ B(x, p, ε)` with `a = a(ε)`: for `j < p` the shifts `σ^j y` and
/// `σ^j x` agree on their first `a` symbols.
pub fn in_bowen_ball(
    y: &EventuallyPeriodic,
    x: impl Fn(usize) -> Option<Symbol>,
    p: usize,
    a: usize,
) -> bool {
    (0..p).all(|j| (0..a).all(|i| x(j + i) == Some(y.get(j + i))))
}

fn beta_periodic_admissible(hat: &BetaHat, y: &EventuallyPeriodic) -> Result<bool> {
    let n = y.period_len();
    for k in 0..n {
        let s = y.shift(k);
        let verdict = match hat {
            BetaHat::Periodic(h) => s.cmp(h),
            BetaHat::Truncated(d) => {
                let mut v = None;
                for (i, &di) in d.iter().enumerate() {
                    match s.get(i).cmp(&di) {
                        Ordering::Equal => {}
                        o => {
                            v = Some(o);
                            break;
                        }
                    }
                }
                v.ok_or(Error::Undecided)?
            }
        };
        if verdict == Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the purely periodic point `y` lies in the system.
///
/// Exact for full shifts, SFTs, S-gap, beta and Dyck shifts; for
/// graph-presented kinds a loop at the root is accepted, otherwise three
/// periods are checked against the language.
pub fn periodic_admissible(system: &ShiftSystem, y: &EventuallyPeriodic) -> Result<bool> {
    if !y.is_periodic() {
        return Err(Error::InvalidInput(
            "admissibility check needs a purely periodic point".into(),
        ));
    }
    let w = y.period();
    if w.iter().any(|&s| s >= system.alphabet_size()) {
        return Ok(false);
    }
    match system {
        ShiftSystem::SGap(gaps) => {
            let ones: Vec<usize> = (0..w.len()).filter(|&i| w[i] == 1).collect();
            if ones.is_empty() {
                return Ok(gaps.is_infinite());
            }
            let n = w.len();
            Ok((0..ones.len()).all(|t| {
                let here = ones[t];
                let next = if t + 1 < ones.len() {
                    ones[t + 1]
                } else {
                    ones[0] + n
                };
                gaps.contains((next - here - 1) as u64)
            }))
        }
        ShiftSystem::Beta(b) => beta_periodic_admissible(&b.hat, y),
        ShiftSystem::Dyck => Ok(dyck_periodic_admissible(&w)),
        ShiftSystem::Full { .. } => Ok(true),
        ShiftSystem::Sft { forbidden, .. } => {
            let longest = forbidden.iter().map(Vec::len).max().unwrap_or(0);
            let reps = longest / w.len() + 2;
            system.contains(&w.repeat(reps))
        }
        _ => {
            if let Some(g) = system.graph()? {
                if word_walk(g.as_ref(), g.root(), &w).contains(&g.root()) {
                    return Ok(true);
                }
            }
            system.contains(&w.repeat(3))
        }
    }
}

pub fn check_closing(system: &ShiftSystem, cert: &ClosingCertificate) -> Result<()> {
    let (p, q) = (cert.p, cert.q);
    if !(cert.n <= p && p <= q) {
        return Err(reject(format!(
            "need N <= p <= q, got N={} p={p} q={q}",
            cert.n
        )));
    }
    if !within_stretch(q, p, &cert.epsilon) {
        return Err(reject(format!("q={q} exceeds (1+eps)p")));
    }
    if !cert.y.is_periodic() || cert.y.shift(q) != cert.y {
        return Err(reject("y is not fixed by the q-th shift"));
    }
    let a = cert.margin;
    if super::seam_margin(&cert.epsilon) != a {
        return Err(reject("recorded seam margin does not match epsilon"));
    }
    let x = |i: usize| match &cert.x {
        Source::Seq(s) => Some(s.get(i)),
        Source::Prefix(w) => w.get(i).copied(),
    };
    if !in_bowen_ball(&cert.y, x, p, a) {
        return Err(reject("y leaves the Bowen ball B(x, p, eps)"));
    }
    if !periodic_admissible(system, &cert.y)? {
        return Err(reject("y is not a point of the system"));
    }
    Ok(())
}

pub fn check_link(system: &ShiftSystem, cert: &LinkCertificate) -> Result<()> {
    let (p1, p2, q1, q2) = (cert.p1, cert.p2, cert.q1, cert.q2);
    let eps = &cert.epsilon;
    if !cert.z.is_periodic() || cert.z.shift(q2) != cert.z {
        return Err(reject("z is not fixed by the q2-th shift"));
    }
    if q1 > q2 || p1 + p2 == 0 {
        return Err(reject("need q1 <= q2 and p1 + p2 > 0"));
    }
    let ratio = Rational::new(p1.into(), (p1 + p2).into());
    if ratio < &cert.lambda - eps || ratio > &cert.lambda + eps {
        return Err(reject(format!("p1/(p1+p2) = {ratio} outside lambda ± eps")));
    }
    if !(p1 <= q1 && within_stretch(q1, p1, eps)) {
        return Err(reject("need p1 <= q1 <= (1+eps)p1"));
    }
    if !(p2 <= q2 - q1 && within_stretch(q2 - q1, p2, eps)) {
        return Err(reject("need p2 <= q2-q1 <= (1+eps)p2"));
    }
    let (d1, d2) = cert.divisors;
    if d1 == 0 || d2 == 0 || p1 % d1 != 0 || p2 % d2 != 0 {
        return Err(reject("divisibility of p1, p2 fails"));
    }
    let a = super::seam_margin(eps);
    if !in_bowen_ball(&cert.z, |i| Some(cert.y1.get(i)), p1, a) {
        return Err(reject("z leaves B(y1, p1, eps)"));
    }
    let tail = cert.z.shift(q1);
    if !in_bowen_ball(&tail, |i| Some(cert.y2.get(i)), p2, a) {
        return Err(reject("shifted z leaves B(y2, p2, eps)"));
    }
    if !periodic_admissible(system, &cert.z)? {
        return Err(reject("z is not a point of the system"));
    }
    if cert.lambda < Rational::zero() {
        return Err(reject("negative lambda"));
    }
    Ok(())
}
