//! Exact evaluation of the four standing inequalities for `d` between
//! empirical measures and convex combinations.

use num_traits::{One, Zero};

use super::dbar::dbar;
use super::measure::{convex, empirical, FinMeasure, Mode};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::seqcore::EventuallyPeriodic;

#[derive(Clone, Debug)]
pub struct AuxInput {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub x: EventuallyPeriodic,
    pub mu1: FinMeasure,
    pub mu2: FinMeasure,
    pub nu1: FinMeasure,
    pub nu2: FinMeasure,
    pub alpha: Rational,
    pub beta: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxItem {
    pub item: u8,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl AuxItem {
    pub fn margin(&self) -> Rational {
        &self.rhs - &self.lhs
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

fn d(a: &FinMeasure, b: &FinMeasure) -> Result<Rational> {
    Ok(dbar(a, b)?.value)
}

fn mix(alpha: &Rational, a: &FinMeasure, b: &FinMeasure) -> Result<FinMeasure> {
    convex(&[
        (alpha.clone(), a.clone()),
        (Rational::one() - alpha, b.clone()),
    ])
}

/// Item 1: `d(Emp(x,m), Emp(σ^k x, n-k)) ≤ (m-n+k)/n` for `0 ≤ k < n ≤ m`.
pub fn aux_initial(x: &EventuallyPeriodic, k: usize, m: usize, n: usize) -> Result<AuxItem> {
    if !(k < n && n <= m) {
        return Err(Error::InvalidInput(format!(
            "need 0 <= k < n <= m, got k={k} n={n} m={m}"
        )));
    }
    let lhs = d(
        &empirical(x, m, Mode::Exact)?,
        &empirical(&x.shift(k), n - k, Mode::Exact)?,
    )?;
    let rhs = rational::ratio((m - n + k) as i64, n as i64);
    Ok(AuxItem { item: 1, lhs, rhs })
}

/// Item 2: `d(αμ₁ + (1-α)μ₂, μ_j) ≤ d(μ₁, μ₂)`, one entry per `j`.
pub fn aux_affine(alpha: &Rational, mu1: &FinMeasure, mu2: &FinMeasure) -> Result<[AuxItem; 2]> {
    let m = mix(alpha, mu1, mu2)?;
    let rhs = d(mu1, mu2)?;
    Ok([
        AuxItem {
            item: 2,
            lhs: d(&m, mu1)?,
            rhs: rhs.clone(),
        },
        AuxItem {
            item: 2,
            lhs: d(&m, mu2)?,
            rhs,
        },
    ])
}

/// Item 3: mixtures of close pairs with weights `α`, `β` stay within
/// `|α-β| + max_j d(μ_j, ν_j)`.
pub fn aux_uniform(
    alpha: &Rational,
    beta: &Rational,
    mu: (&FinMeasure, &FinMeasure),
    nu: (&FinMeasure, &FinMeasure),
) -> Result<AuxItem> {
    let delta = d(mu.0, nu.0)?.max(d(mu.1, nu.1)?);
    let lhs = d(&mix(alpha, mu.0, mu.1)?, &mix(beta, nu.0, nu.1)?)?;
    Ok(AuxItem {
        item: 3,
        lhs,
        rhs: rational::abs_diff(alpha, beta) + delta,
    })
}

/// Item 4: `d(Emp(x,m+n), (mμ₁ + nμ₂)/(m+n)) ≤ max(d₁, d₂)`.
pub fn aux_convex(
    x: &EventuallyPeriodic,
    m: usize,
    n: usize,
    mu1: &FinMeasure,
    mu2: &FinMeasure,
) -> Result<AuxItem> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("m and n must be positive".into()));
    }
    let d1 = d(&empirical(x, m, Mode::Exact)?, mu1)?;
    let d2 = d(&empirical(&x.shift(m), n, Mode::Exact)?, mu2)?;
    let w = rational::ratio(m as i64, (m + n) as i64);
    let lhs = d(&empirical(x, m + n, Mode::Exact)?, &mix(&w, mu1, mu2)?)?;
    Ok(AuxItem {
        item: 4,
        lhs,
        rhs: d1.max(d2),
    })
}

/// All four items on one parameter set.
pub fn check_aux(input: &AuxInput) -> Result<Vec<AuxItem>> {
    let unit = |q: &Rational| *q >= Rational::zero() && *q <= Rational::one();
    if !unit(&input.alpha) || !unit(&input.beta) {
        return Err(Error::InvalidInput(
            "alpha and beta must lie in [0, 1]".into(),
        ));
    }
    let mut out = vec![aux_initial(&input.x, input.k, input.m, input.n)?];
    out.extend(aux_affine(&input.alpha, &input.mu1, &input.mu2)?);
    out.push(aux_uniform(
        &input.alpha,
        &input.beta,
        (&input.mu1, &input.mu2),
        (&input.nu1, &input.nu2),
    )?);
    out.push(aux_convex(
        &input.x, input.m, input.n, &input.mu1, &input.mu2,
    )?);
    Ok(out)
}
