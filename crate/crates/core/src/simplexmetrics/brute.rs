//! Subset enumeration for the distance, kept apart from the flow code.

use std::ops::Sub;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::flow::Capacity;
use super::measure::{FinMeasure, Point};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::seqcore::rho;

pub const MAX_BRUTE_SUPPORT: usize = 24;

fn distance(a: &Point, b: &Point) -> Rational {
    match (a, b) {
        (Point::Seq(x), Point::Seq(y)) => rho(x, y),
        (Point::Block(x), Point::Block(y)) => match x.iter().zip(y).position(|(p, q)| p != q) {
            Some(i) => Rational::new(BigInt::one(), BigInt::one() << (i + 1)),
            None => Rational::zero(),
        },
        _ => Rational::new(BigInt::one(), BigInt::from(2)),
    }
}

fn walk<T: Capacity + Sub<Output = T>>(
    i: usize,
    mu: &[T],
    nbr: &[u32],
    nu: &[T],
    taken: T,
    union: u32,
    best: &mut T,
) {
    if i == mu.len() {
        let mut covered = T::zero();
        for (j, m) in nu.iter().enumerate() {
            if union >> j & 1 == 1 {
                covered += m;
            }
        }
        if taken > covered {
            let gap = taken - covered;
            if gap > *best {
                *best = gap;
            }
        }
        return;
    }
    walk(i + 1, mu, nbr, nu, taken.clone(), union, best);
    let mut with = taken;
    with += &mu[i];
    walk(i + 1, mu, nbr, nu, with, union | nbr[i], best);
}

fn max_gap<T: Capacity + Sub<Output = T>>(mu: Vec<T>, nbr: &[u32], nu: Vec<T>) -> T {
    let mut best = T::zero();
    walk(0, &mu, nbr, &nu, T::zero(), 0, &mut best);
    best
}

/// `inf_ε` by direct evaluation on every band: all subsets `A` of the
/// support of `mu`, every radius among the cross distances.
pub fn bruteforce_one_sided(mu: &FinMeasure, nu: &FinMeasure) -> Result<Rational> {
    if mu.mode() != nu.mode() {
        return Err(Error::ModeMismatch);
    }
    let total = mu.support_len() + nu.support_len();
    if total > MAX_BRUTE_SUPPORT {
        return Err(Error::SupportTooLarge(total));
    }
    let dist: Vec<Vec<Rational>> = mu
        .atoms()
        .iter()
        .map(|(x, _)| nu.atoms().iter().map(|(y, _)| distance(x, y)).collect())
        .collect();
    let mut radii: Vec<Rational> = dist.iter().flatten().cloned().collect();
    radii.push(Rational::zero());
    radii.sort();
    radii.dedup();
    let scale = rational::common_denominator(mu.atoms().iter().chain(nu.atoms()).map(|(_, m)| m));
    let scaled = |m: &Rational| (m * Rational::from_integer(scale.clone())).to_integer();
    let mu_int: Vec<BigInt> = mu.atoms().iter().map(|(_, m)| scaled(m)).collect();
    let nu_int: Vec<BigInt> = nu.atoms().iter().map(|(_, m)| scaled(m)).collect();
    let small = scale.bits() < 100;
    let mut best: Option<Rational> = None;
    for t in &radii {
        let nbr: Vec<u32> = dist
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, d)| *d <= t)
                    .fold(0u32, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        let gap = if small {
            let a = mu_int.iter().map(|x| x.to_i128().unwrap_or(0)).collect();
            let b = nu_int.iter().map(|x| x.to_i128().unwrap_or(0)).collect();
            BigInt::from(max_gap::<i128>(a, &nbr, b))
        } else {
            max_gap::<BigInt>(mu_int.clone(), &nbr, nu_int.clone())
        };
        let d = Rational::new(gap, scale.clone());
        let band = if d > *t { d } else { t.clone() };
        best = Some(match best {
            Some(b) if b <= band => b,
            _ => band,
        });
    }
    Ok(best.unwrap_or_else(Rational::zero))
}

/// Maximum of both brute-force one-sided values.
pub fn dbar_bruteforce(mu: &FinMeasure, nu: &FinMeasure) -> Result<Rational> {
    let f = bruteforce_one_sided(mu, nu)?;
    let b = bruteforce_one_sided(nu, mu)?;
    Ok(f.max(b))
}

/// Whether the pair is within the brute-force support guard.
pub fn brute_feasible(mu: &FinMeasure, nu: &FinMeasure) -> bool {
    mu.mode() == nu.mode() && mu.support_len() + nu.support_len() <= MAX_BRUTE_SUPPORT
}
