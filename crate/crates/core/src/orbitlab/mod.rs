//! Constructive engines: closing orbit segments into periodic orbits,
//! linking two periodic orbits, convex approximation by a single periodic
//! orbit and finite-horizon generic points.

mod approx;
mod check;
mod closing;
mod generic;
mod linking;

use std::cmp::Ordering;

use num_traits::{One, Zero};

pub use approx::{approx_convex, ApproxResult, ApproxStage, Schedule};
pub use check::{check_closing, check_link, in_bowen_ball, periodic_admissible};
pub use closing::{close_orbit, closing_distances, sft_close, ClosingCertificate, Source};
pub use generic::{
    default_eps0, generic_prefix, oscillation_prefix, Checkpoint, Combo, GenericOptions,
    GenericReport, StageRecord,
};
pub use linking::{
    link, link_bound, link_distance, link_words, root_loop_word, LinkCertificate, LinkRequest,
};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `a(ε)`: least `m` with `2^{-(m+1)} < ε`. Two points are `ε`-close
/// exactly when they agree on their first `a(ε)` symbols.
pub fn seam_margin(eps: &Rational) -> usize {
    let mut m = 0usize;
    while rational::dyadic(m as u32 + 1) >= *eps {
        m += 1;
    }
    m
}

/// `ε ∈ (0, 1/2]`.
pub(crate) fn check_eps(eps: &Rational) -> Result<()> {
    if *eps <= Rational::zero() || *eps > rational::ratio(1, 2) {
        return Err(Error::InvalidInput(format!(
            "epsilon {eps} outside (0, 1/2]"
        )));
    }
    Ok(())
}

pub(crate) fn check_unit(x: &Rational, what: &str) -> Result<()> {
    if *x < Rational::zero() || *x > Rational::one() {
        return Err(Error::InvalidInput(format!("{what} {x} outside [0, 1]")));
    }
    Ok(())
}

/// `q ≤ (1+ε)p`.
pub(crate) fn within_stretch(q: usize, p: usize, eps: &Rational) -> bool {
    let lhs = Rational::from_integer(q.into());
    let rhs = (Rational::one() + eps) * Rational::from_integer(p.into());
    lhs.cmp(&rhs) != Ordering::Greater
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn seam_margins() {
        assert_eq!(seam_margin(&ratio(1, 2)), 1);
        assert_eq!(seam_margin(&ratio(1, 8)), 3);
        assert_eq!(seam_margin(&ratio(1, 10)), 3);
        assert_eq!(seam_margin(&ratio(1, 32)), 5);
        assert_eq!(seam_margin(&ratio(3, 10)), 1);
    }

    #[test]
    fn stretch() {
        assert!(within_stretch(19, 17, &ratio(1, 8)));
        assert!(!within_stretch(20, 17, &ratio(1, 8)));
        assert!(within_stretch(18, 16, &ratio(1, 8)));
    }
}
