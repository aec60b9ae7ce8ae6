mod oracle;

use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::Config;
use shiftlab::harness::{rng, root_loop_pool, sample_word};
use shiftlab::orbitlab::{
    approx_convex, check_closing, check_link, close_orbit, closing_distances, link, link_bound,
    link_distance, periodic_admissible, seam_margin, Source,
};
use shiftlab::rational::{dyadic, ratio, Rational};
use shiftlab::seqcore::EventuallyPeriodic;
use shiftlab::systems::ShiftSystem;

fn config(cases: u32) -> Config {
    Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    }
}

fn systems() -> Vec<ShiftSystem> {
    vec![ShiftSystem::sgap(&[1, 2]), ShiftSystem::golden_beta()]
}

fn eps() -> impl Strategy<Value = Rational> {
    prop_oneof![
        Just(ratio(1, 2)),
        Just(ratio(1, 3)),
        Just(ratio(1, 4)),
        Just(ratio(1, 8)),
        Just(ratio(1, 10)),
        Just(ratio(1, 16))
    ]
}

fn pick(pool: &[EventuallyPeriodic], i: usize) -> EventuallyPeriodic {
    pool[i % pool.len()].clone()
}

/// Bowen-ball check on raw symbols.
fn ball(y: &EventuallyPeriodic, x: impl Fn(usize) -> u32, p: usize, a: usize) -> bool {
    let per = y.period();
    (0..p).all(|j| (0..a).all(|i| oracle::window(&per, j + i, 1)[0] == x(j + i)))
}

proptest! {
    #![proptest_config(config(60))]

    #[test]
    fn seam_margin_brackets_eps(n in 1i64..200, d in 1i64..4000) {
        prop_assume!(n < d);
        let e = ratio(n, d);
        let a = seam_margin(&e) as u32;
        prop_assert!(dyadic(a + 1) < e);
        prop_assert!(a == 0 || dyadic(a) >= e);
    }

    #[test]
    fn closings_of_periodic_points(s in 0usize..2, i in 0usize..64, e in eps(), n in 1usize..40) {
        let sys = &systems()[s];
        let x = pick(&root_loop_pool(sys, 6).unwrap(), i);
        let cert = close_orbit(sys, &Source::Seq(x.clone()), &e, n).unwrap();
        check_closing(sys, &cert).unwrap();
        prop_assert!(cert.n <= cert.p && cert.p <= cert.q);
        prop_assert!(Rational::from_integer(cert.q.into()) <= (Rational::one() + &e) * Rational::from_integer(cert.p.into()));
        prop_assert!(ball(&cert.y, |k| x.get(k), cert.p, seam_margin(&e)));
        prop_assert!(periodic_admissible(sys, &cert.y).unwrap());
        let (d_gamma, d_emp) = closing_distances(&cert).unwrap();
        prop_assert!(d_gamma < e);
        prop_assert!(d_emp <= e);
    }

    #[test]
    fn closings_of_sampled_prefixes(s in 0usize..2, seed in any::<u64>(), e in eps(), n in 1usize..20) {
        let sys = &systems()[s];
        let w = sample_word(sys, 200, &mut rng(seed)).unwrap();
        match close_orbit(sys, &Source::Prefix(w.clone()), &e, n) {
            Ok(cert) => {
                check_closing(sys, &cert).unwrap();
                prop_assert!(ball(&cert.y, |k| w[k], cert.p, seam_margin(&e)));
            }
            Err(err) => prop_assert!(matches!(err, shiftlab::error::Error::NoClosureInRange), "{err}"),
        }
    }

    #[test]
    fn links_hold_their_bound(s in 0usize..2, i in 0usize..64, j in 0usize..64, lam in 0i64..=12, e in eps(), div in prop::option::of(1usize..5)) {
        let sys = &systems()[s];
        let pool = root_loop_pool(sys, 5).unwrap();
        let (y1, y2) = (pick(&pool, i), pick(&pool, j));
        let lambda = ratio(lam, 12);
        let cert = link(sys, &y1, &y2, &lambda, &e, div).unwrap();
        check_link(sys, &cert).unwrap();
        if let Some(d) = div {
            prop_assert!(cert.p1.is_multiple_of(d) && cert.p2.is_multiple_of(d));
        }
        let r = Rational::new(cert.p1.into(), (cert.p1 + cert.p2).into());
        prop_assert!(r >= &lambda - &e && r <= &lambda + &e);
        let a = seam_margin(&e);
        prop_assert!(ball(&cert.z, |k| y1.get(k), cert.p1, a));
        prop_assert!(ball(&cert.z.shift(cert.q1), |k| y2.get(k), cert.p2, a));
        prop_assert!(link_distance(&cert).unwrap() <= link_bound(&cert));
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn approximation_stays_within_budget(seed in any::<u64>(), parts in 1usize..=3, k in 3u32..=5) {
        use rand::seq::SliceRandom;
        use rand::Rng;
        let sys = ShiftSystem::sgap(&[1, 2]);
        let pool = root_loop_pool(&sys, 6).unwrap();
        let mut r = rng(seed);
        let picks: Vec<EventuallyPeriodic> = pool.choose_multiple(&mut r, parts).cloned().collect();
        let w: Vec<i64> = picks.iter().map(|_| r.gen_range(1..5)).collect();
        let total: i64 = w.iter().sum();
        let combo: Vec<(Rational, EventuallyPeriodic)> = picks.into_iter().zip(&w).map(|(p, &x)| (ratio(x, total), p)).collect();
        let e = dyadic(k);
        let res = approx_convex(&sys, &combo, &e).unwrap();
        prop_assert!(res.distance < e);
        prop_assert!(periodic_admissible(&sys, &res.z).unwrap());
        let mut prev = Rational::zero();
        for st in &res.trace {
            check_link(&sys, &st.cert).unwrap();
            prop_assert!(st.distance <= st.budget);
            prop_assert!(st.budget >= prev);
            prev = st.budget.clone();
        }
    }
}
