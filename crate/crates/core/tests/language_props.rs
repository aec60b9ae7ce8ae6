mod oracle;

use proptest::prelude::*;
use proptest::test_runner::Config;
use rand::Rng;
use shiftlab::graphview::{loops_through, return_counts, GammaEnt, GammaS, LabelledGraph};
use shiftlab::harness::{find_gluing, rng, sample_word};
use shiftlab::rational::ratio;
use shiftlab::systems::{
    beta_expand, beta_hat, expansion_of_one, parry_valid, BetaHat, BetaNumber, GapSet, ShiftSystem,
    Substitution, TwoErgodic,
};

fn config(cases: u32) -> Config {
    Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    }
}

fn factorial_kinds() -> Vec<(&'static str, ShiftSystem)> {
    vec![
        ("full", ShiftSystem::Full { alphabet: 3 }),
        ("golden mean", ShiftSystem::golden_mean()),
        ("gap {1,2}", ShiftSystem::sgap(&[1, 2])),
        ("gap {2,5}", ShiftSystem::sgap(&[2, 5])),
        ("golden beta", ShiftSystem::golden_beta()),
        ("dyck", ShiftSystem::Dyck),
        ("entropy graph", ShiftSystem::gamma_ent()),
        ("small center", ShiftSystem::small_center_golden()),
        ("x prime", ShiftSystem::XPrime(Substitution::fibonacci())),
        ("x double prime", ShiftSystem::XDoublePrime),
    ]
}

#[test]
fn languages_are_factorial() {
    let mut r = rng(11);
    for (name, sys) in factorial_kinds() {
        for _ in 0..10_000 {
            let len = r.gen_range(1..=10);
            let w = sample_word(&sys, len, &mut r).unwrap();
            for i in 0..w.len() {
                for j in i + 1..=w.len() {
                    assert!(
                        sys.contains(&w[i..j]).unwrap(),
                        "{name}: {:?} in {:?}",
                        &w[i..j],
                        w
                    );
                }
            }
            assert!(
                sample_word(&sys, len + 1, &mut r).is_ok(),
                "{name}: no extension"
            );
        }
    }
}

#[test]
fn two_ergodic_is_not_factorial() {
    let t = TwoErgodic::fibonacci();
    let w = |s: &str| shiftlab::seqcore::parse_symbols(s).unwrap();
    assert!(t.contains(&w("01010001")));
    assert!(!t.contains(&w("1010001")));
}

proptest! {
    #![proptest_config(config(200))]

    /// Words glued by the fourth rule: `v 0^k w` with few ones.
    #[test]
    fn two_ergodic_gluing_rule(i in 0usize..60, a in 1usize..8, j in 0usize..60, b in 1usize..8, extra in 0usize..6) {
        let t = TwoErgodic::fibonacci();
        let y = t.y().prefix(80);
        let v = &y[i..i + a];
        let w = &y[j..j + b];
        let k = t.gluing_constant() + extra;
        let total = a + k + b;
        let ones = v.iter().chain(w).filter(|&&s| s == 1).count();
        prop_assume!((ones as f64) <= (total as f64).log2());
        prop_assert!(t.contains(v) && t.contains(w));
        let glued = [v.to_vec(), vec![0; k], w.to_vec()].concat();
        prop_assert!(t.contains(&glued));
    }

    #[test]
    fn small_center_words_are_sparse(seed in any::<u64>(), k in 1u32..=8) {
        let sys = ShiftSystem::small_center_golden();
        let mut r = rng(seed);
        let w = sample_word(&sys, 1 << k, &mut r).unwrap();
        prop_assert!(w.iter().filter(|&&s| s == 2).count() <= k as usize);
    }
}

#[test]
fn parry_condition_on_a_grid() {
    for i in 1..=50 {
        let beta = ratio(1, 1) + ratio(3 * i, 50);
        let b = BetaNumber::rational(beta.clone()).unwrap();
        let hat = beta_hat(&expansion_of_one(&b, 200).unwrap()).unwrap();
        match hat {
            BetaHat::Periodic(x) => assert!(parry_valid(&x), "beta {beta}"),
            BetaHat::Truncated(d) => {
                assert!(shiftlab::systems::parry_valid_prefix(&d), "beta {beta}")
            }
        }
        let digits = beta_expand(&b, 12).unwrap().digits;
        let q = oracle::Q::new(beta.numer().clone(), beta.denom().clone());
        assert_eq!(digits, oracle::greedy_digits(&q, 12));
    }
}

/// Closed paths at the root, by explicit path enumeration.
fn brute_returns(g: &dyn LabelledGraph, n: usize) -> u64 {
    fn go(g: &dyn LabelledGraph, v: u64, left: usize) -> u64 {
        if left == 0 {
            return (v == g.root()) as u64;
        }
        g.out_edges(v)
            .iter()
            .map(|e| go(g, e.target, left - 1))
            .sum()
    }
    go(g, g.root(), n)
}

#[test]
fn return_counts_match_enumeration() {
    let graphs: Vec<Box<dyn LabelledGraph>> = vec![
        Box::new(GammaS {
            s: GapSet::finite(&[1, 2]),
        }),
        ShiftSystem::golden_beta().graph().unwrap().unwrap(),
        ShiftSystem::XDoublePrime.graph().unwrap().unwrap(),
        Box::new(GammaEnt {
            omega: Substitution::fibonacci(),
        }),
    ];
    for g in graphs {
        let c = return_counts(g.as_ref(), 12).unwrap();
        for n in 0..=12 {
            assert_eq!(
                u64::try_from(&c.r[n]).unwrap(),
                brute_returns(g.as_ref(), n),
                "{:?} n={n}",
                g.family()
            );
            assert!(c.l[n] <= c.r[n]);
        }
        for a in 1..=6 {
            for b in 1..=6 {
                assert!(c.r[a + b] >= (&c.r[a] * &c.r[b]));
            }
        }
    }
}

#[test]
fn loop_labels_are_admissible() {
    let systems = [
        ShiftSystem::sgap(&[1, 2]),
        ShiftSystem::sgap(&[2, 5]),
        ShiftSystem::golden_beta(),
        ShiftSystem::XDoublePrime,
        ShiftSystem::XPrime(Substitution::fibonacci()),
        ShiftSystem::gamma_ent(),
    ];
    for sys in systems {
        let g = sys.graph().unwrap().unwrap();
        for l in loops_through(g.as_ref(), 12).unwrap() {
            assert!(
                sys.contains(&l.repeat(3)).unwrap(),
                "{:?} {l:?}",
                sys.kind()
            );
        }
    }
}

/// Greedy word packing as many 2s as the small-center rule allows.
fn dense_word(sys: &ShiftSystem, len: usize) -> Vec<u32> {
    let mut w = Vec::new();
    while w.len() < len {
        w.push(2);
        if !sys.contains(&w).unwrap() {
            *w.last_mut().unwrap() = 0;
        }
    }
    w
}

#[test]
fn gluing_gaps_are_least() {
    let sys = ShiftSystem::small_center_golden();
    let glued = |u: &[u32], n: usize, v: &[u32]| {
        let mut w = u.to_vec();
        w.extend(std::iter::repeat_n(0, n));
        w.push(2);
        w.extend_from_slice(v);
        sys.contains(&w).unwrap()
    };
    assert_eq!(find_gluing(&sys, &[2], 2, &[]).unwrap(), Some(1));
    for len in [8, 24, 40, 64] {
        let u = dense_word(&sys, len);
        let v = dense_word(&sys, len)[1..].to_vec();
        let n = find_gluing(&sys, &u, 2, &v).unwrap().unwrap();
        assert!(glued(&u, n, &v));
        assert!(n == 0 || !glued(&u, n - 1, &v), "len {len}: gap {n}");
    }
}
