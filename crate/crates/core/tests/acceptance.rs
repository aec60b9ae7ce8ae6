//! The eleven acceptance criteria. Runs without the libtest harness so every
//! criterion prints one PASS/FAIL line; the process fails if any criterion
//! does.

mod oracle;

use std::time::{Duration, Instant};

use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use shiftlab::graphview::{word_walk, GammaEnt, LabelledGraph};
use shiftlab::harness::{
    entropy_table, find_gluing, ln_golden, rng, root_loop_pool, run_density, run_generic,
    run_obstruction, sample_word, DensityConfig, GenericConfig, MAX_GLUING_GAP, MAX_PERIOD_DYCK,
    MAX_PERIOD_XDOUBLEPRIME,
};
use shiftlab::orbitlab::{
    check_closing, check_link, close_orbit, closing_distances, link, link_bound, link_distance,
    GenericOptions, Source,
};
use shiftlab::rational::{format_rational, ratio, to_f64, Rational};
use shiftlab::seqcore::{parse_sequence, EventuallyPeriodic, Symbol};
use shiftlab::simplexmetrics::{
    check_aux, dbar, dbar_bruteforce, AuxInput, FinMeasure, Mode, Point,
};
use shiftlab::systems::{BetaNumber, BetaSystem, ShiftSystem, Substitution};

type Outcome = Result<String, String>;

fn ep(s: &str) -> EventuallyPeriodic {
    parse_sequence(s).unwrap()
}

fn random_point(r: &mut ChaCha8Rng, alphabet: u32) -> EventuallyPeriodic {
    let pre: Vec<Symbol> = (0..r.gen_range(0..4))
        .map(|_| r.gen_range(0..alphabet))
        .collect();
    let per: Vec<Symbol> = (0..r.gen_range(1..5))
        .map(|_| r.gen_range(0..alphabet))
        .collect();
    EventuallyPeriodic::new(pre, per).unwrap()
}

fn random_measure(r: &mut ChaCha8Rng, max_atoms: usize) -> FinMeasure {
    let k = r.gen_range(1..=max_atoms);
    let atoms: Vec<(EventuallyPeriodic, i64)> = (0..k)
        .map(|_| (random_point(r, 2), r.gen_range(1..8)))
        .collect();
    let total: i64 = atoms.iter().map(|(_, w)| w).sum();
    FinMeasure::new(
        Mode::Exact,
        atoms
            .into_iter()
            .map(|(p, w)| (Point::Seq(p), ratio(w, total)))
            .collect(),
    )
    .unwrap()
}

fn raw(m: &FinMeasure) -> Vec<(oracle::Pt, oracle::Q)> {
    m.atoms()
        .iter()
        .map(|(p, mass)| match p {
            Point::Seq(x) => (oracle::Pt::new(x.preperiod(), &x.period()), mass.clone()),
            Point::Block(_) => unreachable!("exact atoms only"),
        })
        .collect()
}

fn corpus() -> Vec<(FinMeasure, FinMeasure)> {
    let mut r = rng(2024);
    (0..200)
        .map(|_| (random_measure(&mut r, 10), random_measure(&mut r, 10)))
        .collect()
}

fn timed(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    if t > limit {
        Err(format!("runtime {t:.1?} above {limit:?}"))
    } else {
        Ok(t)
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let pairs = corpus();
    for (i, (mu, nu)) in pairs.iter().enumerate() {
        let fast = dbar(mu, nu).map_err(|e| e.to_string())?.value;
        let slow = dbar_bruteforce(mu, nu).map_err(|e| e.to_string())?;
        if fast != slow {
            return Err(format!("pair {i}: flow {fast} vs subsets {slow}"));
        }
        let reference = oracle::prokhorov(&raw(mu), &raw(nu));
        if fast != reference {
            return Err(format!("pair {i}: flow {fast} vs test oracle {reference}"));
        }
    }
    let t = timed(Duration::from_secs(60), start)?;
    Ok(format!("200 pairs equal to both oracles in {t:.1?}"))
}

fn criterion_2() -> Outcome {
    for (i, (mu, nu)) in corpus().iter().enumerate() {
        let r = dbar(mu, nu).map_err(|e| e.to_string())?;
        if r.forward.value != r.backward.value {
            return Err(format!(
                "pair {i}: forward {} backward {}",
                r.forward.value, r.backward.value
            ));
        }
    }
    Ok("forward = backward on 200 pairs".into())
}

fn criterion_3() -> Outcome {
    let mut r = rng(31);
    let mut least: Option<Rational> = None;
    for t in 0..1000 {
        let n = r.gen_range(1..10);
        let input = AuxInput {
            k: r.gen_range(0..n),
            m: n + r.gen_range(0..6),
            n,
            x: random_point(&mut r, 2),
            mu1: random_measure(&mut r, 4),
            mu2: random_measure(&mut r, 4),
            nu1: random_measure(&mut r, 4),
            nu2: random_measure(&mut r, 4),
            alpha: ratio(r.gen_range(0..=8), 8),
            beta: ratio(r.gen_range(0..=8), 8),
        };
        for item in check_aux(&input).map_err(|e| e.to_string())? {
            let margin = item.margin();
            if margin < Rational::zero() {
                return Err(format!("instance {t} item {}: margin {margin}", item.item));
            }
            if least.as_ref().is_none_or(|l| margin < *l) {
                least = Some(margin);
            }
        }
    }
    Ok(format!(
        "1000 instances, least margin {}",
        format_rational(&least.unwrap())
    ))
}

fn all_words(len: usize, alphabet: u32) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..alphabet).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

fn criterion_4() -> Outcome {
    let betas = [
        ("phi", ShiftSystem::golden_beta()),
        (
            "2",
            ShiftSystem::Beta(
                BetaSystem::from_beta(BetaNumber::rational(ratio(2, 1)).unwrap(), 64).unwrap(),
            ),
        ),
    ];
    let mut checked = 0usize;
    for (name, sys) in &betas {
        let g = sys.graph().unwrap().unwrap();
        let hat = match sys {
            ShiftSystem::Beta(b) => b.hat.clone(),
            _ => unreachable!(),
        };
        let a = sys.alphabet_size();
        for len in 0..=14 {
            for w in all_words(len, a) {
                let rule = sys.contains(&w).map_err(|e| e.to_string())?;
                let walk = !word_walk(g.as_ref(), g.root(), &w).is_empty();
                let reference = oracle::beta_suffix_rule(&w, |i| hat.digit(i).unwrap());
                if rule != walk || rule != reference {
                    return Err(format!("beta {name}: {w:?} rule {rule} walk {walk}"));
                }
                checked += 1;
            }
        }
    }
    for s in [[1u64, 2], [2, 5]] {
        let sys = ShiftSystem::sgap(&s);
        for len in 0..=14 {
            for w in all_words(len, 2) {
                if sys.contains(&w).map_err(|e| e.to_string())? != oracle::sgap_scan(&w, &s) {
                    return Err(format!("gap set {s:?}: {w:?}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} words agree"))
}

fn pool_point(r: &mut ChaCha8Rng, pool: &[EventuallyPeriodic]) -> EventuallyPeriodic {
    let y = pool.choose(r).unwrap();
    y.shift(r.gen_range(0..y.period_len()))
}

fn eps_choice(r: &mut ChaCha8Rng) -> Rational {
    [ratio(1, 4), ratio(1, 8), ratio(1, 10), ratio(1, 16)]
        .choose(r)
        .unwrap()
        .clone()
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let systems = [ShiftSystem::sgap(&[1, 2]), ShiftSystem::golden_beta()];
    let mut worst = 0.0f64;
    for t in 0..100 {
        let sys = &systems[t % 2];
        let pool = root_loop_pool(sys, 8).unwrap();
        let x = pool_point(&mut r, &pool);
        let e = eps_choice(&mut r);
        let n = r.gen_range(1..=30);
        let cert = close_orbit(sys, &Source::Seq(x.clone()), &e, n)
            .map_err(|err| format!("trial {t}: {err}"))?;
        check_closing(sys, &cert).map_err(|err| format!("trial {t}: {err}"))?;
        let (d, _) = closing_distances(&cert).map_err(|err| err.to_string())?;
        if d >= e {
            return Err(format!("trial {t}: distance {d} not below {e}"));
        }
        worst = worst.max(to_f64(&(d / &e)));
    }
    Ok(format!("100 certificates, worst distance/eps {worst:.3}"))
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let systems = [ShiftSystem::sgap(&[1, 2]), ShiftSystem::golden_beta()];
    let mut worst = 0.0f64;
    for t in 0..100 {
        let sys = &systems[t % 2];
        let pool = root_loop_pool(sys, 6).unwrap();
        let y1 = pool.choose(&mut r).unwrap().clone();
        let y2 = pool.choose(&mut r).unwrap().clone();
        let lambda = ratio(r.gen_range(0..=12), 12);
        let e = eps_choice(&mut r);
        let div = if r.gen_bool(0.5) {
            Some(r.gen_range(1..=4))
        } else {
            None
        };
        let cert =
            link(sys, &y1, &y2, &lambda, &e, div).map_err(|err| format!("trial {t}: {err}"))?;
        check_link(sys, &cert).map_err(|err| format!("trial {t}: {err}"))?;
        let d = link_distance(&cert).map_err(|err| err.to_string())?;
        if d > link_bound(&cert) {
            return Err(format!("trial {t}: distance {d} above 3 eps"));
        }
        worst = worst.max(to_f64(&(d / &e)));
    }
    Ok(format!("100 links, worst distance/eps {worst:.3}"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut cfg = DensityConfig::new(ShiftSystem::sgap(&[1, 2]), 50, 7);
    cfg.epsilons = vec![ratio(1, 32)];
    let rows = run_density(&cfg).map_err(|e| e.to_string())?;
    let worst = rows.iter().map(|row| row.distance.clone()).max().unwrap();
    if rows.len() != 50 || worst >= ratio(1, 32) {
        return Err(format!("{} rows, worst {worst}", rows.len()));
    }
    let t = timed(Duration::from_secs(120), start)?;
    Ok(format!(
        "50 targets below 1/32, worst {:.5}, {t:.1?}",
        to_f64(&worst)
    ))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let cfg = GenericConfig {
        system: ShiftSystem::sgap(&[1, 2]),
        targets: vec![vec![
            (ratio(1, 3), ep("(01)^inf")),
            (ratio(2, 3), ep("(001)^inf")),
        ]],
        horizon: 100_000,
        oscillate: false,
        options: GenericOptions::default(),
        seed: 0,
    };
    let report = run_generic(&cfg).map_err(|e| e.to_string())?;
    let his: Vec<f64> = report.checkpoints.iter().map(|c| to_f64(&c.hi)).collect();
    let last = &report.checkpoints[report.checkpoints.len().saturating_sub(5)..];
    let monotone = last.windows(2).all(|w| w[1].hi <= w[0].hi);
    let final_hi = report.checkpoints.last().unwrap().hi.clone();
    if final_hi > ratio(1, 20) || !monotone || last.len() < 5 {
        return Err(format!("checkpoint upper bounds {his:?}"));
    }
    let t = timed(Duration::from_secs(60), start)?;
    Ok(format!(
        "final upper bound {:.4}, last five non-increasing, {t:.1?}",
        to_f64(&final_hi)
    ))
}

/// Closed paths at the root by explicit enumeration.
fn enumerate_returns(g: &dyn LabelledGraph, n: usize) -> u64 {
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

fn criterion_9() -> Outcome {
    let g = GammaEnt {
        omega: Substitution::fibonacci(),
    };
    let t25 = entropy_table(&g, 25).map_err(|e| e.to_string())?;
    for row in &t25.rows {
        if (4..=25).contains(&row.n) && row.recurrence != Some(true) {
            return Err(format!("recurrence fails at n = {}", row.n));
        }
        if row.n <= 15 {
            let brute = enumerate_returns(&g, row.n);
            let r = row.r.to_u64().unwrap();
            if r != brute || (row.n >= 1 && r != oracle::compositions_min2(row.n)) {
                return Err(format!("n = {}: {r} vs enumeration {brute}", row.n));
            }
        }
    }
    let margin = entropy_table(&g, 20)
        .map_err(|e| e.to_string())?
        .spr_margin
        .unwrap_or(f64::NAN);
    let t60 = entropy_table(&g, 60).map_err(|e| e.to_string())?;
    let r60 = t60.rows.last().unwrap();
    let est = r60.estimate.unwrap();
    let gap = (est - ln_golden()).abs();
    let detail = format!(
        "recurrence 4..25 ok, enumeration to 15 ok, sprMargin(20) {margin:.4}, r_60 = {} = F_59 {}, (1/60) ln r_60 = {est:.5}, gap to ln phi {gap:.5}",
        r60.r,
        r60.r.to_u128() == Some(oracle::fibonacci(59)),
    );
    if margin.is_nan() || margin <= 0.0 || gap > 0.02 {
        return Err(detail + " (tolerance 0.02)");
    }
    Ok(detail)
}

fn criterion_10() -> Outcome {
    let target = FinMeasure::new(
        Mode::Exact,
        vec![
            (Point::Seq(ep("(0)^inf")), ratio(1, 3)),
            (Point::Seq(ep("(1)^inf")), ratio(2, 3)),
        ],
    )
    .unwrap();
    let one = FinMeasure::dirac(ep("(1)^inf"));
    let d = dbar_bruteforce(&target, &one).map_err(|e| e.to_string())?;
    if d != ratio(1, 3) || oracle::prokhorov(&raw(&target), &raw(&one)) != ratio(1, 3) {
        return Err(format!("distance to the 1 fixed point is {d}"));
    }
    let x2 = run_obstruction(&ShiftSystem::XDoublePrime, &target, MAX_PERIOD_XDOUBLEPRIME)
        .map_err(|e| e.to_string())?;
    if x2.min_distance < ratio(1, 6) {
        return Err(format!(
            "X'' minimum {} at {:?}",
            x2.min_distance, x2.argmin
        ));
    }
    let brackets = FinMeasure::new(
        Mode::Exact,
        vec![
            (Point::Seq(ep("([)^inf")), ratio(1, 2)),
            (Point::Seq(ep("(])^inf")), ratio(1, 2)),
        ],
    )
    .unwrap();
    let dy = run_obstruction(&ShiftSystem::Dyck, &brackets, MAX_PERIOD_DYCK)
        .map_err(|e| e.to_string())?;
    let positive = dy.by_bound.iter().all(|(_, d)| *d > Rational::zero());
    let monotone = dy.by_bound.windows(2).all(|w| w[1].1 <= w[0].1);
    if !positive || !monotone {
        return Err(format!("Dyck minima {:?}", dy.by_bound));
    }
    Ok(format!(
        "X'' minimum {} over {} orbits (>= 1/6), Dyck minimum {} at period <= {}",
        format_rational(&x2.min_distance),
        x2.candidates,
        format_rational(&dy.min_distance),
        dy.max_period
    ))
}

fn criterion_11() -> Outcome {
    let sys = ShiftSystem::small_center_golden();
    let mut r = rng(11);
    for k in 1..=10u32 {
        for _ in 0..5 {
            let w = sample_word(&sys, 1 << k, &mut r).map_err(|e| e.to_string())?;
            let c = w.iter().filter(|&&s| s == 2).count();
            if c > k as usize {
                return Err(format!("length 2^{k} word holds {c} copies of 2"));
            }
        }
    }
    let mut worst = 0;
    for t in 0..50 {
        let u = sample_word(&sys, r.gen_range(1..=40), &mut r).map_err(|e| e.to_string())?;
        let v = loop {
            let v = sample_word(&sys, r.gen_range(1..=40), &mut r).map_err(|e| e.to_string())?;
            let mut sv = vec![2];
            sv.extend_from_slice(&v);
            if sys.contains(&sv).map_err(|e| e.to_string())? {
                break v;
            }
        };
        match find_gluing(&sys, &u, 2, &v).map_err(|e| e.to_string())? {
            Some(n) => worst = worst.max(n),
            None => return Err(format!("pair {t}: no gluing within {MAX_GLUING_GAP}")),
        }
    }
    Ok(format!(
        "sparsity holds for k <= 10; 50 gluings, longest zero run {worst} (bound {MAX_GLUING_GAP})"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("metric oracle equivalence", criterion_1),
        ("metric symmetry", criterion_2),
        ("auxiliary inequalities", criterion_3),
        ("language cross-checks", criterion_4),
        ("closing suite", criterion_5),
        ("linking suite", criterion_6),
        ("density", criterion_7),
        ("generic point", criterion_8),
        ("entropy witness", criterion_9),
        ("obstruction witness", criterion_10),
        ("small center and gluing", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
