//! CSV writers. Every file starts with one `#` line naming the schema
//! version, the seed and the generator.

use crate::error::{Error, Result};
use crate::orbitlab::GenericReport;
use crate::rational::{format_rational, to_f64};
use crate::seqcore::render_sequence;

use super::experiments::{DensityRow, EntropyTable, ObstructionReport};

pub const SCHEMA_VERSION: u32 = 1;
pub const RNG_NAME: &str = "ChaCha8";

fn header(kind: &str, seed: u64) -> String {
    format!("# shiftlab {kind} csv v{SCHEMA_VERSION} seed={seed} rng={RNG_NAME}\n")
}

fn table(kind: &str, seed: u64, columns: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(columns).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(header(kind, seed) + &String::from_utf8(body).map_err(|e| Error::Io(e.to_string()))?)
}

pub fn density_csv(rows: &[DensityRow], seed: u64) -> Result<String> {
    let mut sorted: Vec<&DensityRow> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        a.trial
            .cmp(&b.trial)
            .then_with(|| b.epsilon.cmp(&a.epsilon))
    });
    table(
        "density",
        seed,
        &[
            "trial",
            "combo",
            "eps",
            "distance",
            "distance_f64",
            "period",
            "links",
            "brute_checked",
        ],
        sorted
            .into_iter()
            .map(|r| {
                vec![
                    r.trial.to_string(),
                    r.combo.clone(),
                    format_rational(&r.epsilon),
                    format_rational(&r.distance),
                    format!("{:.9}", to_f64(&r.distance)),
                    r.period.to_string(),
                    r.links.to_string(),
                    r.brute_checked.to_string(),
                ]
            })
            .collect(),
    )
}

pub fn generic_csv(report: &GenericReport, seed: u64) -> Result<String> {
    table(
        "generic",
        seed,
        &["n", "stage", "target", "lo", "hi", "hi_f64"],
        report
            .checkpoints
            .iter()
            .map(|c| {
                vec![
                    c.n.to_string(),
                    c.stage.to_string(),
                    c.target.to_string(),
                    format_rational(&c.lo),
                    format_rational(&c.hi),
                    format!("{:.9}", to_f64(&c.hi)),
                ]
            })
            .collect(),
    )
}

pub fn entropy_csv(t: &EntropyTable) -> Result<String> {
    let last = t.rows.len().saturating_sub(1);
    let opt = |x: Option<f64>| x.map_or_else(String::new, |v| format!("{v:.9}"));
    table(
        "entropy",
        0,
        &[
            "n",
            "r_n",
            "l_n",
            "est",
            "recurrence",
            "spr_margin",
            "phi_gap",
        ],
        t.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                vec![
                    r.n.to_string(),
                    r.r.to_string(),
                    r.l.to_string(),
                    opt(r.estimate),
                    r.recurrence.map_or_else(
                        || "na".into(),
                        |ok| if ok { "pass".into() } else { "fail".into() },
                    ),
                    if i == last {
                        opt(t.spr_margin)
                    } else {
                        String::new()
                    },
                    if i == last {
                        opt(t.phi_gap)
                    } else {
                        String::new()
                    },
                ]
            })
            .collect(),
    )
}

pub fn obstruction_csv(r: &ObstructionReport) -> Result<String> {
    let mut rows: Vec<Vec<String>> = r
        .by_bound
        .iter()
        .map(|(p, d)| {
            vec![
                p.to_string(),
                format_rational(d),
                format!("{:.9}", to_f64(d)),
                String::new(),
            ]
        })
        .collect();
    if let Some(last) = rows.last_mut() {
        last[3] = render_sequence(&r.argmin);
    }
    table(
        "obstruction",
        0,
        &["period_bound", "min_distance", "min_distance_f64", "argmin"],
        rows,
    )
}
