//! Measure files: a JSON list of `{"point": "...", "mass": "p/q"}`.
//!
//! Points written with a period, `01(10)^inf`, make an `EXACT` measure;
//! plain words of a common length `m` make a `TRUNCATED(m)` one.

use serde::{Deserialize, Serialize};

use super::measure::{FinMeasure, Mode, Point};
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::seqcore::{parse_sequence, parse_symbols};
use crate::systems::NumText;

pub const MAX_MEASURE_ATOMS: usize = 1 << 16;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AtomDoc {
    pub point: String,
    pub mass: NumText,
}

fn parse_point(text: &str) -> Result<Point> {
    if text.contains('(') && text.contains("^") {
        Ok(Point::Seq(parse_sequence(text)?))
    } else {
        Ok(Point::Block(parse_symbols(text)?))
    }
}

pub fn parse_measure(text: &str) -> Result<FinMeasure> {
    let docs: Vec<AtomDoc> = serde_json::from_str(text)?;
    if docs.is_empty() {
        return Err(Error::InvalidInput("measure has no atoms".into()));
    }
    if docs.len() > MAX_MEASURE_ATOMS {
        return Err(Error::LimitExceeded(format!("{} atoms", docs.len())));
    }
    let mut atoms: Vec<(Point, Rational)> = Vec::with_capacity(docs.len());
    for d in &docs {
        let mass = match &d.mass {
            NumText::Int(n) => Rational::from_integer((*n).into()),
            NumText::Text(s) => crate::rational::parse_rational(s)?,
        };
        atoms.push((parse_point(&d.point)?, mass));
    }
    let mode = match &atoms[0].0 {
        Point::Seq(_) => Mode::Exact,
        Point::Block(b) if b.is_empty() => return Err(Error::InvalidInput("empty block".into())),
        Point::Block(b) => Mode::Truncated(b.len()),
    };
    FinMeasure::new(mode, atoms)
}

pub fn render_measure(mu: &FinMeasure) -> String {
    let docs: Vec<AtomDoc> = mu
        .atoms()
        .iter()
        .map(|(p, m)| AtomDoc {
            point: p.render(),
            mass: NumText::Text(format_rational(m)),
        })
        .collect();
    serde_json::to_string_pretty(&docs).unwrap_or_default()
}
