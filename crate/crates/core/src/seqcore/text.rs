//! Text encoding of words and eventually periodic points.
//!
//! Symbols `0..=9` are written as digits and larger symbols as
//! `<10,11>` groups. The bracket characters `[ ] ( )` read as the Dyck
//! symbols 0..=3. Points render as `pre(period)^inf`; the first `(` opens
//! the period, so a Dyck `(` inside a preperiod must be written `<2>`.

use super::periodic::EventuallyPeriodic;
use super::word::{Symbol, Word};
use crate::error::{Error, Result};

const MAX_TEXT: usize = 1 << 20;

pub const DYCK_CHARS: [char; 4] = ['[', ']', '(', ')'];

pub fn render_symbols(s: &[Symbol]) -> String {
    let mut out = String::with_capacity(s.len());
    let mut i = 0;
    while i < s.len() {
        if s[i] < 10 {
            out.push(char::from(b'0' + s[i] as u8));
            i += 1;
            continue;
        }
        let start = i;
        while i < s.len() && s[i] >= 10 {
            i += 1;
        }
        let group: Vec<String> = s[start..i].iter().map(|x| x.to_string()).collect();
        out.push('<');
        out.push_str(&group.join(","));
        out.push('>');
    }
    out
}

/// Renders a word over the Dyck alphabet with bracket characters.
pub fn render_dyck(s: &[Symbol]) -> String {
    s.iter()
        .map(|&x| match x {
            0..=3 => DYCK_CHARS[x as usize].to_string(),
            _ => render_symbols(&[x]),
        })
        .collect()
}

pub fn parse_symbols(text: &str) -> Result<Vec<Symbol>> {
    if text.len() > MAX_TEXT {
        return Err(Error::Parse("word text too long".into()));
    }
    let mut out = Vec::new();
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        match c {
            '0'..='9' => out.push(c as Symbol - '0' as Symbol),
            '[' => out.push(0),
            ']' => out.push(1),
            '(' => out.push(2),
            ')' => out.push(3),
            '<' => {
                let mut body = String::new();
                loop {
                    match chars.next() {
                        Some('>') => break,
                        Some(ch) => body.push(ch),
                        None => return Err(Error::Parse("unterminated '<' group".into())),
                    }
                }
                if body.is_empty() {
                    return Err(Error::Parse("empty '<>' group".into()));
                }
                for part in body.split(',') {
                    let v: Symbol = part
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad symbol {part:?}")))?;
                    out.push(v);
                }
            }
            _ => return Err(Error::Parse(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

impl Word {
    pub fn parse(text: &str) -> Result<Word> {
        parse_symbols(text.trim()).map(Word::new)
    }
}

pub fn render_sequence(x: &EventuallyPeriodic) -> String {
    format!(
        "{}({})^inf",
        render_symbols(x.preperiod()),
        render_symbols(&x.period())
    )
}

/// Dyck rendering; a `(` in the preperiod is written `<2>` so the text
/// parses back unambiguously.
pub fn render_dyck_sequence(x: &EventuallyPeriodic) -> String {
    let pre: String = x
        .preperiod()
        .iter()
        .map(|&s| {
            if s == 2 {
                "<2>".to_string()
            } else {
                render_dyck(&[s])
            }
        })
        .collect();
    format!("{}({})^inf", pre, render_dyck(&x.period()))
}

/// Parses `pre(period)^inf` (also `^∞`).
pub fn parse_sequence(text: &str) -> Result<EventuallyPeriodic> {
    let t = text.trim();
    let body = t
        .strip_suffix(")^inf")
        .or_else(|| t.strip_suffix(")^∞"))
        .ok_or_else(|| Error::Parse(format!("sequence must end with ')^inf': {t:?}")))?;
    let open = body
        .find('(')
        .ok_or_else(|| Error::Parse("missing '(' before the period".into()))?;
    let pre = parse_symbols(&body[..open])?;
    let period = parse_symbols(&body[open + 1..])?;
    if period.is_empty() {
        return Err(Error::Parse("empty period".into()));
    }
    EventuallyPeriodic::new(pre, period)
}
