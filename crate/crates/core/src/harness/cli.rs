use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use super::csvout::{density_csv, entropy_csv, generic_csv, obstruction_csv};
use super::experiments::{
    run_density, run_entropy, run_generic, run_obstruction, DensityConfig, GenericConfig,
};
use crate::error::{Error, Result};
use crate::orbitlab::{
    approx_convex, close_orbit, link, link_distance, Combo, GenericOptions, Source,
};
use crate::rational::{format_rational, parse_rational};
use crate::seqcore::{parse_sequence, parse_symbols, render_sequence, render_symbols};
use crate::simplexmetrics::{dbar, parse_measure, Mode};
use crate::systems::{beta_expand, parse_system, BetaNumber, NumText, ShiftSystem, SystemKind};

#[derive(Parser, Debug)]
#[command(
    name = "shiftlab",
    version,
    about = "Coded shift spaces, exact measure distances and periodic approximation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Language membership of a word.
    LangCheck {
        #[arg(long)]
        system: String,
        #[arg(long)]
        word: String,
    },
    /// Greedy digits of the beta-expansion of 1.
    ExpandBeta {
        /// Rational beta, or `phi` for the golden ratio.
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 16)]
        digits: usize,
    },
    /// Distance between two measure files.
    Dbar {
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        nu: PathBuf,
    },
    /// Close an orbit segment into a periodic orbit.
    Close {
        #[arg(long)]
        system: String,
        /// Eventually periodic point `u(v)^inf` or a plain prefix.
        #[arg(long)]
        x: String,
        #[arg(long)]
        eps: String,
        #[arg(long = "N")]
        n: usize,
    },
    /// Link two root-loop periodic points.
    Link {
        #[arg(long)]
        system: String,
        #[arg(long)]
        y1: String,
        #[arg(long)]
        y2: String,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        divisor: Option<usize>,
    },
    /// Approximate a convex combination by one periodic orbit.
    Approx {
        #[arg(long)]
        system: String,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        eps: String,
    },
    /// Prefix of a generic (or oscillating) point with its checkpoint table.
    Generic {
        #[arg(long)]
        system: String,
        /// Combination files, one per target.
        #[arg(long, required = true)]
        target: Vec<PathBuf>,
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        oscillate: bool,
        #[arg(long)]
        eps0: Option<String>,
        #[arg(long, default_value_t = 12)]
        truncation: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the prefix, one symbol string.
        #[arg(long)]
        prefix_out: Option<PathBuf>,
    },
    /// Return counts of the entropy-gap graph.
    Entropy {
        #[arg(long = "nmax", default_value_t = 60)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Least distance from a target to small periodic orbits.
    Obstruct {
        /// `xdoubleprime` or `dyck`, or a system document.
        #[arg(long)]
        system: String,
        #[arg(long)]
        target: PathBuf,
        #[arg(long = "max-period")]
        max_period: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random convex targets approximated by periodic orbits.
    Density {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Tolerances; defaults to 1/8, 1/16, 1/32.
        #[arg(long)]
        eps: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComboPart {
    weight: NumText,
    point: String,
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

/// A system document given inline (`{...}`), as a kind name without
/// parameters, as `golden-beta`, or as a file path.
fn load_system(arg: &str) -> Result<ShiftSystem> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return parse_system(trimmed);
    }
    if !Path::new(arg).exists() {
        if arg == "golden-beta" {
            return Ok(ShiftSystem::golden_beta());
        }
        if let Ok(kind) = SystemKind::from_name(arg) {
            return parse_system(&json!({ "kind": kind.name() }).to_string());
        }
    }
    parse_system(&read(Path::new(arg))?)
}

pub fn parse_combo(text: &str) -> Result<Combo> {
    let parts: Vec<ComboPart> = serde_json::from_str(text)?;
    if parts.is_empty() {
        return Err(Error::InvalidInput("empty combination".into()));
    }
    parts
        .iter()
        .map(|p| Ok((p.weight.rational()?, parse_sequence(&p.point)?)))
        .collect()
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn beta_arg(s: &str) -> Result<BetaNumber> {
    match s {
        "phi" | "golden" => Ok(BetaNumber::golden()),
        _ => BetaNumber::rational(parse_rational(s)?),
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::LangCheck { system, word } => {
            let sys = load_system(&system)?;
            println!("{}", sys.contains(&parse_symbols(&word)?)?);
        }
        Command::ExpandBeta { beta, digits } => {
            let e = beta_expand(&beta_arg(&beta)?, digits)?;
            let d: Vec<String> = e.digits.iter().map(|x| x.to_string()).collect();
            println!("{}", d.join(","));
        }
        Command::Dbar { mu, nu } => {
            let a = parse_measure(&read(&mu)?)?;
            let b = parse_measure(&read(&nu)?)?;
            let r = dbar(&a, &b)?;
            match r.mode {
                Mode::Exact => println!("{}", format_rational(&r.value)),
                Mode::Truncated(_) => {
                    println!(
                        "{} [{}, {}]",
                        format_rational(&r.value),
                        format_rational(&r.lo),
                        format_rational(&r.hi)
                    )
                }
            }
        }
        Command::Close { system, x, eps, n } => {
            let sys = load_system(&system)?;
            let source = if x.contains('^') {
                Source::Seq(parse_sequence(&x)?)
            } else {
                Source::Prefix(parse_symbols(&x)?)
            };
            let cert = close_orbit(&sys, &source, &parse_rational(&eps)?, n)?;
            println!("{}", serde_json::to_string_pretty(&cert.to_json())?);
        }
        Command::Link {
            system,
            y1,
            y2,
            lambda,
            eps,
            divisor,
        } => {
            let sys = load_system(&system)?;
            let cert = link(
                &sys,
                &parse_sequence(&y1)?,
                &parse_sequence(&y2)?,
                &parse_rational(&lambda)?,
                &parse_rational(&eps)?,
                divisor,
            )?;
            let mut doc = cert.to_json();
            doc["distance"] = json!(format_rational(&link_distance(&cert)?));
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Command::Approx {
            system,
            target,
            eps,
        } => {
            let sys = load_system(&system)?;
            let combo = parse_combo(&read(&target)?)?;
            let r = approx_convex(&sys, &combo, &parse_rational(&eps)?)?;
            let trace: Vec<_> = r
                .trace
                .iter()
                .map(|s| {
                    json!({
                        "stage": s.stage,
                        "epsilon": format_rational(&s.epsilon),
                        "a": s.cert.a,
                        "b": s.cert.b,
                        "distance": format_rational(&s.distance),
                    })
                })
                .collect();
            let doc = json!({
                "z": render_sequence(&r.z),
                "period": r.z.period_len(),
                "distance": format_rational(&r.distance),
                "schedule": format!("{:?}", r.schedule),
                "trace": trace,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Command::Generic {
            system,
            target,
            horizon,
            out,
            oscillate,
            eps0,
            truncation,
            seed,
            prefix_out,
        } => {
            let targets = target
                .iter()
                .map(|p| parse_combo(&read(p)?))
                .collect::<Result<Vec<_>>>()?;
            let mut options = GenericOptions {
                truncation,
                ..GenericOptions::default()
            };
            if let Some(e) = eps0 {
                options.eps0 = parse_rational(&e)?;
            }
            let cfg = GenericConfig {
                system: load_system(&system)?,
                targets,
                horizon,
                oscillate,
                options,
                seed,
            };
            let report = run_generic(&cfg)?;
            if let Some(p) = prefix_out {
                fs::write(p, render_symbols(&report.prefix))?;
            }
            emit(out.as_deref(), &generic_csv(&report, seed)?)?;
        }
        Command::Entropy { n_max, out } => {
            emit(out.as_deref(), &entropy_csv(&run_entropy(n_max)?)?)?
        }
        Command::Obstruct {
            system,
            target,
            max_period,
            out,
        } => {
            let sys = load_system(&system)?;
            let report = run_obstruction(&sys, &parse_measure(&read(&target)?)?, max_period)?;
            emit(out.as_deref(), &obstruction_csv(&report)?)?;
        }
        Command::Density {
            system,
            trials,
            seed,
            eps,
            out,
        } => {
            let mut cfg = DensityConfig::new(load_system(&system)?, trials, seed);
            if !eps.is_empty() {
                cfg.epsilons = eps
                    .iter()
                    .map(|e| parse_rational(e))
                    .collect::<Result<_>>()?;
            }
            emit(out.as_deref(), &density_csv(&run_density(&cfg)?, seed)?)?;
        }
    }
    Ok(())
}

/// Runs the command line; returns the process exit code: 0 on success, 2
/// for usage and validation errors, 3 for guard and search-limit errors.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_guard() {
                3
            } else {
                2
            }
        }
    }
}
