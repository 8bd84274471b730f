//! `kcausal`: sample spacetime models, compute K⁺, and run property checks.
//!
//! Exit codes: 0 every check holds, 1 a property fails, 2 usage error,
//! 3 I/O or unreadable input.

mod checks;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use kcausal::dataset::{Dataset, K_PLUS};
use kcausal::export::{hasse, to_dot};
use kcausal::topology::topologies_equivalent;
use kcausal::{CausalStructure, CheckReport, Error, SamplingScheme, SpacetimeModel};
use serde_json::json;

use checks::{CheckName, Context, Family};

#[derive(Parser)]
#[command(name = "kcausal", version, about = "K-causal order experiments on sampled spacetimes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample events from a model and write a dataset.
    Sample {
        /// Model name with options, e.g. `minkowski`, `minus-points:points=2/0`, `cylinder:period=1`.
        #[arg(long)]
        model: String,
        /// Grid size `MtxMx`.
        #[arg(long, conflicts_with = "n")]
        grid: Option<String>,
        /// Number of random events.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Grid jitter amplitude (needs --seed).
        #[arg(long, default_value_t = 0.0, requires = "grid")]
        jitter: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the ball topology, chronology and K⁺ for a dataset.
    Relations {
        #[arg(long = "in")]
        input: PathBuf,
        /// Ball radius; defaults to twice the largest nearest-neighbour distance.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run named checks against a dataset with relations.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated check names.
        #[arg(long = "check", value_delimiter = ',', required = true)]
        checks: Vec<String>,
        /// Boundary margin; defaults to twice the radius.
        #[arg(long)]
        margin: Option<f64>,
        /// Seed for sampled triple checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the topologies generated by two families on margin-interior events.
    Compare {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        margin: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export a relation or the Hasse diagram of the order as DOT.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        /// `relation:NAME` or `hasse`.
        #[arg(long)]
        what: String,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MalformedDataset(_) => Failure::Io(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read_dataset(path: &Path) -> Result<Dataset, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Dataset::from_json(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn structure(d: &Dataset) -> Result<CausalStructure, Failure> {
    d.causal_structure()
        .map_err(|e| Failure::Usage(format!("{e}; run `kcausal relations` first")))
}

fn parse_grid(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("grid must look like 10x10, got {s:?}"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::Sample {
            model,
            grid,
            n,
            seed,
            jitter,
            out,
        } => {
            let model: SpacetimeModel = model.parse()?;
            let scheme = match (grid, n) {
                (Some(g), None) => {
                    let (m_t, m_x) = parse_grid(&g)?;
                    SamplingScheme::Grid { m_t, m_x, jitter, seed }
                }
                (None, Some(n)) => SamplingScheme::Random { n, seed },
                _ => return Err(Failure::Usage("give exactly one of --grid or --n".into())),
            };
            let events = model.sample(&scheme)?;
            write_file(&out, &Dataset::new(events).to_json())?;
            Ok(true)
        }
        Command::Relations { input, radius, out } => {
            let d = read_dataset(&input)?;
            let cs = CausalStructure::build(d.events, radius)?;
            let mut next = Dataset::from_structure(&cs);
            next.reports = d.reports;
            write_file(&out, &next.to_json())?;
            eprintln!(
                "n = {}, radius = {}, K+ pairs = {}, iterations = {}",
                cs.n(),
                cs.radius(),
                cs.k.count(),
                cs.iterations
            );
            Ok(true)
        }
        Command::Check {
            input,
            checks,
            margin,
            seed,
            format,
            out,
        } => {
            let names = checks
                .iter()
                .map(|c| c.parse::<CheckName>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(Failure::Usage)?;
            let d = read_dataset(&input)?;
            let cs = structure(&d)?;
            let ctx = Context::new(&cs, margin, seed);
            let mut reports = Vec::new();
            let mut timings = Vec::new();
            for name in names {
                let start = Instant::now();
                let batch = checks::run_check(name, &ctx)?;
                let ms = start.elapsed().as_secs_f64() * 1e3;
                for r in batch {
                    timings.push((r.name.clone(), ms));
                    reports.push(r);
                }
            }
            emit(&reports, &timings, format, out.as_deref())
        }
        Command::Compare {
            input,
            left,
            right,
            margin,
            format,
            out,
        } => {
            let left: Family = left.parse().map_err(Failure::Usage)?;
            let right: Family = right.parse().map_err(Failure::Usage)?;
            let d = read_dataset(&input)?;
            let cs = structure(&d)?;
            let ctx = Context::new(&cs, margin, 0);
            let start = Instant::now();
            let report = match (checks::family(&cs, left), checks::family(&cs, right)) {
                (Ok(l), Ok(r)) => topologies_equivalent(cs.n(), &l, &r, &ctx.scope)?,
                (Err(Error::NotKCausal(p, q)), _) | (_, Err(Error::NotKCausal(p, q))) => {
                    CheckReport::new("topologies_equivalent", false)
                        .with_witness(Some(kcausal::Witness::Pair { p, q }))
                        .note("K+ is not antisymmetric; interior-based families are undefined")
                }
                (Err(e), _) | (_, Err(e)) => return Err(e.into()),
            };
            let mut report = report.with_margin(Some(ctx.margin));
            report.name = format!("compare-{}-{}", family_name(left), family_name(right));
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let timings = vec![(report.name.clone(), ms)];
            emit(&[report], &timings, format, out.as_deref())
        }
        Command::Export {
            input,
            what,
            format: GraphFormat::Dot,
            out,
        } => {
            let d = read_dataset(&input)?;
            let (rel, name) = if what == "hasse" {
                (hasse(d.relation(K_PLUS)?)?, "hasse".to_string())
            } else if let Some(name) = what.strip_prefix("relation:") {
                (d.relation(name)?.clone(), name.to_string())
            } else {
                return Err(Failure::Usage(format!(
                    "--what must be relation:NAME or hasse, got {what:?}"
                )));
            };
            let labels: Vec<String> = d
                .events
                .events
                .iter()
                .enumerate()
                .map(|(i, e)| format!("{i} (t={}, x={})", e.t, e.x))
                .collect();
            write_file(&out, &to_dot(&rel, &name, Some(&labels)))?;
            Ok(true)
        }
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Balls => "balls",
        Family::Alexandrov => "alexandrov",
        Family::KAlexandrov => "k-alexandrov",
        Family::Interval => "interval",
    }
}

/// Writes reports to stdout (and `out`). Timings live in a single top-level
/// key so that the rest of the output is reproducible byte for byte.
fn emit(reports: &[CheckReport], timings: &[(String, f64)], format: Format, out: Option<&Path>) -> Result<bool, Failure> {
    let text = match format {
        Format::Json => {
            let timing: BTreeMap<&str, f64> = timings.iter().map(|(n, ms)| (n.as_str(), *ms)).collect();
            let doc = json!({ "reports": reports, "timing_ms": timing });
            let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["name", "holds", "margin", "witness", "details", "timing_ms"])
                .expect("in-memory write");
            for (r, (_, ms)) in reports.iter().zip(timings) {
                let witness = r.witness.as_ref().map(|w| serde_json::to_string(w).unwrap()).unwrap_or_default();
                let margin = r.margin.map(|m| m.to_string()).unwrap_or_default();
                w.write_record([
                    r.name.clone(),
                    r.holds.to_string(),
                    margin,
                    witness,
                    serde_json::to_string(&r.details).unwrap(),
                    ms.to_string(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
        }
    };
    print!("{text}");
    if let Some(path) = out {
        write_file(path, &text)?;
    }
    Ok(reports.iter().all(|r| r.holds))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_syntax() {
        assert_eq!(parse_grid("10x12").ok(), Some((10, 12)));
        assert_eq!(parse_grid("3X4").ok(), Some((3, 4)));
        for bad in ["10", "x4", "ax4", "4x-1", ""] {
            assert!(matches!(parse_grid(bad), Err(Failure::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn malformed_datasets_are_io_failures() {
        assert!(matches!(Failure::from(Error::MalformedDataset("x".into())), Failure::Io(_)));
        assert!(matches!(Failure::from(Error::EmptySubset), Failure::Usage(_)));
    }
}
