//! `ringlift`: property checks, lifting runs, tower campaigns, multiplier
//! rings and lazy-ring probes, reported as `key: value` blocks or JSON.

mod check;
mod input;
mod lazy;
mod lift;
mod mult;
mod report;
mod tower;

use clap::{Parser, Subcommand, ValueEnum};
use input::{Instance, Source};
use report::{Record, Report, Status};
use ringlift::budget;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "ringlift", version, about = "Witness-producing lifting checks for finite rings, towers and multiplier rings")]
struct Cli {
    /// Largest single search, in primitive operations.
    #[arg(long, global = true, env = "RINGLIFT_BUDGET")]
    budget: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report only this many randomly chosen strings or instances.
    #[arg(long, global = true)]
    sample: Option<usize>,
    /// Precision for lazy-ring commands.
    #[arg(long, global = true)]
    precision: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Spec file with ring, ideal, morphism, tower and lazy declarations.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Re-run the command recorded in a report and compare every record.
    #[arg(long)]
    replay: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide ring properties: regular, exchange, exchange-unital,
    /// nondegenerate, semiprime, unital, bsr, bsr=D, qb, qb-left, qb-right.
    Check {
        target: String,
        /// Comma-separated list.
        property: String,
    },
    /// Lift a certificate along a surjection.
    Lift {
        #[command(subcommand)]
        lemma: lift::LiftCmd,
    },
    /// Run a stagewise harness over a tower.
    Tower(tower::TowerArgs),
    /// Multiplier rings, proper extensions and Hochschild squares.
    Mult {
        #[command(subcommand)]
        sub: mult::MultCmd,
    },
    /// Probes on countable rings of finite-support functions and matrices.
    Lazy {
        #[command(subcommand)]
        sub: lazy::LazyCmd,
    },
    /// A short tour through every verb.
    Demo,
}

/// Why a command could not produce records.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Core(ringlift::Error),
}

impl From<ringlift::Error> for Failure {
    fn from(e: ringlift::Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn status(&self) -> Status {
        match self {
            Failure::Core(e) if e.is_budget() => Status::Budget,
            _ => Status::Error,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

/// Settings shared by every verb.
pub struct Ctx {
    pub seed: u64,
    pub sample: Option<usize>,
    pub precision: Option<usize>,
    pub src: Source,
}

impl Ctx {
    /// Indices to report out of `len`, in ascending order.
    pub fn sampled(&self, len: usize) -> Vec<usize> {
        use rand::SeedableRng;
        match self.sample {
            Some(k) if k < len => {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
                let mut picked = rand::seq::index::sample(&mut rng, len, k).into_vec();
                picked.sort_unstable();
                picked
            }
            _ => (0..len).collect(),
        }
    }
}

/// Run `f` and store the operations it charged in the record.
pub fn metered(f: impl FnOnce() -> Result<Record, Failure>) -> Result<Record, Failure> {
    let (out, used) = budget::metered(f);
    out.map(|mut r| {
        r.budget = u64::try_from(used).unwrap_or(u64::MAX);
        r
    })
}

fn execute(cli: &Cli, command: &Command) -> Result<Vec<Record>, Failure> {
    let ctx = Ctx { seed: cli.seed, sample: cli.sample, precision: cli.precision, src: Source::load(cli.spec.as_deref())? };
    match command {
        Command::Check { target, property } => check::run(&ctx, target, property),
        Command::Lift { lemma } => lift::run(&ctx, lemma),
        Command::Tower(args) => tower::run(&ctx, args),
        Command::Mult { sub } => mult::run(&ctx, sub),
        Command::Lazy { sub } => lazy::run(&ctx, sub),
        Command::Demo => demo(&ctx),
    }
}

fn demo(ctx: &Ctx) -> Result<Vec<Record>, Failure> {
    let id = |a: &str, b: &str| Instance { source: Some(a.into()), target: Some(b.into()), ..Instance::default() };
    let mut out = check::run(ctx, "Z/4", "exchange,bsr=1,qb")?;
    out.extend(lift::run(ctx, &lift::LiftCmd::Regular { instance: id("Z/6", "Z/3"), x: Some(5), ybar: None })?);
    out.extend(lift::run(ctx, &lift::LiftCmd::Exchange { instance: id("Z/8", "Z/4"), x: Some(3), ybar: None, zbar: None })?);
    out.extend(tower::run(ctx, &tower::TowerArgs { chain: vec!["Z/2".into(), "Z/4".into()], harness: "exchange".into(), ..tower::TowerArgs::default() })?);
    out.extend(mult::run(ctx, &mult::MultCmd::Compute { target: "Z/4".into() })?);
    out.extend(mult::run(ctx, &mult::MultCmd::Hochschild { target: "Z/6".into(), ideal: None, generators: None })?);
    out.extend(lazy::run(ctx, &lazy::LazyCmd::Tietze { base: "Z/2".into(), xbar: vec!["unit".into()] })?);
    out.extend(lazy::run(ctx, &lazy::LazyCmd::Sigma { base: "Z/2".into(), lazy: None })?);
    Ok(out)
}

fn run(cli: &Cli, args: Vec<String>) -> Report {
    if let Some(b) = cli.budget {
        budget::set_limit(b);
    }
    if let Some(path) = &cli.replay {
        return replay(path, args);
    }
    let Some(command) = &cli.command else {
        return Report::failed(args, Vec::new(), Status::Error, "no command given; see --help".into());
    };
    match execute(cli, command) {
        Ok(records) => Report::finished(args, records),
        Err(f) => Report::failed(args, Vec::new(), f.status(), f.message()),
    }
}

fn replay(path: &std::path::Path, args: Vec<String>) -> Report {
    let original = match std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display())).and_then(|t| Report::parse(&t)) {
        Ok(r) => r,
        Err(e) => return Report::failed(args, Vec::new(), Status::Error, e),
    };
    let argv = std::iter::once("ringlift".to_string()).chain(original.command.iter().cloned());
    let again = match Cli::try_parse_from(argv) {
        Ok(cli) if cli.replay.is_none() => run(&cli, original.command.clone()),
        Ok(_) => return Report::failed(args, Vec::new(), Status::Error, "a replay report cannot itself be replayed".into()),
        Err(e) => return Report::failed(args, Vec::new(), Status::Error, format!("recorded command does not parse: {e}")),
    };
    Report::finished(args, compare(&original, &again))
}

/// One record per original record, failing where the re-run differs.
fn compare(original: &Report, again: &Report) -> Vec<Record> {
    let mut out = Vec::new();
    let status = Record::new("status").input("recorded", original.status).witness("replayed", again.status);
    out.push(if original.status == again.status && original.error == again.error {
        status
    } else {
        status.fail(format!("recorded {} ({:?}), replayed {} ({:?})", original.status, original.error, again.status, again.error))
    });
    for (i, rec) in original.records.iter().enumerate() {
        let r = Record::new(format!("replay {}", rec.name)).input("index", i).witness("verdict", rec.verdict);
        let r = match again.records.get(i) {
            None => r.fail("record missing from the re-run"),
            Some(new) if new.name != rec.name => r.fail(format!("re-run has `{}` here", new.name)),
            Some(new) if new.verdict != rec.verdict => r.fail(format!("verdict {} became {}", rec.verdict, new.verdict)),
            Some(new) if new.inputs != rec.inputs => r.fail("inputs differ"),
            Some(new) if new.witness != rec.witness => {
                let key = rec.witness.iter().find(|(k, v)| new.witness.get(*k) != Some(v)).map(|(k, _)| k.clone());
                r.fail(format!("witness differs at `{}`", key.unwrap_or_else(|| "extra key".into())))
            }
            Some(new) if new.counterexample != rec.counterexample => r.fail("counterexample differs"),
            Some(new) if new.identity != rec.identity => r.fail("identity differs"),
            Some(_) => r,
        };
        out.push(r);
    }
    if again.records.len() > original.records.len() {
        out.push(Record::new("record count").fail(format!("re-run produced {} records, report has {}", again.records.len(), original.records.len())));
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let report = run(&cli, args);
    let text = match cli.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    };
    // A closed pipe downstream is not an error of ours.
    let _ = std::io::stdout().write_all(text.as_bytes());
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    ExitCode::from(report.status.exit_code() as u8)
}
