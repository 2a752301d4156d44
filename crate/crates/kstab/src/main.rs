use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use kstab::exact::{format_rational, Rational};
use kstab::expr::{parse_constant, Params};
use kstab::report::{to_json, DecomposeJson, PointJson, SeriesJson, VerifyReport};
use kstab::scenario::{builtin_scenarios, load_scenario, run_expectations, Scenario, Status};
use kstab::series::series_sum;
use kstab::zariski::decompose_at;

#[derive(Parser)]
#[command(name = "kstab", version, about = "Exact stability-threshold invariants from scenario files")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Largest n of the series ledger.
    #[arg(long = "max-n", global = true, value_name = "N")]
    max_n: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check scenario expectations.
    Verify {
        paths: Vec<PathBuf>,
        /// Verify the built-in corpus.
        #[arg(long)]
        all: bool,
    },
    /// Print the chamber table of a family, or the decomposition at one point.
    Decompose {
        /// Scenario id from the corpus, or a scenario file.
        scenario: String,
        #[arg(long)]
        family: String,
        /// Point as `u=p/q,v=p/q`.
        #[arg(long)]
        at: Option<String>,
    },
    /// Exact series ledger and partial sums.
    Series,
    /// List the built-in scenarios.
    List,
}

/// Error exits use code 2, like the usage errors clap reports.
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Fail> {
    match &cli.command {
        Command::Verify { paths, all } => verify(cli, paths, *all),
        Command::Decompose { scenario, family, at } => decompose(cli, scenario, family, at.as_deref()),
        Command::Series => {
            let report = series_sum(cli.max_n.unwrap_or(500))?;
            if cli.json {
                print!("{}", to_json(&SeriesJson::new(&report)));
            } else {
                print!("{}", kstab::report::series_text(&report));
            }
            Ok(0)
        }
        Command::List => {
            for sc in builtin_scenarios()? {
                println!("{}\t{}\t{} expectations", sc.id, sc.lemma, sc.expectations.len());
            }
            Ok(0)
        }
    }
}

fn verify(cli: &Cli, paths: &[PathBuf], all: bool) -> Result<u8, Fail> {
    let mut scenarios = if all { builtin_scenarios()? } else { Vec::new() };
    for p in paths {
        scenarios.extend(load_scenario(p).map_err(|e| Fail(format!("{}: {e}", p.display())))?);
    }
    if scenarios.is_empty() {
        return Err(Fail("nothing to verify: pass scenario files or --all".into()));
    }
    let reports: Vec<_> = scenarios
        .par_iter()
        .map(|sc| {
            let t = Instant::now();
            let r = run_expectations(sc);
            (r, t.elapsed().as_millis() as u64)
        })
        .collect();
    let report = VerifyReport::new(reports);
    if cli.json {
        print!("{}", to_json(&report));
    } else {
        print!("{}", report.to_text());
    }
    Ok(match report.status() {
        Status::Match => 0,
        Status::Mismatch => 1,
        Status::Error => 2,
    })
}

fn find_scenario(arg: &str) -> Result<Scenario, Fail> {
    let path = std::path::Path::new(arg);
    let mut found = if path.is_file() {
        load_scenario(path)?
    } else {
        builtin_scenarios()?.into_iter().filter(|s| s.id == arg).collect()
    };
    match found.len() {
        0 => Err(Fail(format!("no scenario {arg:?}"))),
        1 => Ok(found.remove(0)),
        _ => {
            let ids: Vec<String> = found.iter().map(|s| s.id.clone()).collect();
            Err(Fail(format!("{arg} has several instances; pick one of {}", ids.join(", "))))
        }
    }
}

fn parse_point(s: &str) -> Result<(Rational, Rational), Fail> {
    let (mut u, mut v) = (None, None);
    for part in s.split(',') {
        let (k, val) = part.split_once('=').ok_or_else(|| Fail(format!("bad point {s:?}; expected u=p/q,v=p/q")))?;
        let r = parse_constant(val.trim(), &Params::new())?;
        match k.trim() {
            "u" => u = Some(r),
            "v" => v = Some(r),
            other => return Err(Fail(format!("unknown coordinate {other:?}"))),
        }
    }
    match (u, v) {
        (Some(u), Some(v)) => Ok((u, v)),
        _ => Err(Fail(format!("bad point {s:?}; expected u=p/q,v=p/q"))),
    }
}

fn decompose(cli: &Cli, scenario: &str, family: &str, at: Option<&str>) -> Result<u8, Fail> {
    let sc = find_scenario(scenario)?;
    let lat = sc.lattice.as_ref().ok_or_else(|| Fail(format!("{} has no curve lattice", sc.id)))?;
    let fam = sc.families.get(family).ok_or_else(|| Fail(format!("{} has no family {family:?}", sc.id)))?;
    let res = sc.family_results(family)?;
    let Some(at) = at else {
        let table = DecomposeJson::new(&sc.id, family, lat, &res);
        print!("{}", if cli.json { to_json(&table) } else { table.to_text() });
        return Ok(0);
    };
    let (u, v) = parse_point(at)?;
    let piece = res
        .iter()
        .position(|r| r.dec.domain.contains(&u, &v))
        .ok_or_else(|| Fail(format!("outside parameter domain: (u, v) = ({}, {})", format_rational(&u), format_rational(&v))))?;
    let d = fam.divisor(lat, piece).eval(&u, &v);
    let point = decompose_at(lat, &d)?;
    let out = PointJson::new(&sc.id, family, &u, &v, lat, &point);
    print!("{}", if cli.json { to_json(&out) } else { out.to_text() });
    Ok(0)
}
