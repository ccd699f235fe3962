use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use tilehom::scheme::{catalog, find, parse_scheme, Expected, ProjectionScheme};
use tilehom::Error;
use tilehom_cli::{build_report, check_report, list_entries, list_text, render_text, RunOptions, Verdict};

#[derive(Parser)]
#[command(name = "tilehom", version, about = "Homology and K-theory of canonical projection tilings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in schemes.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Compute homology for a catalog name or a TOML scheme file.
    Compute {
        target: String,
        /// Compare with the expected values attached to the scheme.
        #[arg(long)]
        check: bool,
        /// Extra primes for the mod-p ranks, comma separated.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        /// Single-ring diagnostic run: Z, Q, F<p> or Z/<p^k>.
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        max_orbits: Option<usize>,
        /// Ignore the point group when enumerating orbits.
        #[arg(long)]
        no_symmetry: bool,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        /// Print the singular complex and stop.
        #[arg(long)]
        dump_complex: bool,
    },
}

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;

fn resolve(target: &str) -> Result<(ProjectionScheme, Option<Expected>)> {
    if let Some(e) = find(target) {
        return Ok((e.scheme, e.expected));
    }
    let path = Path::new(target);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {target}"))?;
        let (scheme, expected) = parse_scheme(&text).with_context(|| format!("parsing {target}"))?;
        return Ok((scheme, expected));
    }
    anyhow::bail!("unknown scheme '{target}': not a catalog name or a file")
}

fn exit_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::OrbitCap { .. }) => EXIT_CAP,
        Some(Error::Consistency(_)) | Some(Error::NegativeTorsionRank { .. }) => EXIT_FAIL,
        _ => EXIT_INPUT,
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::List { json } => {
            let entries = catalog();
            if json {
                println!("{}", serde_json::to_string_pretty(&list_entries(&entries))?);
            } else {
                print!("{}", list_text(&entries));
            }
            Ok(0)
        }
        Command::Compute {
            target,
            check,
            primes,
            ring,
            max_orbits,
            no_symmetry,
            json,
            dump_complex,
        } => {
            let (scheme, expected) = resolve(&target)?;
            if dump_complex {
                let opts = tilehom::singular::GenerateOptions {
                    orbit_cap: max_orbits.unwrap_or(tilehom::singular::DEFAULT_ORBIT_CAP),
                    use_symmetry: !no_symmetry,
                };
                print!("{}", tilehom::singular::generate(&scheme, opts)?.dump());
                return Ok(0);
            }
            let opts = RunOptions {
                primes,
                ring,
                max_orbits,
                no_symmetry,
            };
            let mut report = build_report(&scheme, &opts)?;
            if check {
                match &expected {
                    Some(e) if !e.is_empty() => report.check = Some(check_report(&report, e)),
                    _ => eprintln!("note: '{}' has no expected values to check", scheme.name),
                }
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", render_text(&report));
            }
            Ok(match report.check.map(|c| c.verdict) {
                Some(Verdict::Fail) => EXIT_FAIL,
                _ => 0,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_for(&err))
        }
    }
}
