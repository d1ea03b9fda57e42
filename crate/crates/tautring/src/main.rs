//! Command-line surface: run verifications, evaluate expressions in the
//! generator mini-language, enumerate strata, and print the test-family
//! report, all as machine-readable JSON (or `--pretty` text).

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;
use tautring::equality::num_equal;
use tautring::error::Error;
use tautring::expr::parse;
use tautring::formulas::{run_check, CHECK_NAMES};
use tautring::integrate::{integrate, pair};
use tautring::par::{set_jobs, Mode};
use tautring::rat::{format_rat, int};
use tautring::report::VerificationReport;
use tautring::space::MarkedSpace;
use tautring::stratum::decorated_strata;
use tautring::{enumerate, graph, testfamily, witten};

#[derive(Parser)]
#[command(
    name = "tautring",
    version,
    about = "Exact tautological-ring calculator and verification suite for \
             marked-Weierstrass-point loci at genus 2"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Cache file for psi-intersection numbers (loaded at start, saved at
    /// exit).
    #[arg(long, global = true, env = "TAUTRING_CACHE")]
    cache: Option<PathBuf>,
    /// Worker threads for the pairing loops; 1 forces sequential.
    #[arg(long, global = true, env = "TAUTRING_JOBS")]
    jobs: Option<usize>,
    /// Human-oriented output instead of JSON.
    #[arg(long, global = true, env = "TAUTRING_PRETTY", default_value_t = false)]
    pretty: bool,
    /// Machine-readable JSON output (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification checks by name, or all of them.
    Verify {
        /// Check names (see `verify --list`), or "all".
        names: Vec<String>,
        /// List available check names and exit.
        #[arg(long)]
        list: bool,
    },
    /// Evaluate an expression: expand it, integrate it, or pair it with a
    /// second expression.
    Eval {
        /// Ambient space as "g,n".
        #[arg(long, env = "TAUTRING_SPACE", value_parser = parse_space)]
        space: MarkedSpace,
        /// Emit the expanded class as JSON (the default action).
        #[arg(long)]
        expand: bool,
        /// Integrate the class over the space.
        #[arg(long, conflicts_with = "expand")]
        integrate: bool,
        /// Pair against this second expression.
        #[arg(long, conflicts_with_all = ["expand", "integrate"])]
        pair: Option<String>,
        /// Check numerical equivalence against this second expression.
        #[arg(long, conflicts_with_all = ["expand", "integrate", "pair"])]
        equal: Option<String>,
        expr: String,
    },
    /// Enumerate (decorated) strata of a space by codimension.
    Strata {
        #[arg(long, env = "TAUTRING_SPACE", value_parser = parse_space)]
        space: MarkedSpace,
        #[arg(long)]
        codim: u32,
        /// Include psi/kappa decorations up to the codimension.
        #[arg(long)]
        decorated: bool,
    },
    /// Print the blown-up-plane test-family report: restriction table,
    /// intersection numbers, and solved multiplicities.
    Testfamily,
}

fn parse_space(s: &str) -> Result<MarkedSpace, String> {
    let (g, n) = s
        .split_once(',')
        .ok_or_else(|| "expected \"g,n\"".to_string())?;
    let g = g.trim().parse().map_err(|_| "bad genus".to_string())?;
    let n = n.trim().parse().map_err(|_| "bad marking count".to_string())?;
    MarkedSpace::new(g, n).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.common.jobs {
        set_jobs(jobs.max(1));
    }
    let mode = match cli.common.jobs {
        Some(1) => Mode::Sequential,
        _ => Mode::default(),
    };
    if let Some(cache) = &cli.common.cache {
        if cache.exists() {
            if let Err(e) = witten::load_cache(cache) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    let pretty = cli.common.pretty;
    let code = match run(cli.cmd, mode, pretty) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Inconsistent(_) => 1,
                _ => 2,
            })
        }
    };
    if let Some(cache) = &cli.common.cache {
        if let Err(e) = witten::save_cache(cache) {
            eprintln!("warning: could not save cache: {e}");
        }
    }
    code
}

fn emit<T: Serialize>(value: &T, pretty: bool) {
    let out = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("report serializes");
    println!("{out}");
}

fn run(cmd: Cmd, mode: Mode, pretty: bool) -> Result<ExitCode, Error> {
    match cmd {
        Cmd::Verify { names, list } => {
            if list {
                for name in CHECK_NAMES.iter().chain(["testfamily"].iter()) {
                    println!("{name}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let names = resolve_names(names)?;
            let mut all_pass = true;
            for name in names {
                let report = if name == "testfamily" {
                    check_testfamily()
                } else {
                    run_check(&name, mode)?
                };
                all_pass &= report.pass;
                if pretty {
                    println!(
                        "{} {:>5}ms  {}{}",
                        if report.pass { "PASS" } else { "FAIL" },
                        report.millis,
                        report.name,
                        report
                            .spanning_size
                            .map(|s| format!("  (spanning {s})"))
                            .unwrap_or_default()
                    );
                    for w in &report.witnesses {
                        println!("     witness: {w}");
                    }
                } else {
                    emit(&report, false);
                }
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Eval {
            space,
            integrate: do_integrate,
            pair: pair_with,
            equal,
            expr,
            ..
        } => {
            let cls = parse(&expr)?.expand(space)?;
            if do_integrate {
                emit(&format_rat(&integrate(&cls)), pretty);
            } else if let Some(second) = pair_with {
                let other = parse(&second)?.expand(space)?;
                emit(&format_rat(&pair(&cls, &other)?), pretty);
            } else if let Some(second) = equal {
                let other = parse(&second)?.expand(space)?;
                let (eq, report) = num_equal(&cls, &other, mode)?;
                #[derive(Serialize)]
                struct EqOut {
                    equal: bool,
                    report: tautring::equality::PairingReport,
                }
                emit(&EqOut { equal: eq, report }, pretty);
                if !eq {
                    return Ok(ExitCode::from(1));
                }
            } else {
                emit(&cls.to_json(), pretty);
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Strata {
            space,
            codim,
            decorated,
        } => {
            #[derive(Serialize)]
            struct Item {
                graph: graph::GraphJson,
                canonical: String,
                aut_order: u64,
                degree: u32,
                #[serde(skip_serializing_if = "Option::is_none")]
                decorations: Option<tautring::stratum::StratumJson>,
            }
            let mut items = Vec::new();
            if decorated {
                for s in decorated_strata(space, codim)? {
                    items.push(Item {
                        graph: graph::GraphJson::from(s.graph()),
                        canonical: hex(s.encoding()),
                        aut_order: s.decorated_aut_order(),
                        degree: s.degree(),
                        decorations: Some(s.to_json(&int(1))),
                    });
                }
            } else {
                for reg in enumerate::graphs_with_edges(space, codim)?.iter() {
                    items.push(Item {
                        graph: graph::GraphJson::from(&reg.graph),
                        canonical: hex(&reg.enc),
                        aut_order: reg.aut,
                        degree: reg.graph.num_edges() as u32,
                        decorations: None,
                    });
                }
            }
            emit(&items, pretty);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Testfamily => {
            let report = testfamily::family_report()?;
            emit(&report, pretty);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn resolve_names(names: Vec<String>) -> Result<Vec<String>, Error> {
    if names.is_empty() || names.iter().any(|n| n == "all") {
        let mut all: Vec<String> = CHECK_NAMES.iter().map(|s| s.to_string()).collect();
        all.push("testfamily".to_string());
        return Ok(all);
    }
    for name in &names {
        if name != "testfamily" && !CHECK_NAMES.contains(&name.as_str()) {
            return Err(Error::UnknownCheck(name.clone()));
        }
    }
    Ok(names)
}

/// The test-family computation as a verification check: the recomputed
/// intersection numbers and solved multiplicities must equal the printed
/// ones.
fn check_testfamily() -> VerificationReport {
    let start = std::time::Instant::now();
    let mut report = VerificationReport::new("testfamily");
    match (
        testfamily::product_hyp21_hyp22(),
        testfamily::product_hyp22_d023(),
        testfamily::solve_multiplicities(),
    ) {
        (Ok(p1), Ok(p2), Ok(m)) => {
            if p1 != int(27) {
                report.fail(format!("triple product is {}, expected 27", p1));
            }
            if p2 != int(-9) {
                report.fail(format!("collision product is {}, expected -9", p2));
            }
            let one = int(1);
            if m != (one.clone(), one.clone(), one.clone(), one) {
                report.fail(format!("multiplicities {m:?}, expected all 1"));
            }
        }
        (a, b, c) => {
            for msg in [
                a.err().map(|e| e.to_string()),
                b.err().map(|e| e.to_string()),
                c.err().map(|e| e.to_string()),
            ]
            .into_iter()
            .flatten()
            {
                report.fail(msg);
            }
        }
    }
    report.millis = start.elapsed().as_millis();
    report
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
