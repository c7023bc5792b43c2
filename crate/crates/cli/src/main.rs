use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hgpoly_core::graphfile::{parse_graph_file, write_graph_file};
use hgpoly_core::invariants::{bollobas_riordan, penrose, penrose_eval, tutte, DEFAULT_MAX_EDGES};
use hgpoly_core::lens::{self, LensParams, DEFAULT_MAX_P};
use hgpoly_core::verify::{run_suite, verify_poincare, Level};
use hgpoly_core::{Limits, RibbonGraph};

/// Polynomial invariants of Heegaard graphs.
#[derive(Parser)]
#[command(name = "hgpoly", version)]
struct Cli {
    /// Worker threads for state sums and scans (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest edge count accepted by the 2^e state sums.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_EDGES)]
    max_edges: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Polynomial invariants of a graph file.
    Poly {
        #[arg(value_enum)]
        kind: PolyKind,
        file: PathBuf,
        /// Evaluate the Penrose polynomial at λ = K instead of printing it.
        #[arg(long, value_name = "K")]
        at: Option<u64>,
    },
    /// Lens spaces L(p, q).
    Lens {
        #[command(subcommand)]
        command: LensCommand,
    },
    /// Built-in checks.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyKind {
    Br,
    Tutte,
    Penrose,
}

#[derive(Args)]
struct PQ {
    #[arg(long, allow_negative_numbers = true)]
    p: i64,
    #[arg(long, allow_negative_numbers = true)]
    q: i64,
}

#[derive(Subcommand)]
enum LensCommand {
    /// Write the torus Heegaard graph as a graph file.
    Graph {
        #[command(flatten)]
        pq: PQ,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Exact number of spanning trees of C_p(±1, ±q).
    Tau {
        #[command(flatten)]
        pq: PQ,
    },
    /// τ for every orbit with p ≤ PMAX, as CSV.
    Scan {
        #[arg(long)]
        pmax: u64,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Only scan prime p.
        #[arg(long)]
        primes_only: bool,
    },
    /// The orbit {±q^{±1}} mod p.
    Orbit {
        #[command(flatten)]
        pq: PQ,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Penrose polynomials of both shipped Poincaré-sphere diagrams.
    Poincare,
    /// Run the invariant batteries.
    Suite {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

enum Failure {
    /// A check or computation failed.
    Check(anyhow::Error),
    /// Bad input from the command line.
    Usage(anyhow::Error),
}

type Outcome = Result<(), Failure>;

fn check<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Check(e.into())
}

fn usage<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Usage(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
        {
            eprintln!("hgpoly: {e}");
            return ExitCode::from(2);
        }
    }
    let limits = Limits::with_max_edges(cli.max_edges);
    let mut out = std::io::stdout().lock();
    let result = match cli.command {
        Command::Poly { kind, file, at } => poly(&mut out, kind, &file, at, &limits),
        Command::Lens { command } => lens_command(&mut out, command),
        Command::Verify { command } => verify(&mut out, command, &limits),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(e)) => {
            eprintln!("hgpoly: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("hgpoly: {e:#}");
            eprintln!("Run `hgpoly --help` for usage.");
            ExitCode::from(2)
        }
    }
}

fn read_graph(path: &Path) -> Result<RibbonGraph, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(usage)?;
    parse_graph_file(&text)
        .with_context(|| format!("{}", path.display()))
        .map_err(usage)
}

fn params(pq: &PQ) -> Result<LensParams, Failure> {
    LensParams::new(pq.p, pq.q).map_err(usage)
}

fn emit(out: &mut impl Write, text: impl std::fmt::Display) -> Outcome {
    writeln!(out, "{text}").map_err(check)
}

fn poly(
    out: &mut impl Write,
    kind: PolyKind,
    file: &Path,
    at: Option<u64>,
    limits: &Limits,
) -> Outcome {
    let g = read_graph(file)?;
    match (kind, at) {
        (PolyKind::Penrose, Some(k)) => emit(out, penrose_eval(&g, k, limits).map_err(check)?),
        (_, Some(_)) => Err(usage(anyhow!("--at is only supported for `poly penrose`"))),
        (PolyKind::Br, None) => emit(out, bollobas_riordan(&g, limits).map_err(check)?),
        (PolyKind::Tutte, None) => emit(out, tutte(&g, limits).map_err(check)?),
        (PolyKind::Penrose, None) => emit(out, penrose(&g, limits).map_err(check)?),
    }
}

fn lens_command(out: &mut impl Write, command: LensCommand) -> Outcome {
    match command {
        LensCommand::Graph { pq, output } => {
            let text = write_graph_file(&lens::lens_heegaard_graph(&params(&pq)?));
            match output {
                Some(path) => fs::write(&path, text)
                    .with_context(|| format!("cannot write {}", path.display()))
                    .map_err(usage),
                None => out.write_all(text.as_bytes()).map_err(check),
            }
        }
        LensCommand::Tau { pq } => {
            let p = params(&pq)?;
            let t = lens::tau(&p, DEFAULT_MAX_P).map_err(|e| match e {
                hgpoly_core::Error::BoundExceeded { .. } => usage(e),
                other => check(other),
            })?;
            emit(out, t)
        }
        LensCommand::Orbit { pq } => emit(out, lens::q_orbit(&params(&pq)?)),
        LensCommand::Scan {
            pmax,
            csv,
            primes_only,
        } => {
            if !(3..=DEFAULT_MAX_P).contains(&pmax) {
                return Err(usage(anyhow!("--pmax must lie in 3..={DEFAULT_MAX_P}")));
            }
            let scan = lens::scan_tau_orbits_filtered(pmax, DEFAULT_MAX_P, |p| {
                !primes_only || lens::is_prime(p)
            })
            .map_err(check)?;
            let summary = format!(
                "{} orbits for 3 <= p <= {pmax}; {} collisions ({} at prime p)",
                scan.rows.len(),
                scan.collisions.len(),
                scan.collisions_for_primes().len()
            );
            match csv {
                Some(path) => {
                    fs::write(&path, scan.to_csv())
                        .with_context(|| format!("cannot write {}", path.display()))
                        .map_err(usage)?;
                    emit(out, &summary)?;
                    for c in &scan.collisions {
                        emit(
                            out,
                            format!(
                                "collision: p={} orbits {} and {} share tau={}",
                                c.p, c.first, c.second, c.tau
                            ),
                        )?;
                    }
                    Ok(())
                }
                None => {
                    out.write_all(scan.to_csv().as_bytes()).map_err(check)?;
                    eprintln!("{summary}");
                    Ok(())
                }
            }
        }
    }
}

fn verify(out: &mut impl Write, command: VerifyCommand, limits: &Limits) -> Outcome {
    match command {
        VerifyCommand::Poincare => {
            let report = verify_poincare(limits).map_err(check)?;
            for (name, poly) in &report.polynomials {
                emit(out, format!("{name}: {poly}"))?;
            }
            emit(out, format!("reference: {}", report.reference))?;
            emit(out, "OK: both diagrams match the reference")
        }
        VerifyCommand::Suite { level } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let mut write_err = None;
            let outcomes = run_suite(level, limits, |o| {
                if let Err(e) = writeln!(out, "{o}").and_then(|_| out.flush()) {
                    write_err.get_or_insert(e);
                }
            });
            if let Some(e) = write_err {
                return Err(check(e));
            }
            let failed = outcomes.iter().filter(|o| !o.passed()).count();
            if failed > 0 {
                return Err(check(anyhow!(
                    "{failed} of {} checks failed",
                    outcomes.len()
                )));
            }
            emit(
                out,
                format!("all {} checks passed ({level} level)", outcomes.len()),
            )
        }
    }
}
