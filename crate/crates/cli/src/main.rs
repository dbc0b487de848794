//! `relk2`: relative K₂ of `(𝔽_p[G], (G̃))` from the command line.
//!
//! Exit codes: 0 success, 1 a verification suite failed, 2 a hypothesis or
//! scope violation, 3 the oracle budget was exceeded, 4 any other error.

mod suites;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use relk2::dennis_stein::{build_presentation, Mode, BUDGET_ENV, DEFAULT_BUDGET_PAIRS};
use relk2::k2::{cartesian_square, decomposition_statement, excision_check, k2_relative_structure, GroupRingTensor, OracleOptions, Route};
use relk2::{Error, GroupSpec};

#[derive(Parser, Debug)]
#[command(name = "relk2", version, about = "Relative K2 of group rings modulo the norm element")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Limit on |R|·|I| for full symbol enumeration.
    #[arg(long, global = true, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET_PAIRS)]
    budget_pairs: u64,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 20240601)]
    seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RouteArg {
    Tensor,
    Oracle,
    Both,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Tensor => Route::Tensor,
            RouteArg::Oracle => Route::Oracle,
            RouteArg::Both => Route::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Full,
    Reduced,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Full => Mode::Full,
            ModeArg::Reduced => Mode::Reduced,
        }
    }
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// The prime p.
    #[arg(long)]
    p: u64,
    /// Exponents n_i of G = ∏ C_{p^{n_i}}, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    exponents: Vec<u32>,
}

impl SpecArgs {
    fn spec(&self) -> relk2::Result<GroupSpec> {
        GroupSpec::new(self.p, self.exponents.clone())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structure of K2(F_p[G], (G~)).
    K2 {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value_t = RouteArg::Both)]
        route: RouteArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
    },
    /// Run the verification suites.
    Verify {
        /// Suites to run, comma separated; all by default.
        #[arg(long, value_delimiter = ',')]
        suites: Vec<String>,
        /// Primes for the sweeps.
        #[arg(long, value_delimiter = ',', default_values_t = vec![2u64, 3, 5])]
        p_list: Vec<u64>,
        /// Make the named suite compare against a wrong expectation.
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Compare D(Z[G]/I, J/I) with D(F_2[G], (G~)) for G elementary abelian of rank r.
    Excision {
        #[arg(long)]
        rank: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
    },
    /// The square Z[G]/I, Z[G]/J, F_p[G], F_p[G]/(G~).
    Square {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// The symbol presentation D(F_p[G], (G~)).
    Oracle {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
        /// Write generators and the Hermite relation matrix as JSON to this file.
        #[arg(long)]
        export: Option<std::path::PathBuf>,
    },
}

#[derive(Serialize)]
struct OracleReport {
    p: u64,
    exponents: Vec<u32>,
    mode: Mode,
    invariant_factors: Vec<u64>,
    free_rank: usize,
    generators: usize,
    relation_rows: usize,
    ms: u64,
}

#[derive(Serialize)]
struct VerifyReport {
    passed: bool,
    suites: Vec<suites::SuiteResult>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Hypothesis(_) | Error::Unsupported(_) | Error::InvalidSpec(_) => 2,
        Error::Budget { .. } => 3,
        _ => 4,
    }
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(value).expect("serializable report")),
        Format::Text => print!("{}", text()),
    }
}

fn run(cli: &Cli) -> relk2::Result<u8> {
    let format = cli.format;
    match &cli.command {
        Command::K2 { spec, route, mode } => {
            let spec = spec.spec()?;
            let opts = OracleOptions { mode: (*mode).into(), budget_pairs: cli.budget_pairs };
            let report = k2_relative_structure(&spec, (*route).into(), opts)?;
            emit(format, &report, || format!("{}{}\n", report.to_text(), decomposition_statement(&report)));
            Ok(0)
        }
        Command::Verify { suites: names, p_list, inject_fault } => {
            let names: Vec<String> = if names.is_empty() {
                suites::SUITES.iter().map(|s| s.to_string()).collect()
            } else {
                names.clone()
            };
            let cfg = suites::VerifyConfig {
                primes: p_list.clone(),
                seed: cli.seed,
                budget_pairs: cli.budget_pairs,
                inject_fault: inject_fault.clone(),
            };
            let results: Vec<suites::SuiteResult> = {
                use rayon::prelude::*;
                names.par_iter().map(|n| suites::run(n, &cfg)).collect()
            };
            let report = VerifyReport { passed: results.iter().all(|r| r.passed), suites: results };
            emit(format, &report, || {
                let mut out = String::new();
                for r in &report.suites {
                    let status = if r.passed { "PASS" } else { "FAIL" };
                    out += &format!("{status} {:<14} {:>5} checks {:>7} ms\n", r.name, r.checks, r.ms);
                    for f in r.failures.iter().take(5) {
                        out += &format!("     {f}\n");
                    }
                }
                out += &format!("{}\n", if report.passed { "all suites passed" } else { "verification FAILED" });
                out
            });
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Excision { rank, mode } => {
            let spec = GroupSpec::new(2, vec![1; (*rank).max(1)])?;
            if *rank == 0 {
                return Err(Error::InvalidSpec("rank must be at least 1".into()));
            }
            let opts = OracleOptions { mode: (*mode).into(), budget_pairs: cli.budget_pairs };
            let report = excision_check(&spec, opts)?;
            emit(format, &report, || {
                let mut out = format!(
                    "D(Z[{spec}]/I, J/I) = {} ({} mode, ring of size {})\nD(F2[{spec}], (G~)) = {} ({} mode)\n",
                    report.integral.to_text(),
                    report.integral_mode,
                    report.integral_ring_size.map_or("?".into(), |s| s.to_string()),
                    report.modular.to_text(),
                    report.modular_mode
                );
                out += &format!("structures equal: {}\n", report.structures_equal);
                out += &format!("reduction mod 2 is an isomorphism: {}\n", report.natural_map_isomorphism);
                out += &format!("lattice relations hold: {}\n", report.relations.all());
                for w in &report.warnings {
                    out += &format!("warning: {w}\n");
                }
                out
            });
            Ok(if report.holds() { 0 } else { 1 })
        }
        Command::Square { spec } => {
            let spec = spec.spec()?;
            let report = cartesian_square(&spec)?;
            emit(format, &report, || {
                let mut out = String::new();
                for c in &report.corners {
                    let size = c.size.map_or("symbolic".into(), |s| format!("size {s}"));
                    let dim = c.dim.map_or(String::new(), |d| format!(", {d} generators"));
                    out += &format!("{:<14} {size}{dim}\n", c.name);
                }
                let show = |b: Option<bool>| b.map_or("n/a".to_string(), |b| b.to_string());
                out += &format!("commutes: {}\npullback: {}\n", show(report.commutes), show(report.pullback));
                out
            });
            Ok(0)
        }
        Command::Oracle { spec, mode, export } => {
            let spec = spec.spec()?;
            let start = Instant::now();
            let model = GroupRingTensor::new(&spec)?;
            let pres = build_presentation(&model.ctx, (*mode).into(), cli.budget_pairs)?;
            if let Some(path) = export {
                let text = serde_json::to_string_pretty(&pres.to_json()).expect("serializable");
                std::fs::write(path, text).map_err(|e| Error::InvalidSpec(format!("cannot write {}: {e}", path.display())))?;
            }
            let s = pres.structure();
            let report = OracleReport {
                p: spec.p(),
                exponents: spec.exponents().to_vec(),
                mode: pres.mode(),
                invariant_factors: s.invariant_factors().to_vec(),
                free_rank: s.free_rank(),
                generators: pres.generator_count(),
                relation_rows: pres.rows().len(),
                ms: start.elapsed().as_millis() as u64,
            };
            emit(format, &report, || {
                format!(
                    "D(F{}[{spec}], (G~)) = {}\nmode: {}\ngenerators: {}, relation rows: {}\n",
                    spec.p(),
                    s.to_text(),
                    report.mode,
                    report.generators,
                    report.relation_rows
                )
            });
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build();
    let outcome = match pool {
        Ok(pool) => pool.install(|| run(&cli)),
        Err(e) => Err(Error::InvalidSpec(format!("cannot start {} workers: {e}", cli.jobs))),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
