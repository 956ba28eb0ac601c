//! Command-line front end for the `permknap` solvers.
//!
//! Exit codes: 0 success, 1 a verification failure or internal error, 2 an
//! unreadable or invalid instance (or bad flags), 3 a solver size guard.

pub mod bench;
pub mod format;
pub mod gen;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use permknap::{solve_bounded, Algorithm, SolveError, SolverConfig};

use crate::gen::{Distribution, GenParams};
use crate::verify::Verdict;

/// Environment variable supplying the default master seed.
pub const SEED_ENV: &str = "PERMKNAP_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "permknap",
    version,
    about = "Exact 0-1 and bounded knapsack solvers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random instance.
    Gen(GenArgs),
    /// Solve an instance file.
    Solve(SolveArgs),
    /// Compare solvers against the exact DP.
    Verify(VerifyArgs),
    /// Time solvers and print CSV records.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GeneratorFlags {
    /// Item types.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub w_max: i64,
    #[arg(long, default_value_t = 100)]
    pub p_max: i64,
    #[arg(long, default_value_t = 1)]
    pub m_max: u64,
    #[arg(long = "dist", default_value = "uniform")]
    pub distribution: Distribution,
    /// Defaults to half the total weight.
    #[arg(long)]
    pub capacity: Option<i64>,
    /// Distinct weights for clustered-weights.
    #[arg(long, default_value_t = 4)]
    pub clusters: usize,
}

impl GeneratorFlags {
    fn params(&self, n: usize, seed: u64) -> GenParams {
        GenParams {
            n,
            w_max: self.w_max,
            p_max: self.p_max,
            m_max: self.m_max,
            distribution: self.distribution,
            seed,
            capacity: self.capacity,
            clusters: self.clusters,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolverFlags {
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    pub safety: f64,
}

impl SolverFlags {
    fn config(&self, algorithm: Algorithm) -> SolverConfig {
        SolverConfig {
            algorithm,
            seed: self.seed,
            alpha: self.alpha,
            safety: self.safety,
            ..Default::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub gen: GeneratorFlags,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub file: PathBuf,
    #[arg(long, default_value = "auto")]
    pub algo: Algorithm,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Also print `take <type> <count>` lines.
    #[arg(long)]
    pub witness: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Seeds tried per algorithm.
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long, value_delimiter = ',', default_value = "pipeline,permdp")]
    pub algos: Vec<Algorithm>,
    #[command(flatten)]
    pub solver: SolverFlags,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Instance files; when absent, instances are generated for `--sizes`.
    pub files: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "1024,2048,4096")]
    pub sizes: Vec<usize>,
    /// Generated instances per size.
    #[arg(long, default_value_t = 1)]
    pub per_size: usize,
    #[command(flatten)]
    pub gen: GeneratorFlags,
    #[arg(long, value_delimiter = ',', default_value = "pipeline,permdp")]
    pub algos: Vec<Algorithm>,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    /// Fill the `verified` column from the exact DP.
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub solver: SolverFlags,
}

/// Runs a parsed command, writing results to `out` and diagnostics to `err`;
/// returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a, out, err),
        Command::Solve(a) => cmd_solve(a, out, err),
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Bench(a) => cmd_bench(a, out, err),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_FAIL
    })
}

fn exit_for(e: &SolveError) -> i32 {
    match e {
        SolveError::TooLarge { .. } => EXIT_GUARD,
        SolveError::Invalid(_) => EXIT_INPUT,
        _ => EXIT_FAIL,
    }
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let inst = match gen::generate(&a.gen.params(a.gen.n, a.seed)) {
        Ok(i) => i,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_INPUT);
        }
    };
    match a.output {
        Some(path) => {
            if let Err(e) = format::write_file(&path, &inst) {
                writeln!(err, "error: {e}")?;
                return Ok(EXIT_FAIL);
            }
        }
        None => out.write_all(format::serialize(&inst).as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn cmd_solve(a: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let inst = match format::read_file(&a.file) {
        Ok(i) => i,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_INPUT);
        }
    };
    let cfg = SolverConfig {
        witness: a.witness,
        ..a.solver.config(a.algo)
    };
    match solve_bounded(&inst, &cfg) {
        Ok(s) => {
            writeln!(out, "profit {}", s.profit)?;
            for (t, c) in s.witness.unwrap_or_default() {
                writeln!(out, "take {t} {c}")?;
            }
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(err, "error: {e}")?;
            Ok(exit_for(&e))
        }
    }
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let base = a.solver.config(Algorithm::Auto);
    let mut code = EXIT_OK;
    for path in &a.files {
        let name = path.display().to_string();
        let inst = match format::read_file(path) {
            Ok(i) => i,
            Err(e) => {
                writeln!(err, "error: {e}")?;
                if code == EXIT_OK {
                    code = EXIT_INPUT;
                }
                continue;
            }
        };
        for line in verify::verify_instance(
            &name,
            &inst,
            &a.algos,
            a.trials,
            a.solver.seed,
            &base,
            &solve_bounded,
        ) {
            writeln!(out, "{line}")?;
            if line.verdict == Verdict::Fail {
                code = EXIT_FAIL;
            }
        }
    }
    Ok(code)
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let mut instances = Vec::new();
    if a.files.is_empty() {
        for &n in &a.sizes {
            for k in 0..a.per_size.max(1) {
                let seed = a.solver.seed.wrapping_add(k as u64);
                match gen::generate(&a.gen.params(n, seed)) {
                    Ok(inst) => {
                        instances.push((format!("{}-n{n}-s{seed}", a.gen.distribution), inst))
                    }
                    Err(e) => {
                        writeln!(err, "error: {e}")?;
                        return Ok(EXIT_INPUT);
                    }
                }
            }
        }
    } else {
        for path in &a.files {
            match format::read_file(path) {
                Ok(inst) => instances.push((path.display().to_string(), inst)),
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    return Ok(EXIT_INPUT);
                }
            }
        }
    }
    let base = a.solver.config(Algorithm::Auto);
    let records = bench::run_bench(&instances, &a.algos, a.repeats, &base, a.verify);
    bench::write_csv(&records, &mut *out).map_err(std::io::Error::other)?;
    bench::write_summary(&bench::slopes(&records), &mut *err)?;
    Ok(EXIT_OK)
}
