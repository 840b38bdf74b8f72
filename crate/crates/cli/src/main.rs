//! `fibclose`: run the enumeration, the bounds, the reductions, or the whole
//! proof replay from the command line.
//!
//! Exit codes: 0 success, 1 a proof step failed, 2 usage error, 3 the
//! precision cap was exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use fibclose::certificate::Verdict;
use fibclose::cfrac::{convergents, expand};
use fibclose::linear_forms::{case1_bounds, case2_bounds, matveev_coefficients};
use fibclose::prove::{prove, ProveOptions, Stage};
use fibclose::reals::{CertifiedConstant, PrecisionPolicy};
use fibclose::reduction::{dp_reduce, phi_log_ratio_constant, ReductionInstance};
use fibclose::search::{
    enumerate_lucas_solutions, enumerate_pair_solutions, enumerate_single_fib_solutions, golden_appendix, load_appendix,
};
use fibclose::Error;

const SEARCH_LIMIT: u32 = 10_000;

#[derive(Parser)]
#[command(name = "fibclose", version, about = "Certified replay of the classification of F_n + F_m close to 2^a")]
struct Cli {
    /// Starting working precision in bits.
    #[arg(long, global = true, env = "FIBCLOSE_PRECISION", default_value_t = PrecisionPolicy::DEFAULT_START)]
    precision: u32,

    /// Give up (exit 3) past this many bits.
    #[arg(long, global = true, default_value_t = PrecisionPolicy::DEFAULT_CAP)]
    max_precision: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    /// |F_n + F_m - 2^a| < 2^(a/2)
    Pairs,
    /// |L_n - 2^a| < 2^(a/2)
    Lucas,
    /// |F_n - 2^m| < 2^(m/2)
    Single,
}

#[derive(Subcommand)]
enum Command {
    /// Exact enumeration of small solutions.
    Search {
        #[arg(long, default_value_t = 250)]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = Target::Pairs)]
        target: Target,
        /// Also write the result as JSON.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the proof replay and write a certificate.
    Prove {
        /// Certificate path (JSON); a line-oriented text copy goes next to it
        /// with extension `.txt`.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Run only these stages (repeatable).
        #[arg(long, value_parser = parse_stage)]
        stage: Vec<Stage>,
        /// Golden solution list to compare the enumeration against.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// One Dujella–Pethö reduction.
    Reduce {
        #[arg(long, default_value = "gamma")]
        gamma: String,
        /// A constant expression, or `phi:<t>` for log phi(t) / log alpha.
        #[arg(long, default_value = "log_sqrt5/log_alpha")]
        mu: String,
        #[arg(long = "a-coeff", default_value = "3*sqrt5/log_alpha")]
        a_coeff: String,
        #[arg(long = "base", default_value = "alpha")]
        base: String,
        #[arg(long = "m", default_value = "45000000000000000000000000000")]
        m: BigInt,
    },
    /// Matveev coefficients and the global bounds of both cases.
    Bounds,
    /// Partial quotients and convergents of a constant.
    Cf {
        #[arg(long, default_value = "gamma")]
        constant: String,
        #[arg(long, default_value_t = 40)]
        count: usize,
    },
}

fn parse_stage(s: &str) -> Result<Stage, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Step(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PrecisionCapExceeded { .. } => Failure::Cap(e.to_string()),
            Error::InvalidInput(_) | Error::UnknownConstant(_) | Error::Parse { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Step(e.to_string()),
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_constant(s: &str) -> Result<CertifiedConstant, Failure> {
    if let Some(t) = s.strip_prefix("phi:") {
        let t: u32 = t.parse().map_err(|_| Failure::Usage(format!("bad gap in {s:?}")))?;
        if t == 0 {
            return Err(Failure::Usage("phi gap must be at least 1".into()));
        }
        return Ok(phi_log_ratio_constant(t));
    }
    Ok(CertifiedConstant::parse(s)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    if cli.precision < 16 || cli.max_precision < 16 {
        return Err(Failure::Usage("precision must be at least 16 bits".into()));
    }
    let policy = PrecisionPolicy { start: cli.precision.min(cli.max_precision), cap: cli.max_precision };
    match cli.command {
        Command::Search { n_max, target, output } => {
            if n_max > SEARCH_LIMIT {
                return Err(Failure::Usage(format!("--n-max is limited to {SEARCH_LIMIT}")));
            }
            let json = match target {
                Target::Pairs => {
                    let s = enumerate_pair_solutions(n_max)?;
                    println!("n m a");
                    for t in &s.triples {
                        println!("{} {} {}", t.n, t.m, t.a);
                    }
                    println!("# {} solutions, max n {}, max a {}", s.len(), s.n_max_seen, s.a_max_seen);
                    serde_json::to_string_pretty(&s).expect("serializable")
                }
                Target::Lucas => {
                    let s = enumerate_lucas_solutions(n_max)?;
                    println!("n a");
                    for (n, a) in &s {
                        println!("{n} {a}");
                    }
                    println!("# {} solutions", s.len());
                    serde_json::to_string_pretty(&s).expect("serializable")
                }
                Target::Single => {
                    let s = enumerate_single_fib_solutions(n_max)?;
                    println!("F_n 2^m");
                    for (f, p) in &s {
                        println!("{f} {p}");
                    }
                    println!("# {} solutions", s.len());
                    let rows: Vec<(String, String)> = s.iter().map(|(f, p)| (f.to_string(), p.to_string())).collect();
                    serde_json::to_string_pretty(&rows).expect("serializable")
                }
            };
            if let Some(path) = output {
                write_file(&path, &json)?;
            }
            Ok(())
        }
        Command::Prove { output, stage, golden } => {
            let golden = match golden {
                Some(p) => load_appendix(&p)?,
                None => golden_appendix(),
            };
            let stages = if stage.is_empty() { Stage::ALL.to_vec() } else { stage };
            let cert = prove(&ProveOptions { policy, stages, golden })?;
            for s in &cert.steps {
                println!("{:<8} {}", s.verdict.as_str(), s.step_id);
            }
            println!("overall {}", cert.overall);
            if let Some(path) = output {
                write_file(&path, &cert.to_json())?;
                write_file(&path.with_extension("txt"), &cert.to_text())?;
            }
            if cert.overall == Verdict::Pass {
                Ok(())
            } else {
                let failed: Vec<&str> = cert.failures().iter().map(|s| s.step_id.as_str()).collect();
                let missing = cert.missing_steps();
                Err(Failure::Step(format!("failed steps: {failed:?}; missing steps: {missing:?}")))
            }
        }
        Command::Reduce { gamma, mu, a_coeff, base, m } => {
            let inst = ReductionInstance::new(
                parse_constant(&gamma)?,
                parse_constant(&mu)?,
                parse_constant(&a_coeff)?,
                parse_constant(&base)?,
                m,
            )?;
            match dp_reduce(&inst, policy) {
                Ok(out) => {
                    println!("convergent_index {}", out.convergent_index);
                    println!("q {}", out.q_used);
                    println!("epsilon >= {}", out.epsilon.lower_decimal(12));
                    println!("log(A q/epsilon)/log B <= {}", out.w_value.upper_decimal(12));
                    println!("w_bound {}", out.w_bound);
                    Ok(())
                }
                Err(Error::Degenerate { tried }) => {
                    println!("degenerate: epsilon <= 0 for convergents {tried:?}");
                    Err(Failure::Step("degenerate instance".into()))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Bounds => {
            let c = matveev_coefficients(policy)?;
            println!("matveev first  <= {}", c.lambda1.upper_decimal(12));
            println!("matveev second <= {}", c.lambda2.upper_decimal(12));
            let b1 = case1_bounds(policy)?;
            println!("case1 n_max {} a_max {}", b1.n_max, b1.a_max);
            let b2 = case2_bounds(policy)?;
            println!("case2 n_max {} a_max {}", b2.n_max, b2.a_max);
            Ok(())
        }
        Command::Cf { constant, count } => {
            if count == 0 {
                return Err(Failure::Usage("--count must be at least 1".into()));
            }
            let c = parse_constant(&constant)?;
            let cf = expand(&c, count, policy)?;
            println!("k a p q");
            for cv in convergents(&cf, policy)? {
                println!("{} {} {} {}", cv.k, cv.a, cv.p, cv.q);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Step(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
