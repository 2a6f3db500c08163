//! `dqp`: exact checks of double (quasi-)Poisson brackets and the
//! A∞-structures they induce.
//!
//! Exit codes: 0 every check passed, 2 some identity or axiom failed, 1 input error.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use dqp_core::exact_arith::{c_coeff, format_rational, parse_rational};
use dqp_core::format::{AlgebraFile, BUNDLED};
use dqp_core::identities::{run_identities, Corruption, IdentitiesConfig};
use dqp_core::stasheff::{verify_cyclicity, verify_pcy, verify_si, ModeChoice, SiConfig, DEFAULT_BUDGET};
use dqp_core::{DoubleBracket, Rational, Structure};

use report::{InputInfo, RunReport, TauInfo};

#[derive(Parser)]
#[command(name = "dqp", version, about = "Exact verification of double quasi-Poisson algebras")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "DQP_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Algebra file, or `builtin:NAME` for a bundled example (qp2, qp3, dp3).
    input: String,

    /// Replace the file's τ; the report marks it as an override.
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,

    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckMode {
    Poisson,
    Quasi,
}

#[derive(Clone, Copy, ValueEnum)]
enum SiModeArg {
    Exhaustive,
    Sampled,
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Associativity, unit, skew-symmetry and the derivation property.
    Validate {
        #[command(flatten)]
        io: InputArgs,
    },
    /// Double Jacobi identity or its quasi-Poisson version.
    Check {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, value_enum)]
        mode: CheckMode,
    },
    /// Stasheff identities, cyclicity and the pre-Calabi-Yau conditions.
    Stasheff {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "auto")]
        mode: SiModeArg,
        /// Tuples drawn per N in sampled mode.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Slot-evaluation budget below which auto mode is exhaustive.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// Random tuples per N outside the degree that can be nonzero.
        #[arg(long, default_value_t = 16)]
        off_degree_samples: usize,
        /// Check one parity pattern per cyclic orbit once the rotation identity is confirmed.
        #[arg(long)]
        orbit_pruning: bool,
        /// Largest arity for the cyclicity check; defaults to min(max-n, 6).
        #[arg(long)]
        cyclicity_max_n: Option<usize>,
        /// Largest arity for the pre-Calabi-Yau checks; defaults to min(max-n, 6).
        #[arg(long)]
        pcy_max_n: Option<usize>,
    },
    /// Combinatorial identities among the Bernoulli coefficients.
    #[command(alias = "bernoulli-identities")]
    Identities {
        #[arg(long, default_value_t = 24)]
        max_even_n: i64,
        #[arg(long, default_value_t = 12)]
        bcm_max_k: i64,
        /// Bound on k for the μ reductions and the linear-combination identity.
        #[arg(long, default_value_t = 8)]
        reduction_max_k: i64,
        /// Random weight sequences for the linear-combination identity.
        #[arg(long, default_value_t = 0)]
        generalized_trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Adds 1/1000 to C_{i,j} (format `i,j`); negative control.
        #[arg(long, hide = true)]
        corrupt_c: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Table of C_{i,j} for i + j odd and at most MAX.
    Cij {
        #[arg(long, default_value_t = 11)]
        max: i64,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        tau: String,
    },
}

/// An input problem; maps to exit code 1.
#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

struct Loaded {
    db: DoubleBracket,
    input: InputInfo,
    tau: TauInfo,
}

fn load(io: &InputArgs) -> Result<Loaded, InputError> {
    let (text, source) = match io.input.strip_prefix("builtin:") {
        Some(name) => {
            let text = BUNDLED
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| InputError(format!("no bundled example named {name}")))?;
            (text, io.input.clone())
        }
        None => {
            let text = std::fs::read_to_string(&io.input).map_err(|e| InputError(format!("{}: {e}", io.input)))?;
            (text, io.input.clone())
        }
    };
    let sha256 = hex::encode(Sha256::digest(text.as_bytes()));
    let mut db = AlgebraFile::from_json(&text)?.to_bracket()?;
    let overridden = io.tau.is_some();
    if let Some(t) = &io.tau {
        let tau = parse_rational(t).map_err(|e| InputError(format!("--tau: {e}")))?;
        db = db.with_tau(tau);
    }
    let tau = TauInfo { value: format_rational(db.tau()), overridden };
    Ok(Loaded { db, input: InputInfo { source, sha256 }, tau })
}

fn names(db: &DoubleBracket, idx: &[usize]) -> String {
    let n = db.algebra().basis_names();
    idx.iter().map(|&i| n[i].as_str()).collect::<Vec<_>>().join(", ")
}

/// Algebra axioms plus DB.1 and DB.2; returns whether all hold.
fn validate_into(db: &DoubleBracket, report: &mut RunReport) -> bool {
    let start = Instant::now();
    let alg = db.algebra().validate();
    let assoc: Vec<String> = alg
        .associativity_failures
        .iter()
        .map(|&(i, j, k)| format!("({}) not associative", names(db, &[i, j, k])))
        .collect();
    report.push("associativity", alg.associativity_failures.is_empty(), assoc, &alg.associativity_failures);
    let unit: Vec<String> = alg.unit_failures.iter().map(|&i| format!("unit fails at {}", names(db, &[i]))).collect();
    report.push("unit", alg.unit_failures.is_empty(), unit, &alg.unit_failures);
    let db1 = db.check_db1();
    let w1 = db1.iter().map(|&(i, j)| format!("not skew at ({})", names(db, &[i, j]))).collect();
    report.push("db1", db1.is_empty(), w1, &db1);
    let db2 = db.check_db2();
    let w2 = db2.iter().map(|&(i, j, k)| format!("not a derivation at ({})", names(db, &[i, j, k]))).collect();
    report.push("db2", db2.is_empty(), w2, &db2);
    report.time("validate", start.elapsed().as_millis());
    alg.is_ok() && db1.is_empty() && db2.is_empty()
}

fn emit(report: &RunReport, out: Option<&PathBuf>) -> Result<(), InputError> {
    let json = report.to_json();
    match out {
        Some(p) => std::fs::write(p, json).map_err(|e| InputError(format!("{}: {e}", p.display())))?,
        None => print!("{json}"),
    }
    for c in &report.checks {
        let status = if matches!(c.status, report::Status::Pass) { "pass" } else { "FAIL" };
        eprintln!("{status:>4}  {}", c.name);
    }
    Ok(())
}

fn with_input(command: &str, l: &Loaded) -> RunReport {
    let mut r = RunReport::new(command);
    r.input = Some(l.input.clone());
    r.tau = Some(l.tau.clone());
    r
}

fn run(cli: Cli) -> Result<i32, InputError> {
    match cli.command {
        Command::Validate { io } => {
            let l = load(&io)?;
            let mut report = with_input("validate", &l);
            validate_into(&l.db, &mut report);
            emit(&report, io.out.as_ref())?;
            Ok(report.exit_code())
        }
        Command::Check { io, mode } => {
            let l = load(&io)?;
            let mut report = with_input("check", &l);
            if validate_into(&l.db, &mut report) {
                let start = Instant::now();
                let (name, d) = match mode {
                    CheckMode::Poisson => ("double_poisson", l.db.is_double_poisson()),
                    CheckMode::Quasi => ("quasi_poisson", l.db.is_quasi_poisson()),
                };
                let w = d.witness.iter().map(|w| {
                    let (a, b, c) = w.triple;
                    format!("({}): triple bracket differs from its target", names(&l.db, &[a, b, c]))
                });
                report.push(name, d.holds, w.collect(), &d);
                report.time(name, start.elapsed().as_millis());
            }
            emit(&report, io.out.as_ref())?;
            Ok(report.exit_code())
        }
        Command::Stasheff {
            io,
            max_n,
            mode,
            samples,
            seed,
            budget,
            off_degree_samples,
            orbit_pruning,
            cyclicity_max_n,
            pcy_max_n,
        } => {
            let l = load(&io)?;
            let mut report = with_input("stasheff", &l);
            report.seed = Some(seed);
            if validate_into(&l.db, &mut report) {
                let st = Structure::new(l.db.clone());
                let mode = match mode {
                    SiModeArg::Exhaustive => ModeChoice::Exhaustive,
                    SiModeArg::Sampled => ModeChoice::Sampled,
                    SiModeArg::Auto => ModeChoice::Auto { budget },
                };
                let cfg = SiConfig { n_min: 1, n_max: max_n, mode, samples, seed, off_degree_samples, orbit_pruning };
                let start = Instant::now();
                for r in verify_si(&st, &cfg) {
                    let w = r.violations.iter().map(|v| format!("({}) = {}", v.rendered.join(", "), format_rational(&v.value)));
                    report.push(&format!("si_{}", r.n), r.passed(), w.collect(), &r);
                }
                report.time("stasheff", start.elapsed().as_millis());

                let start = Instant::now();
                let cyc = verify_cyclicity(&st, cyclicity_max_n.unwrap_or(max_n.min(6)));
                let w = cyc.entries.iter().flat_map(|e| e.tally.witnesses.clone()).collect();
                report.push("cyclicity", cyc.holds, w, &cyc);
                report.time("cyclicity", start.elapsed().as_millis());

                let start = Instant::now();
                let pcy = verify_pcy(&st, pcy_max_n.unwrap_or(max_n.min(6)));
                let w = [&pcy.pcy1, &pcy.eq_cy, &pcy.unit_pairing, &pcy.strict_unit]
                    .iter()
                    .flat_map(|t| t.witnesses.clone())
                    .collect();
                report.push("pcy", pcy.holds, w, &pcy);
                report.time("pcy", start.elapsed().as_millis());
            }
            emit(&report, io.out.as_ref())?;
            Ok(report.exit_code())
        }
        Command::Identities { max_even_n, bcm_max_k, reduction_max_k, generalized_trials, seed, corrupt_c, out } => {
            let corrupt = corrupt_c.map(|s| parse_pair(&s)).transpose()?;
            let cfg = IdentitiesConfig {
                max_even_n,
                bcm_max_k,
                reduction_max_k,
                generalized_trials,
                seed,
                corrupt: corrupt.map(|(i, j)| Corruption { i, j, delta: Rational::new(1.into(), 1000.into()) }),
            };
            let mut report = RunReport::new("identities");
            report.seed = Some(seed);
            let start = Instant::now();
            let r = run_identities(&cfg);
            report.time("identities", start.elapsed().as_millis());
            let tallies = [
                ("cgen", &r.cgen),
                ("cgen_symmetry", &r.cgen_symmetry),
                ("bcm", &r.bcm),
                ("mu_reduced", &r.mu_reduced),
                ("maincomp", &r.maincomp),
                ("script_e", &r.script_e),
                ("ide_bernoulli", &r.ide_bernoulli),
                ("ide_indicator", &r.ide_indicator),
                ("ide_random", &r.ide_random),
            ];
            for (name, t) in tallies {
                report.push(name, t.holds(), t.witnesses.clone(), t);
            }
            if let Some(c) = &r.corruption {
                report.push("corruption_hook", true, Vec::new(), c);
            }
            emit(&report, out.as_ref())?;
            Ok(report.exit_code())
        }
        Command::Cij { max, tau } => {
            let tau = parse_rational(&tau).map_err(|e| InputError(format!("--tau: {e}")))?;
            for s in (3..=max).filter(|s| s % 2 == 1) {
                for i in 1..s {
                    println!("{i}\t{}\t{}", s - i, format_rational(&c_coeff(i, s - i, &tau)?));
                }
            }
            Ok(0)
        }
    }
}

fn parse_pair(s: &str) -> Result<(i64, i64), InputError> {
    let (a, b) = s.split_once(',').ok_or_else(|| InputError(format!("expected i,j but got {s}")))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
