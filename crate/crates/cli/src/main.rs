use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ktoeplitz::dsl::eval_expr;
use ktoeplitz::ktheory::{kvec_e, kvec_l};
use ktoeplitz::numeric::{to_matrix, TruncationSpec};
use ktoeplitz::suite::{run_suite, SuiteConfig, REGISTRY};
use ktoeplitz::{dsl::parse_expr, Error, Signature};

#[derive(Parser)]
#[command(name = "ktoeplitz", version, about = "Exact checks for Toeplitz tensor algebras, quantum spheres and their K-theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite.
    Verify {
        #[arg(long = "n", default_value_t = 3)]
        n_max: usize,
        #[arg(long = "k", default_value_t = 3)]
        k_max: usize,
        #[arg(long = "trunc-N", default_value_t = 16)]
        trunc_n: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Comma-separated check names; `all` is the default suite.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        /// Treat a failure of this check as expected (repeatable).
        #[arg(long = "expect-fail")]
        expect_fail: Vec<String>,
    },
    /// Parse an expression and print its canonical form.
    Eval {
        expr: String,
        /// Signature such as `T,C,S2`.
        #[arg(long, default_value = "T")]
        sig: String,
    },
    /// Print K-vectors: [L_k] if only --k is given, [E_k^j] with --j.
    Kclass {
        #[arg(long = "n")]
        n: usize,
        #[arg(long = "k", allow_negative_numbers = true)]
        k: i64,
        #[arg(long = "j")]
        j: Option<usize>,
    },
    /// Print the truncated matrix of an expression as `row col re im` lines.
    DumpMatrix {
        expr: String,
        #[arg(long, default_value = "T")]
        sig: String,
        #[arg(long = "trunc-N", default_value_t = 8)]
        trunc_n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Which circle sample to print.
        #[arg(long, default_value_t = 0)]
        sample: usize,
    },
    /// List the registered checks.
    ListChecks,
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Verify { n_max, k_max, trunc_n, tol, seed, json, only, expect_fail } => {
            let config = SuiteConfig {
                n_max,
                k_max,
                truncation_n: trunc_n,
                tolerance: tol,
                seed,
                checks: only,
                expect_fail,
                output_path: json.clone(),
            };
            let outcome = run_suite(&config)?;
            for r in &outcome.reports {
                println!("{r}");
            }
            let passed = outcome.reports.iter().filter(|r| r.passed()).count();
            println!(
                "{} reports, {} passed, {} failed, {} unexpected",
                outcome.reports.len(),
                passed,
                outcome.reports.len() - passed,
                outcome.unexpected()
            );
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&outcome.to_json(&config)).expect("report serializes");
                std::fs::write(&path, text + "\n").map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(outcome.ok())
        }
        Command::Eval { expr, sig } => {
            let sig: Signature = sig.parse()?;
            println!("{}", eval_expr(&expr, &sig)?);
            Ok(true)
        }
        Command::Kclass { n, k, j } => {
            let v = match j {
                Some(j) => {
                    let k = usize::try_from(k).map_err(|_| Error::IndexOutOfRange(format!("E_k^j needs k >= 0, got {k}")))?;
                    kvec_e(n, j, k)?
                }
                None => kvec_l(n, k)?,
            };
            println!("{}", serde_json::to_string(&v.coords).expect("integers serialize"));
            Ok(true)
        }
        Command::DumpMatrix { expr, sig, trunc_n, seed, sample } => {
            let sig: Signature = sig.parse()?;
            let x = parse_expr(&expr, &sig)?;
            let x = if sig.has_spheres() { x.lift() } else { x };
            let spec = TruncationSpec::seeded(trunc_n, seed)?;
            let reps = to_matrix(&x, &spec)?;
            let rep = reps.get(sample).ok_or_else(|| Error::Config(format!("sample {sample} out of range (have {})", reps.len())))?;
            print!("{}", rep.dump());
            Ok(true)
        }
        Command::ListChecks => {
            for c in REGISTRY {
                let kind = serde_json::to_value(c.kind).expect("kind serializes");
                println!("{:<28} {:<17} {}", c.name, kind.as_str().unwrap_or_default(), c.about);
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
