use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use numlab::Result;
use numlab_cli::commands::{self, IndexArgs, Predicate, RadiusChoice, VerifyArgs};
use numlab_cli::report::write_stdout;
use numlab_cli::{emit_report, run_reproduce, Format, RunConfig};

#[derive(Parser)]
#[command(
    name = "numlab",
    version,
    about = "Numerical ranges, radii and indices of finite-dimensional normed spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the representation of a space expression.
    Space {
        expr: String,
        /// Run the sampled consistency checks as well.
        #[arg(long)]
        validate: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Numerical radius of an operator read from a JSON file.
    Radius {
        #[arg(long)]
        space: String,
        #[arg(long)]
        op: PathBuf,
        #[arg(long, default_value = "auto")]
        method: RadiusChoice,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Upper bound for the numerical index by multistart search.
    Index {
        #[arg(long)]
        space: String,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run the exhaustive planar grid (2-D polytopes only).
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = numlab::numindex::DEFAULT_GRID_DENSITY)]
        grid_density: usize,
    },
    /// Structural predicates: lush, almostcl, pairs, crich.
    Verify {
        predicate: Predicate,
        #[arg(long)]
        space: Option<String>,
        /// C-richness problem file (K model, functionals, optional open set).
        #[arg(long)]
        kmodel: Option<PathBuf>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the reproduction suite; exits nonzero if any claim fails.
    Reproduce {
        /// Comma-separated claim ids.
        #[arg(long, value_delimiter = ',')]
        claims: Option<Vec<String>>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<Format>,
        #[arg(long)]
        seed: Option<u64>,
        /// `key = value` configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Leave runtimes out, making the report byte-stable.
        #[arg(long)]
        no_timing: bool,
    },
}

fn print(doc: &serde_json::Value) -> Result<bool> {
    write_stdout(&(serde_json::to_string_pretty(doc)? + "\n"))?;
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Space { expr, validate, seed } => print(&commands::space_doc(&expr, validate, seed)?),
        Command::Radius {
            space,
            op,
            method,
            tol,
            seed,
        } => print(&commands::radius_doc(&space, &op, method, tol, seed)?),
        Command::Index {
            space,
            starts,
            budget,
            seed,
            oracle,
            grid_density,
        } => print(&commands::index_doc(&IndexArgs {
            space,
            starts,
            budget,
            seed,
            oracle,
            grid_density,
        })?),
        Command::Verify {
            predicate,
            space,
            kmodel,
            grid,
            eps,
            seed,
        } => print(&commands::verify_doc(&VerifyArgs {
            predicate,
            space,
            kmodel,
            grid,
            eps,
            seed,
        })?),
        Command::Reproduce {
            claims,
            out,
            format,
            seed,
            config,
            no_timing,
        } => {
            let mut cfg = match &config {
                Some(p) => RunConfig::load(p)?,
                None => RunConfig::default(),
            };
            if let Some(f) = format {
                cfg.format = f;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if no_timing {
                cfg.timing = false;
            }
            cfg.apply_env()?;
            let results = run_reproduce(&cfg, claims.as_deref())?;
            emit_report(&results, cfg.format, out.as_deref())?;
            let passed = results.iter().filter(|r| r.pass).count();
            for r in results.iter().filter(|r| !r.pass) {
                eprintln!("FAIL {}", r.id);
            }
            eprintln!("{passed}/{} claims passed", results.len());
            Ok(passed == results.len())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
