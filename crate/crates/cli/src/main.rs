use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

use commands::{Config, Failure};

#[derive(Parser, Debug)]
#[command(name = "spf-lab", version, about = "Exact computations with strict polynomial functors over F_p")]
struct Cli {
    /// Characteristic of the ground field.
    #[arg(long, global = true, default_value_t = 2)]
    p: u32,

    /// Rank of the Schur algebra S(n, d); defaults to the degree (2d for formality).
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Highest cohomological degree to compute.
    #[arg(long, global = true, default_value_t = 4)]
    imax: usize,

    /// Refuse jobs whose ambient dimension exceeds this bound.
    #[arg(long = "guard-dim", global = true, default_value_t = 20_000)]
    guard_dim: usize,

    /// Directory for structure-constant tables.
    #[arg(long = "cache-dir", global = true, env = "SPF_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    #[arg(long, global = true)]
    json: bool,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = spf_core::suites::DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ext^i(F, G) for i <= imax.
    Ext { f: String, g: String },
    /// Compare Hom(G^(1)#, R^{2d,*}) with the weights of G^(1)(k^2 (x) V), p = 2.
    Formality {
        g: String,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Hyper-Ext spectral sequence of Hom(C, D). Complexes are written `A -> B -> ...`.
    Hyperext {
        c: String,
        d: String,
        #[arg(long = "c-start", default_value_t = 0, allow_hyphen_values = true)]
        c_start: i32,
        #[arg(long = "d-start", default_value_t = 0, allow_hyphen_values = true)]
        d_start: i32,
    },
    /// Injective coresolution of F through degree imax.
    Coresolve { f: String },
    /// Run an invariant suite, or `all`.
    Check { suite: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = Config {
        p: cli.p,
        n: cli.n,
        imax: cli.imax,
        guard: cli.guard_dim,
        cache_dir: cli.cache_dir,
        seed: cli.seed,
    };
    let out = match &cli.command {
        Command::Ext { f, g } => commands::ext(&cfg, f, g),
        Command::Formality { g, d } => commands::formality(&cfg, g, *d),
        Command::Hyperext { c, d, c_start, d_start } => commands::hyperext(&cfg, c, d, *c_start, *d_start),
        Command::Coresolve { f } => commands::coresolve(&cfg, f),
        Command::Check { suite } => commands::check(&cfg, suite),
    };
    match out {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).unwrap());
            } else {
                print!("{}", report.text);
            }
            if report.failed {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure { code, message }) => {
            if cli.json {
                let body = serde_json::json!({ "error": message, "exit_code": code });
                println!("{}", serde_json::to_string_pretty(&body).unwrap());
            }
            eprintln!("spf-lab: {message}");
            ExitCode::from(code)
        }
    }
}
