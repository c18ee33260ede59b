//! `torusloop` command-line front end.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Outcome;

#[derive(Parser, Debug)]
#[command(name = "torusloop", version, about = "Loop-model torus partition functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<std::path::PathBuf>,
    /// Worker threads; defaults to TORUSLOOP_WORKERS, then the core count.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Model {
    #[arg(long, default_value = "dense")]
    pub model: String,
    #[arg(long)]
    pub p: i64,
    /// p′
    #[arg(long)]
    pub pq: i64,
    /// Spectral parameter; isotropic point if omitted.
    #[arg(long)]
    pub u: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Brute-force lattice partition functions on an M×N torus.
    Enumerate {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
    },
    /// Transfer-matrix traces, C_{d,j} tables and Markov-trace sectors.
    Transfer {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// Print eigenvalues of the d-defect module at twist ω = ±1 instead.
        #[arg(long)]
        spectrum: Option<usize>,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        omega: f64,
    },
    /// Exact q-series of the conformal partition functions.
    Series {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        pq: i64,
        #[arg(long, default_value_t = 0)]
        h: u8,
        #[arg(long, default_value_t = 0)]
        v: u8,
        #[arg(long, value_enum, default_value_t = Form::Direct)]
        form: Form,
        #[arg(long, default_value = "8")]
        cutoff: String,
        /// γ/π as a rational, for verma/full/on.
        #[arg(long, default_value = "0")]
        gamma: String,
        #[arg(long, default_value_t = 0)]
        d: i64,
        #[arg(long, default_value_t = 0)]
        eps: u8,
        #[arg(long, default_value = "dense")]
        model: String,
    },
    /// Number-theoretic identity checks.
    Identity {
        #[arg(long, value_enum)]
        check: IdentityCheck,
        #[arg(long, default_value_t = 30)]
        max_d: u64,
        #[arg(long, default_value_t = 25)]
        window: i64,
    },
    /// Bezout conjugate tables.
    Bezout {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        pq: i64,
        #[arg(long, default_value_t = 0)]
        h: u8,
        #[arg(long, default_value_t = 0)]
        v: u8,
        /// Figure-style Kac table text.
        #[arg(long)]
        table: bool,
    },
    /// Numeric modular covariance of the four sectors.
    Modular {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        pq: i64,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// τ as "re,im"; may be repeated.
        #[arg(long, allow_hyphen_values = true)]
        tau: Vec<String>,
        #[arg(long, default_value_t = 40)]
        dmax: i64,
    },
    /// Reduced sesquilinear forms in u(1) characters.
    Appendixc {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        pq: i64,
        #[arg(long)]
        h: Option<u8>,
        #[arg(long)]
        v: Option<u8>,
    },
    /// Run the acceptance matrix.
    Accept {
        #[arg(long, default_value = "core")]
        suite: String,
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u8>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Direct,
    U1,
    Bezout,
    Verma,
    Full,
    On,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityCheck {
    GammaLambda,
    S1s2,
    Master,
    Sumlambda2,
    Someeq,
}

fn init_workers(n: Option<usize>) {
    let n = n.or_else(|| {
        std::env::var("TORUSLOOP_WORKERS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(n) = n.filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    init_workers(cli.common.workers);
    let (text, code) = match commands::dispatch(&cli) {
        Ok(Outcome { body, ok }) => (body, if ok { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.code());
        }
    };
    let res = match &cli.common.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = res {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
