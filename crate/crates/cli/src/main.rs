//! `sigmatrop --job job.json [--out result.json] [--plot DIR]`
//!
//! Exit codes: 0 success, 1 computation error, 2 some part undecided,
//! 3 malformed job document.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sigmatrop::job::{run_str, JobError, RunOptions};
use sigmatrop::plot::emit_plot_data;

#[derive(Debug, Parser)]
#[command(name = "sigmatrop", version, about = "Σ⁰ invariants of ℤⁿ-modules via tropical geometry")]
struct Args {
    /// Job document; `-` reads standard input.
    #[arg(long)]
    job: PathBuf,
    /// Where to write the result document (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for CSV plot data.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Worker threads; the result does not depend on this.
    #[arg(long)]
    threads: Option<usize>,
    /// Raise the certificate box size up to MAX while directions stay undecided.
    #[arg(long, value_name = "MAX")]
    bound_escalation: Option<u32>,
}

fn fail(e: &JobError) -> ExitCode {
    eprintln!("sigmatrop: {e}");
    println!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn io_error(what: &str, e: std::io::Error) -> JobError {
    JobError::Compute(sigmatrop::error::Error::InvalidInput(format!("{what}: {e}")))
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("sigmatrop: {e}");
            return ExitCode::from(1);
        }
    }
    let src = if args.job.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        fs::read_to_string(&args.job)
    };
    let src = match src {
        Ok(s) => s,
        Err(e) => return fail(&io_error("cannot read job", e)),
    };
    let doc = match run_str(&src, RunOptions { bound_escalation: args.bound_escalation }) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let text = doc.to_json();
    match &args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                return fail(&io_error("cannot write result", e));
            }
        }
        None => print!("{text}"),
    }
    if let Some(dir) = &args.plot {
        let files = match emit_plot_data(&doc) {
            Ok(f) => f,
            Err(e) => return fail(&JobError::Compute(e)),
        };
        if let Err(e) = fs::create_dir_all(dir) {
            return fail(&io_error("cannot create plot directory", e));
        }
        for f in files {
            if let Err(e) = fs::write(dir.join(&f.name), &f.contents) {
                return fail(&io_error("cannot write plot data", e));
            }
        }
    }
    ExitCode::from(doc.exit_code() as u8)
}
