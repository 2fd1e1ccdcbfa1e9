//! `hopf-serre`: verify structure-constant files, regenerate the
//! classification tables, print twisted module structures.
//!
//! Exit codes: 0 ok, 1 axiom failure, 2 table mismatch, 3 parse error.

mod catalog_args;
mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

pub const EXIT_AXIOM: u8 = 1;
pub const EXIT_MISMATCH: u8 = 2;
pub const EXIT_PARSE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "hopf-serre", version, about = "Serre functors of comodule algebras, computed exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Md,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Which {
    Taft,
    Book,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Conv {
    A,
    B,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Parse a structure-constant file and run every applicable axiom suite.
    Verify {
        path: std::path::PathBuf,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        /// Shorthand for `--format json`.
        #[arg(long)]
        json: bool,
    },
    /// Regenerate a classification table and diff it against the published values.
    Table {
        #[arg(value_enum)]
        which: Which,
        #[arg(long = "N", default_value_t = 3)]
        n: usize,
        #[arg(long = "omega-exp", default_value_t = 1)]
        omega_exp: i64,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        /// Restrict to one family, e.g. `L1` or `L4eta`.
        #[arg(long)]
        family: Option<String>,
        /// Family parameters, e.g. `d=3,xi=1`; needs `--family`.
        #[arg(long)]
        params: Option<String>,
        #[arg(long, value_enum, default_value = "a")]
        convention: Conv,
        #[arg(long)]
        parallel: bool,
        /// Probe-module dimension bound for the twisted-structure comparison; 0 skips it.
        #[arg(long, default_value_t = 3)]
        serre_probe_dim: usize,
        /// Largest `dim L` for the bimodule cross-check of innerness.
        #[arg(long, default_value_t = 27)]
        cross_check_max_dim: usize,
    },
    /// Twisted module structure `Ser(X (x) M) -> X** (x) Ser(M)` for one pair.
    Serre {
        /// Comodule-algebra file; omit to use `--ambient/--family/--params`.
        path: Option<std::path::PathBuf>,
        #[arg(long, value_enum)]
        ambient: Option<Which>,
        #[arg(long = "N", default_value_t = 3)]
        n: usize,
        #[arg(long = "omega-exp", default_value_t = 1)]
        omega_exp: i64,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        params: Option<String>,
        /// `trivial` or the name of a character of the Hopf algebra.
        #[arg(long, default_value = "trivial")]
        x: String,
        /// `regular` or the name of a character of `L`.
        #[arg(long, default_value = "regular")]
        m: String,
        #[arg(long, conflicts_with = "simple")]
        general: bool,
        #[arg(long)]
        simple: bool,
        /// Use the `g^k`-cointegral as Frobenius form instead of the first nondegenerate one.
        #[arg(long)]
        grouplike: Option<usize>,
        #[arg(long, value_enum, default_value = "a")]
        convention: Conv,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Write a catalog object as a structure-constant file.
    Build {
        #[arg(value_enum)]
        ambient: Which,
        #[arg(long = "N", default_value_t = 3)]
        n: usize,
        #[arg(long = "omega-exp", default_value_t = 1)]
        omega_exp: i64,
        /// Family of the comodule algebra; omit to write the Hopf algebra itself.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<hopf_serre::Error>() {
                Some(hopf_serre::Error::Parse(_) | hopf_serre::Error::Unsupported(_)) | None => EXIT_PARSE,
                Some(_) => EXIT_AXIOM,
            };
            ExitCode::from(code)
        }
    }
}
