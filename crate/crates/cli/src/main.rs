mod commands;
mod workspace;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sullivan_core::Convention;

#[derive(Parser, Debug)]
#[command(name = "sullivan", version, about = "Exact minimal models of algebras over tame operads")]
pub struct Cli {
    /// Directory that relative input and output paths resolve against.
    #[arg(long, global = true, env = "SULLIVAN_WORKSPACE")]
    pub workspace: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ConventionArg {
    Chain,
    Cochain,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Chain => Convention::Chain,
            ConventionArg::Cochain => Convention::Cochain,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SectionArg {
    Canonical,
    Random,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the axioms of an operad or algebra document.
    Validate { file: PathBuf },
    /// Smallest r for which an operad is r-tame, with the binding arity-degrees.
    Tameness {
        operad: String,
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        #[arg(long, default_value_t = 4)]
        arity_bound: usize,
        /// Largest r searched.
        #[arg(long, default_value_t = 64)]
        cap: usize,
    },
    /// Degreewise dimensions of a free algebra.
    FreeDims {
        /// Operad file, or one of Com, Ass, Lie, Ger.
        operad: String,
        /// Generators as `label:degree,...`.
        #[arg(long)]
        gens: String,
        #[arg(long)]
        max_degree: i64,
        #[arg(long, default_value_t = 0)]
        min_degree: i64,
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        #[arg(long, default_value_t = 6)]
        arity_bound: usize,
        #[arg(long)]
        arity_cap: Option<usize>,
    },
    /// Compute a minimal model and its quasi-isomorphism certificate.
    MinimalModel {
        algebra: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        max_degree: i64,
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        #[arg(long, value_enum, default_value = "canonical")]
        section: SectionArg,
        /// Seed for random sections (implies --section random).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 32)]
        iteration_cap: usize,
        #[arg(long)]
        arity_cap: Option<usize>,
        /// Write the model as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the model map as a morphism document.
        #[arg(long)]
        map_out: Option<PathBuf>,
    },
    /// Isomorphism between two minimal models of the same algebra.
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 16)]
        t_ceiling: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift f: C -> B through a surjective quasi-isomorphism w: A -> B.
    Lift {
        /// Morphism document for f.
        #[arg(long)]
        f: PathBuf,
        /// Morphism document for w.
        #[arg(long)]
        w: PathBuf,
        #[arg(long)]
        up_to: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cone-based quasi-isomorphism certificate for a morphism.
    CheckQiso {
        morphism: PathBuf,
        #[arg(long)]
        up_to: i64,
    },
    /// Write the full tables of a built-in operad.
    Builtin {
        name: String,
        #[arg(long, value_enum)]
        convention: ConventionArg,
        #[arg(long, default_value_t = 4)]
        arity_bound: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Outcome of a command: the report and whether its check passed.
pub struct Outcome {
    pub report: String,
    pub ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(out) => {
            print!("{}", out.report);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
