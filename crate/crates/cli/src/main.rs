//! `gct`: command-line front end for the exact computations in `gct-core`.
//!
//! Results go to stdout (plain text or JSON), progress to stderr. Exit codes:
//! 0 success, 1 inconclusive search, 2 usage or input error, 3 internal
//! defect.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "gct", version, about = "Exact representation-theoretic obstructions for tensor border rank")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true, env = "GCT_THREADS", value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Candidate permutation triples for certificate searches.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Plain)]
    pub output: Output,
    /// Refuse weights of larger degree.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub degree_limit: u64,
    /// Refuse dense tensors with more entries.
    #[arg(long, global = true, default_value_t = gct::tensors::DENSE_SIZE_GUARD as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub dense_limit: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Output {
    Plain,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Kronecker coefficient g(λ, μ, ν).
    Kron {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
    },
    /// Triples with nonzero Kronecker coefficient in a format.
    KronPoints {
        #[arg(long)]
        format: String,
        #[arg(long)]
        max_degree: usize,
    },
    /// Character value χ_λ(ρ).
    Char {
        #[arg(long)]
        lambda: String,
        /// Cycle type of the class.
        #[arg(long)]
        class: String,
    },
    /// Kostka number: semistandard tableaux of shape λ and content α.
    Kostka {
        #[arg(long)]
        lambda: String,
        /// Content, zeros allowed (e.g. 1,0,2).
        #[arg(long)]
        alpha: String,
    },
    /// Semistandard expansion of v(T); rows split by ';', entries by ','.
    Straighten {
        #[arg(long)]
        tableau: String,
    },
    /// The smallest regular partition ⊥_m(d).
    Staircase {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
    },
    /// Invariant dimensions for tensor stabilizers.
    Invdim {
        #[command(subcommand)]
        which: InvdimCommand,
    },
    /// Shift a weight until it passes the S° test one slot up.
    Barrier {
        /// Weight `λ₁;λ₂;λ₃`.
        #[arg(long)]
        weight: String,
        #[arg(long)]
        m: usize,
    },
    /// Rank-one decompositions.
    Tensor {
        #[command(subcommand)]
        which: TensorCommand,
    },
    /// Highest weight vector evaluation.
    Hwv {
        #[command(subcommand)]
        which: HwvCommand,
    },
    /// Border rank obstructions.
    Obstruct {
        #[command(subcommand)]
        which: ObstructCommand,
    },
    /// Normalised weights and hull membership.
    Polytope {
        #[command(subcommand)]
        which: PolytopeCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum InvdimCommand {
    /// dim (V_λ⃗)^H for the stabilizer of the unit tensor ⟨m⟩.
    Unit {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        m: usize,
        /// List the summand of every α.
        #[arg(long)]
        terms: bool,
    },
    /// dim (V_λ⃗)^H for the stabilizer of ⟨n₁, n₂, n₃⟩.
    Matmul {
        #[arg(long)]
        weight: String,
        /// n₁,n₂,n₃
        #[arg(long)]
        format: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum TensorCommand {
    /// Print a named decomposition: unit:m, matmul:a,b,c or strassen.
    Emit {
        name: String,
        #[arg(short = 'o', long)]
        out: Option<std::path::PathBuf>,
        /// Print the dense coefficient array instead.
        #[arg(long)]
        dense: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum HwvCommand {
    /// Evaluate P_Sym(π⃗ v_λ⃗) at a decomposition.
    Eval {
        #[arg(long)]
        weight: String,
        /// Three cycle strings split by ';', e.g. "();(1,2);()".
        #[arg(long)]
        perms: String,
        /// Named tensor or path to a decomposition file.
        #[arg(long)]
        tensor: String,
        /// JSON file with three integer matrices; evaluates at g·w.
        #[arg(long)]
        g: Option<std::path::PathBuf>,
    },
    /// Search for a nonzero evaluation certifying λ⃗ ∈ S(w).
    Certify {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        tensor: String,
        /// Also evaluate at g·w for seeded g with entries in [-B, B].
        #[arg(long)]
        g_bound: Option<i64>,
    },
    /// Re-evaluate a certificate file.
    Verify {
        #[arg(long)]
        certificate: std::path::PathBuf,
        #[arg(long)]
        tensor: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decomp {
    Naive,
    Strassen,
}

#[derive(Subcommand, Debug)]
pub enum ObstructCommand {
    /// The weight ((2^{n²}), (2^{n²}), (2n²−3, 1³)) against ⟨n²+1⟩.
    Lemma61 {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Decomp::Strassen)]
        decomp: Decomp,
        #[arg(long, default_value_t = 2)]
        g_bound: i64,
        /// Write the report JSON here as well.
        #[arg(short = 'o', long)]
        out: Option<std::path::PathBuf>,
    },
    /// Exploratory search over Kronecker semigroup weights (no guarantees).
    Search {
        #[arg(long)]
        tensor: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, default_value_t = 2)]
        g_bound: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum PolytopeCommand {
    /// Is a point a convex combination of generators?
    Member {
        #[arg(long)]
        point: std::path::PathBuf,
        #[arg(long)]
        gens: std::path::PathBuf,
    },
    /// Normalised Kronecker semigroup points as a generator set.
    KronGens {
        #[arg(long)]
        format: String,
        #[arg(long)]
        max_degree: usize,
        #[arg(short = 'o', long)]
        out: Option<std::path::PathBuf>,
    },
}

/// What a successful command found.
pub enum Outcome {
    Done,
    Inconclusive,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.config.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.into()).build_global() {
            eprintln!("gct: {e}");
            return ExitCode::from(3);
        }
    }
    match commands::run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Inconclusive) => ExitCode::from(1),
        Err(e) => {
            eprintln!("gct: {e:#}");
            let defect = e.downcast_ref::<gct::Error>().is_some_and(gct::Error::is_defect);
            ExitCode::from(if defect { 3 } else { 2 })
        }
    }
}
