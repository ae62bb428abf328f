use std::path::PathBuf;

use andor_core::scalar::{parse_rational, ratio_to_f64};
use andor_core::{GateKind, TreeShape};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

#[derive(Debug, Parser)]
#[command(name = "andor", version, about = "Cost and probability analysis of alpha-beta pruning on uniform AND-OR trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Root gate of the tree.
    #[arg(long, global = true, default_value = "and")]
    pub gate: GateKind,
    #[arg(long, global = true, default_value_t = 2)]
    pub height: u32,
    /// Root probability, as a decimal or `num/den`.
    #[arg(long, global = true, default_value = "1/2")]
    pub r: String,
    /// Sampling grid; the default depends on the command.
    #[arg(long, global = true)]
    pub grid: Option<u32>,
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Emit::Json)]
    pub emit: Emit,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Exact cost and root-probability polynomials.
    Poly,
    /// Certificate that c/p is decreasing, with the sampled curve.
    Lemma1,
    /// Certificate that c'/p' is decreasing, with the sampled curve.
    Lemma2,
    /// AND/OR duality identities.
    Duality,
    /// Every exact identity of the families.
    Identities,
    /// Root of the odd-height threshold polynomial and sampled bounds.
    Alpha,
    /// Two-subtree constrained extremum problem.
    Cep1,
    /// Maximin search over independent distributions with root probability r.
    Eigen,
    /// Minimum cost when the root value is forced.
    Prop,
    /// Reluctant assignments with root value 0 and 1.
    Isets,
    /// Independent versus correlated equilibrium.
    Compare,
    /// Unconstrained maximum of the IID cost.
    Maxiid,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Poly => "poly",
            Command::Lemma1 => "lemma1",
            Command::Lemma2 => "lemma2",
            Command::Duality => "duality",
            Command::Identities => "identities",
            Command::Alpha => "alpha",
            Command::Cep1 => "cep1",
            Command::Eigen => "eigen",
            Command::Prop => "prop",
            Command::Isets => "isets",
            Command::Compare => "compare",
            Command::Maxiid => "maxiid",
        }
    }

    fn default_grid(self) -> u32 {
        match self {
            Command::Poly | Command::Lemma1 | Command::Lemma2 => 1000,
            Command::Duality | Command::Identities => 16,
            Command::Alpha => 500,
            Command::Prop => 4,
            _ => 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub shape: TreeShape,
    pub r: BigRational,
    pub grid: u32,
    pub tol: f64,
    pub output_format: Emit,
    pub output_path: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<RunConfig, String> {
        let shape = TreeShape::new(cli.gate, cli.height).map_err(|e| e.to_string())?;
        let r = parse_rational(&cli.r).map_err(|e| e.to_string())?;
        if r < BigRational::from_integer(0.into()) || r > BigRational::from_integer(1.into()) {
            return Err(format!("--r must lie in [0, 1], got {}", cli.r));
        }
        if !(cli.tol > 0.0 && cli.tol.is_finite()) {
            return Err(format!("--tol must be positive, got {}", cli.tol));
        }
        let grid = cli.grid.unwrap_or(cli.command.default_grid());
        if grid < 2 {
            return Err(format!("--grid must be at least 2, got {grid}"));
        }
        Ok(RunConfig {
            command: cli.command,
            shape,
            r,
            grid,
            tol: cli.tol,
            output_format: cli.emit,
            output_path: cli.out,
            seed: cli.seed,
        })
    }

    pub fn r_f64(&self) -> f64 {
        ratio_to_f64(&self.r)
    }
}
