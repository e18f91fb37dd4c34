//! Scenario runner for the Ricci-flow dynamo toolkit. Every subcommand
//! reads one TOML scenario file and emits a deterministic JSON run record;
//! trajectory commands also write CSV.
//!
//! Exit codes: 0 success, 1 invariant/oracle failure, 2 config error,
//! 3 numerical singularity.

mod commands;
mod config;
mod jsonout;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rdl_core::energy::RateVariant;

use commands::Invocation;

#[derive(Parser)]
#[command(
    name = "rdl",
    version,
    about = "Ricci-flow dynamo toolkit: curvature, flow evolution, kinematic \
             decomposition, magnetic growth, and energy-rate diagnostics",
    after_help = "Environment:\n  RDL_SEED  reserved for forward compatibility; \
                  currently a no-op (the toolkit has no stochastic components)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ricci curvature at probe points, Einstein fit, and symmetry check
    Geometry(CommonArgs),
    /// Evolve the metric under the curvature flow; CSV trajectory
    Flow(CommonArgs),
    /// Split the covariant velocity gradient into vorticity/shear/expansion
    Decompose(CommonArgs),
    /// Predicted vs empirical magnetic growth rate, operator residual; CSV
    Growth(CommonArgs),
    /// Magnetic energy and its rate variants, with the growth-bound verdict
    Energy(CommonArgs),
    /// Growth-bound verdict from directly supplied scalars
    Classify(CommonArgs),
    /// Run the oracle cross-check suite
    Verify(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario file (TOML)
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Directory for JSON/CSV output
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,

    /// Evaluation point, comma-separated
    #[arg(long, value_name = "X,Y,Z", value_parser = parse_probe)]
    probe: Option<Probe>,

    /// Energy-rate integrand variant (default: report both)
    #[arg(long, value_enum, value_name = "VARIANT")]
    variant: Option<VariantArg>,

    /// Include the vorticity projection in the headline growth prediction
    #[arg(long)]
    with_vorticity: bool,
}

#[derive(Clone, Copy, Debug)]
struct Probe([f64; 3]);

fn parse_probe(s: &str) -> Result<Probe, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated values, got {}", parts.len()));
    }
    let mut p = [0.0f64; 3];
    for (slot, part) in p.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("bad coordinate '{part}': {e}"))?;
        if !slot.is_finite() {
            return Err(format!("coordinate '{part}' is not finite"));
        }
    }
    Ok(Probe(p))
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Eq27,
    Eq29,
}

impl From<VariantArg> for RateVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Eq27 => RateVariant::Eq27,
            VariantArg::Eq29 => RateVariant::Eq29Chain,
        }
    }
}

impl CommonArgs {
    fn invocation(&self) -> Invocation {
        Invocation {
            config: self.config.clone(),
            out: self.out.clone(),
            probe: self.probe.map(|p| p.0),
            variant: self.variant.map(Into::into),
            with_vorticity: self.with_vorticity,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let (name, run): (&str, fn(&Invocation) -> Result<i32, commands::CmdError>) =
        match &cli.command {
            Command::Geometry(_) => ("geometry", commands::cmd_geometry),
            Command::Flow(_) => ("flow", commands::cmd_flow),
            Command::Decompose(_) => ("decompose", commands::cmd_decompose),
            Command::Growth(_) => ("growth", commands::cmd_growth),
            Command::Energy(_) => ("energy", commands::cmd_energy),
            Command::Classify(_) => ("classify", commands::cmd_classify),
            Command::Verify(_) => ("verify", commands::cmd_verify),
        };
    let args = match &cli.command {
        Command::Geometry(a)
        | Command::Flow(a)
        | Command::Decompose(a)
        | Command::Growth(a)
        | Command::Energy(a)
        | Command::Classify(a)
        | Command::Verify(a) => a,
    };
    match run(&args.invocation()) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("rdl {name}: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
