mod commands;
mod source;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use source::{parse_point, parse_triple, FieldArgs, ProfileParams, QuadArgs, RadiiSpec};

/// Blow-up diagnostics for axisymmetric free-surface flows.
#[derive(Debug, Parser)]
#[command(name = "axiblow", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Root z0 of P'_{3/2}, the bubble angle and the profile constant.
    Angle {
        #[arg(long)]
        json: bool,
        /// Residual tolerance for the root.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Sample a named profile to an AXIFIELD file.
    Profile {
        /// stokes, halfplane, axis, garabedian, deglimit, hpos, hneg or zero.
        name: String,
        #[command(flatten)]
        params: ProfileParams,
        /// Nodes per side.
        #[arg(long, default_value_t = 512)]
        n: usize,
        /// Sampling window x1_min:x1_max:x2_min:x2_max (default: the profile's).
        #[arg(long)]
        window: Option<String>,
        /// Output path; standard output if absent.
        #[arg(long)]
        out: Option<String>,
    },
    /// Monotonicity and frequency functionals over a range of radii (CSV).
    Curves {
        #[command(flatten)]
        source: FieldArgs,
        /// Centre x1,x2 (default: the profile's base point, or the origin).
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        x0: Option<axiblow::Point>,
        /// min:max:count[:log]
        #[arg(long)]
        radii: Option<RadiiSpec>,
        #[command(flatten)]
        quad: QuadArgs,
        /// CSV output path; standard output if absent.
        #[arg(long)]
        out: Option<String>,
        /// Diagnostics JSON path; standard error if absent.
        #[arg(long)]
        diag: Option<String>,
    },
    /// Classify a point (JSON report).
    Analyze {
        #[command(flatten)]
        source: FieldArgs,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        x0: Option<axiblow::Point>,
        #[arg(long)]
        radii: Option<RadiiSpec>,
        #[command(flatten)]
        quad: QuadArgs,
        /// Also compare rescalings with the degenerate limit (origin only).
        #[arg(long)]
        rescale: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Velocity along the segment between two points of three-space (CSV).
    Velocity {
        #[command(flatten)]
        source: FieldArgs,
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        from: [f64; 3],
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        to: [f64; 3],
        /// Number of samples, end points included.
        #[arg(long, default_value_t = 11)]
        n: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the acceptance checks.
    Verify {
        /// Only checks whose id, name or tag contains this.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("AXIBLOW_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .with_context(|| format!("AXIBLOW_THREADS='{v}'"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("setting up the thread pool")?;
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    init_threads()?;
    match cli.command {
        Command::Angle { json, tol } => commands::angle(json, tol),
        Command::Profile {
            name,
            params,
            n,
            window,
            out,
        } => commands::profile(&name, &params, n, window.as_deref(), out.as_deref()),
        Command::Curves {
            source,
            x0,
            radii,
            quad,
            out,
            diag,
        } => commands::curves(&source, x0, radii.as_ref(), &quad, out.as_deref(), diag.as_deref()),
        Command::Analyze {
            source,
            x0,
            radii,
            quad,
            rescale,
            out,
        } => commands::analyze(&source, x0, radii.as_ref(), &quad, rescale, out.as_deref()),
        Command::Velocity {
            source,
            from,
            to,
            n,
            out,
        } => commands::velocity(&source, from, to, n, out.as_deref()),
        Command::Verify { filter, json } => {
            let ok = commands::verify(filter.as_deref(), json)?;
            if !ok {
                std::process::exit(1);
            }
            Ok(())
        }
    }
}
