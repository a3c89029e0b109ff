use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use grt_cli::{
    cmd_compare, cmd_cvt, cmd_nonconvex, cmd_refine, cmd_render, cmd_verify, Outcome, RenderOptions, RunConfig,
    Strategy, EXIT_ERROR, EXIT_VERIFICATION_FAILED,
};

#[derive(Parser)]
#[command(name = "grt", version, about = "Centroidal Voronoi refinement transform toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Run configuration (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output` in the config
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> anyhow::Result<(RunConfig, PathBuf)> {
        let cfg = RunConfig::from_path(&self.config)?;
        let out = self.out.clone().unwrap_or_else(|| cfg.output.clone());
        Ok((cfg, out))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Hull,
    Partition,
}

#[derive(Subcommand)]
enum Command {
    /// Lloyd iteration on the domain: tessellation.json, trace.csv
    Cvt(Common),
    /// Build the refinement tree: tree.json, levels.csv
    Refine(Common),
    /// Check the pointwise bounds and mean-value brackets: bounds.csv
    Verify {
        #[command(flatten)]
        common: Common,
        /// Verify this tree instead of building one
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// Paired CVT / arbitrary trials: compare.csv, summary.json
    Compare(Common),
    /// Draw a tree.json or tessellation.json as render.svg
    Render {
        input: PathBuf,
        /// Draw only this level
        #[arg(long)]
        level: Option<usize>,
        /// Colour cells by their average
        #[arg(long)]
        fill: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Non-convex domains via the convex hull or a supplied convex partition
    Nonconvex {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
    },
}

fn run(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Cvt(common) => {
            let (cfg, out) = common.load()?;
            cmd_cvt(&cfg, &out)
        }
        Command::Refine(common) => {
            let (cfg, out) = common.load()?;
            cmd_refine(&cfg, &out)
        }
        Command::Verify { common, tree } => {
            let (cfg, out) = common.load()?;
            cmd_verify(&cfg, tree.as_deref(), &out)
        }
        Command::Compare(common) => {
            let (cfg, out) = common.load()?;
            cmd_compare(&cfg, &out)
        }
        Command::Render { input, level, fill, out } => cmd_render(&input, RenderOptions { level, fill }, Path::new(&out)),
        Command::Nonconvex { common, strategy } => {
            let (cfg, out) = common.load()?;
            let strategy = match strategy {
                StrategyArg::Hull => Strategy::Hull,
                StrategyArg::Partition => Strategy::Partition,
            };
            cmd_nonconvex(&cfg, strategy, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_ERROR as u8) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(EXIT_VERIFICATION_FAILED as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
