use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use spintensor::Orientation;
use spintensor_cli::{run_verify_canonical, run_verify_scene, CorruptSpec, Format, RunReport, SceneConfig};

#[derive(Parser)]
#[command(name = "spintensor", version, about = "Verify spin-tensor identities and spinor connection scenes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Right,
    Left,
}

#[derive(clap::Args)]
struct Output {
    /// Report format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate every algebraic identity on the canonical equipment
    VerifyCanonical {
        #[arg(long, value_enum, default_value = "right")]
        orientation: OrientationArg,
        /// Negate one entry G^{r rbar}_p before checking, given as `p,r,rbar`
        #[arg(long)]
        corrupt: Option<CorruptSpec>,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate connections and concordance residuals for a scene file
    VerifyScene {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

fn emit(report: &RunReport, output: &Output) -> ExitCode {
    let text = report.render(output.format);
    match &output.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.overall_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::VerifyCanonical {
            orientation,
            corrupt,
            output,
        } => {
            let orientation = match orientation {
                OrientationArg::Right => Orientation::Right,
                OrientationArg::Left => Orientation::Left,
            };
            match run_verify_canonical(orientation, corrupt) {
                Ok(r) => emit(&r, &output),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::VerifyScene { config, output } => {
            let report = SceneConfig::load(&config).and_then(|c| run_verify_scene(&c));
            match report {
                Ok(r) => emit(&r, &output),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
