mod commands;
mod input;
mod report;
mod svg;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CliError, Outcome};
use report::ReportDocument;

#[derive(Parser)]
#[command(name = "tropconic", version, about = "Tropical conics through two or three points, computed exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Tropical Plücker vector of two or three points.
    Eval {
        /// Points separated by ';', coordinates by ','; two coordinates mean (0, x1, x2).
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        arity: Option<u8>,
    },
    /// Cone fingerprint, plane type and configuration type of three points.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Newton polytope of the two- or three-point map.
    Polytope {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        arity: u8,
    },
    /// The 17 generic types of triples.
    Table1,
    /// Trees of the two-point map and their coarsening cycle.
    Hilb2,
    /// Partition of the Z-plane for X = (0, 0) and a fixed Y.
    Slice {
        #[arg(long, allow_hyphen_values = true, default_value = "2,3")]
        y: String,
        /// xmin,xmax,ymin,ymax; defaults to the bounded cells plus margin 5.
        #[arg(long = "box", allow_hyphen_values = true)]
        clip: Option<String>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Symbolic and tropical checks of the ideal generators.
    Verify {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn run(cmd: &Command) -> Result<(&'static str, Outcome), CliError> {
    Ok(match cmd {
        Command::Eval { points, arity } => ("eval", commands::eval(points, arity.map(usize::from))?),
        Command::Classify { points } => ("classify", commands::classify(points)?),
        Command::Polytope { arity } => ("polytope", commands::polytope(usize::from(*arity))?),
        Command::Table1 => ("table1", commands::table1()?),
        Command::Hilb2 => ("hilb2", commands::hilb2()?),
        Command::Slice { y, clip, svg } => ("slice", commands::slice(y, clip.as_deref(), svg.as_deref())?),
        Command::Verify { samples, seed } => ("verify", commands::verify(*samples, *seed)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, outcome) = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let doc = ReportDocument::new(name, outcome.input, outcome.results);
    let text = doc.to_pretty() + "\n";
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
        }
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: {name}: a check did not hold, see the report");
        ExitCode::from(1)
    }
}
