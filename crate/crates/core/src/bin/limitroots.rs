//! Command-line front end for the limit-root and compactified-Picard
//! computations.

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use limitroots::balanced_degrees::enumerate_balanced;
use limitroots::curve_graph::DualGraph;
use limitroots::limit_root_strata::fiber_inventory;
use limitroots::picard_fiber::{chi_diagnostics, riass_dimension, shat_fiber};
use limitroots::report;

#[derive(Parser)]
#[command(
    name = "limitroots",
    version,
    about = "Combinatorics of limit roots of line bundles on nodal curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Args)]
struct CurveArg {
    /// Curve description: a JSON file path, or a preset name such as
    /// `example-4.2` or `compact-chain:1,1,2`.
    #[arg(long)]
    curve: String,
}

impl CurveArg {
    fn load(&self) -> limitroots::Result<DualGraph> {
        let looks_like_path = self.curve.ends_with(".json")
            || self.curve.contains('/')
            || Path::new(&self.curve).exists();
        if looks_like_path {
            let text = std::fs::read_to_string(&self.curve)
                .map_err(|e| limitroots::Error::CurveJson(format!("{}: {e}", self.curve)))?;
            DualGraph::from_json(&text)
        } else {
            DualGraph::preset(&self.curve)
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Stratify the fiber of limit r-th roots of a class on a curve.
    LimitRoots {
        #[command(flatten)]
        curve: CurveArg,
        /// Root order.
        #[arg(long)]
        r: u64,
        /// Class to take roots of (`zero`, `spin:l=<int>[,...]`, or a
        /// residue list).
        #[arg(long, default_value = "zero")]
        class: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Enumerate balanced multidegrees on all quasistable models.
    Balanced {
        #[command(flatten)]
        curve: CurveArg,
        /// Total degree of the multidegrees.
        #[arg(long)]
        degree: i64,
        /// Keep only stably balanced multidegrees.
        #[arg(long)]
        stable: bool,
        /// Scan blow-up models on worker threads.
        #[arg(long)]
        parallel: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Stratify the compactified Picard fiber of r-th roots of omega^l.
    ShatFiber {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        r: u64,
        /// Power of the dualizing sheaf.
        #[arg(long, default_value_t = 1)]
        l: i64,
        #[arg(long)]
        parallel: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Dimension of the root fiber for two components meeting in k nodes.
    Riass {
        /// Number of nodes.
        #[arg(long, default_value_t = 2)]
        k: u64,
        /// Root order.
        #[arg(long, default_value_t = 3)]
        r: u64,
        /// Residues of l·w on the two components, mod r, as `a,b`.
        #[arg(long, default_value = "0,0")]
        res: String,
        /// Print a k-by-r grid instead of a single case.
        #[arg(long)]
        table: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Regularity of the comparison map from limit roots to the
    /// compactified Picard fiber.
    Chi {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        r: u64,
        #[arg(long, default_value_t = 1)]
        l: i64,
        #[arg(long)]
        parallel: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

fn parse_res(res: &str) -> limitroots::Result<(u64, u64)> {
    let bad = || limitroots::Error::RiassRange(format!("bad residue pair `{res}`"));
    let (a, b) = res.split_once(',').ok_or_else(bad)?;
    let a = a.trim().parse::<u64>().map_err(|_| bad())?;
    let b = b.trim().parse::<u64>().map_err(|_| bad())?;
    Ok((a, b))
}

fn run(cli: Cli) -> limitroots::Result<String> {
    match cli.command {
        Command::LimitRoots {
            curve,
            r,
            class,
            format,
        } => {
            let g = curve.load()?;
            let spec = report::parse_class_spec(&class)?;
            let fiber = fiber_inventory(&g, r, &spec)?;
            Ok(match format {
                Format::Json => report::limit_roots_json(&fiber),
                Format::Table => report::limit_roots_table(&fiber),
            })
        }
        Command::Balanced {
            curve,
            degree,
            stable,
            parallel,
            format,
        } => {
            let g = curve.load()?;
            let models = enumerate_balanced(&g, degree, stable, parallel)?;
            Ok(match format {
                Format::Json => report::balanced_json(&g, degree, stable, &models),
                Format::Table => report::balanced_table(&g, degree, stable, &models),
            })
        }
        Command::ShatFiber {
            curve,
            r,
            l,
            parallel,
            format,
        } => {
            let g = curve.load()?;
            let fiber = shat_fiber(&g, r, l, parallel)?;
            Ok(match format {
                Format::Json => report::shat_json(&fiber),
                Format::Table => report::shat_table(&fiber),
            })
        }
        Command::Riass {
            k,
            r,
            res,
            table,
            format,
        } => {
            let (a, b) = parse_res(&res)?;
            if table {
                return report::riass_grid(a);
            }
            let outcome = riass_dimension(k, r, a, b)?;
            Ok(match format {
                Format::Json => report::riass_json(&outcome),
                Format::Table => report::riass_table(&outcome),
            })
        }
        Command::Chi {
            curve,
            r,
            l,
            parallel,
            format,
        } => {
            let g = curve.load()?;
            let diag = chi_diagnostics(&g, r, l, parallel)?;
            Ok(match format {
                Format::Json => report::chi_json(&diag),
                Format::Table => report::chi_table(&diag),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
