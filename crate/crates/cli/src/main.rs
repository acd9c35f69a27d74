use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use c21_cli::output::{metrics_csv, plot_csv, reports_json, summary_csv};
use c21_cli::suites::{radial_plot, radial_solution};
use c21_cli::{run_suite, status_line, write_outputs, Format, Suite, SuiteConfig, UsageError};
use c21_core::gallery;

#[derive(Parser)]
#[command(
    name = "c21",
    version,
    about = "Numerical C^{2,1} certificates for square-root lifts and Monge-Ampere graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite; exit 0 if every report passes, 1 otherwise.
    Verify(VerifyArgs),
    /// Build an explicit solution and write its table.
    Construct {
        #[command(subcommand)]
        what: ConstructCommand,
    },
    /// Inspect the function gallery.
    Gallery {
        #[command(subcommand)]
        what: GalleryCommand,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// lemma21, lemma22, thm23, thm25, cor26, radial, surface, strip, counterexamples or all.
    suite: String,
    /// Gallery selector, e.g. `cusp:p=3`.
    #[arg(long)]
    family: Option<String>,
    /// Named radial profile or a two-column CSV `r,psi`.
    #[arg(long)]
    profile: Option<String>,
    /// CSV `x,y,value` of a sampled field on a uniform grid.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Samples per axis (trials for lemma22).
    #[arg(long)]
    grid: Option<usize>,
    /// Absolute tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Disc radius of the strip suite.
    #[arg(long)]
    radius: Option<f64>,
    /// Directory for reports and plot data; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum ConstructCommand {
    /// Radial Monge-Ampere solution for a profile.
    Radial {
        /// Named profile or a two-column CSV `r,psi`.
        #[arg(long, default_value = "r3")]
        profile: String,
        /// Rows of the table.
        #[arg(long, default_value_t = 181)]
        rows: usize,
        /// Directory for the table; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GalleryCommand {
    /// Every family with its parameters and traits, as JSON.
    List,
}

fn verify(a: VerifyArgs) -> Result<bool, UsageError> {
    let cfg = SuiteConfig {
        suite: Some(a.suite.parse::<Suite>()?),
        family: a.family,
        profile: a.profile,
        field: a.field,
        grid: a.grid,
        tol: a.tol,
        radius: a.radius,
    };
    let out = run_suite(&cfg)?;
    for (suite, r) in &out.reports {
        eprintln!("{}", status_line(*suite, r));
    }
    match &a.out {
        Some(dir) => {
            let written =
                write_outputs(dir, &out, a.format).map_err(|e| UsageError(format!("{}: {e}", dir.display())))?;
            eprintln!("wrote {} files to {}", written.len(), dir.display());
        }
        None => {
            let body = match a.format {
                Format::Json => reports_json(&out.reports) + "\n",
                Format::Csv => summary_csv(&out.reports) + &metrics_csv(&out.reports),
            };
            print(&body)?;
        }
    }
    let passed = out.passed();
    eprintln!("{}", if passed { "all reports passed" } else { "some reports failed" });
    Ok(passed)
}

fn print(s: &str) -> Result<(), UsageError> {
    io::stdout().write_all(s.as_bytes()).map_err(|e| UsageError(e.to_string()))
}

fn construct_radial(profile: String, rows: usize, out: Option<PathBuf>) -> Result<bool, UsageError> {
    if rows < 2 {
        return Err(UsageError("--rows must be at least 2".into()));
    }
    let cfg = SuiteConfig { profile: Some(profile), ..SuiteConfig::default() };
    let (sol, name, note) = radial_solution(&cfg)?;
    if let Some(n) = note {
        eprintln!("note: {n}");
    }
    let plot = radial_plot(&sol, &name, rows);
    match out {
        Some(dir) => {
            std::fs::create_dir_all(&dir).map_err(|e| UsageError(e.to_string()))?;
            let path = dir.join(format!("radial.{}.csv", c21_cli::output::sanitize(&name)));
            let mut f = File::create(&path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            f.write_all(plot_csv(&plot).as_bytes()).map_err(|e| UsageError(e.to_string()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print(&plot_csv(&plot))?,
    }
    Ok(true)
}

fn gallery_list() -> Result<bool, UsageError> {
    let fams = gallery::all_families().map_err(|e| UsageError(e.to_string()))?;
    let list: Vec<_> = fams.iter().map(|f| f.describe()).collect();
    print(&(serde_json::to_string_pretty(&list).expect("gallery serializes") + "\n"))?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Construct { what: ConstructCommand::Radial { profile, rows, out } } => {
            construct_radial(profile, rows, out)
        }
        Command::Gallery { what: GalleryCommand::List } => gallery_list(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
