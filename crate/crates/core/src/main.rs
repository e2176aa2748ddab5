//! Command-line interface: run scenario files and canned demos.
//!
//! Exit codes: 0 when every check passes (and, for demos, the expected
//! pattern matches), 1 when a scenario check fails or a matched demo
//! pattern contains a designed failure, 2 on invalid input or an
//! unexpected demo outcome.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qmkit::scenarios::{run_demo, run_scenario, CheckEntry, DemoReport, Scenario, DEMOS};

#[derive(Parser)]
#[command(
    name = "qmkit",
    about = "Finite-dimensional quantum measurement toolkit: joint-measurement, \
             state-reduction, and no-signaling checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks declared in a scenario file
    Check {
        /// Path to a JSON scenario file
        file: PathBuf,
        /// Override the scenario's numeric tolerance
        #[arg(long)]
        tol: Option<f64>,
        /// Override the scenario's seed
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a canned demonstration by name
    Demo {
        name: String,
        /// Numeric tolerance for the demo's checks
        #[arg(long, default_value_t = qmkit::DEFAULT_TOL)]
        tol: f64,
        /// Seed for the demo's random instances
        #[arg(long, default_value_t = qmkit::scenarios::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the available demonstrations
    ListDemos,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check {
            file,
            tol,
            seed,
            format,
        } => check_command(&file, tol, seed, format),
        Command::Demo {
            name,
            tol,
            seed,
            format,
        } => demo_command(&name, tol, seed, format),
        Command::ListDemos => {
            for demo in DEMOS {
                println!("{:<22} {}", demo.name, demo.description);
            }
            ExitCode::SUCCESS
        }
    }
}

fn check_command(
    file: &PathBuf,
    tol: Option<f64>,
    seed: Option<u64>,
    format: Format,
) -> ExitCode {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let mut scenario = match Scenario::from_json(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(t) = tol {
        scenario.tolerance = Some(t);
    }
    if let Some(s) = seed {
        scenario.seed = Some(s);
    }
    let report = match run_scenario(&scenario) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => {
            println!("scenario: {}", file.display());
            for entry in &report.checks {
                print_entry(entry, None);
            }
            println!("overall: {}", verdict(report.overall_pass));
        }
    }
    if report.overall_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn demo_command(name: &str, tol: f64, seed: u64, format: Format) -> ExitCode {
    let report = match run_demo(name, seed, tol) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print_demo_text(&report),
    }
    if !report.pattern_matched {
        eprintln!("error: demo '{name}' did not reproduce its expected pattern");
        return ExitCode::from(2);
    }
    if report.overall_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_demo_text(report: &DemoReport) {
    println!("demo: {}", report.demo);
    println!("  {}", report.description);
    for (entry, expected) in report.checks.iter().zip(&report.expected) {
        let note = if entry.pass == expected.expect_pass && !expected.expect_pass {
            Some("expected failure")
        } else {
            None
        };
        print_entry(entry, note);
    }
    println!(
        "expected pattern matched: {}",
        if report.pattern_matched { "yes" } else { "NO" }
    );
    println!("overall: {}", verdict(report.overall_pass));
}

fn print_entry(entry: &CheckEntry, note: Option<&str>) {
    let mut line = format!(
        "  [{}] {:<36} max deviation {:.3e}",
        if entry.pass { "PASS" } else { "FAIL" },
        entry.name,
        entry.max_deviation,
    );
    if let Some(witness) = &entry.witness {
        line.push_str(&format!("  witness {witness}"));
    }
    if !entry.skipped.is_empty() {
        line.push_str(&format!("  skipped {:?}", entry.skipped));
    }
    if let Some(note) = note {
        line.push_str(&format!("  ({note})"));
    }
    println!("{line}");
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
