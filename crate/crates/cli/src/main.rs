use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

mod commands;

/// Registry tables to RDF knowledge graph pipeline.
#[derive(Debug, Parser)]
#[command(name = "registry-kg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert CSV tables to canonical N-Triples with an R2RML mapping
    Convert {
        /// R2RML mapping in Turtle
        mapping: PathBuf,
        /// Input tables, named after the file stem
        csv: Vec<PathBuf>,
        /// Input table under an explicit name, as NAME=PATH
        #[arg(long = "table", value_name = "NAME=PATH")]
        tables: Vec<String>,
        /// Output file (standard output if omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Fail with status 1 if any term was skipped, NULLs included
        #[arg(long)]
        strict: bool,
        /// Write one line per skipped term to this file
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a graph against the shape constraints
    Validate {
        /// Graph in N-Triples (or Turtle, for .ttl files)
        graph: PathBuf,
        /// Shapes file (the bundled shapes if omitted)
        #[arg(long)]
        shapes: Option<PathBuf>,
    },
    /// Run a SELECT query over the union of one or more graphs
    #[command(group(ArgGroup::new("source").required(true).args(["query", "expression"])))]
    Query {
        /// Graphs in N-Triples (or Turtle, for .ttl files)
        #[arg(required = true)]
        graphs: Vec<PathBuf>,
        /// File holding the query
        #[arg(long)]
        query: Option<PathBuf>,
        /// Query text
        #[arg(short = 'e', long = "expression")]
        expression: Option<String>,
    },
    /// Write synthetic PATIENT.csv and TREATMENT.csv
    Synth {
        /// Number of patients
        #[arg(short, long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory, created if needed
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Print triple count, class histogram and per-category edge counts
    Stats {
        graph: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Convert {
            mapping,
            csv,
            tables,
            output,
            strict,
            report,
        } => commands::convert(&mapping, &csv, &tables, output.as_deref(), strict, report.as_deref()),
        Command::Validate { graph, shapes } => commands::validate(&graph, shapes.as_deref()),
        Command::Query {
            graphs,
            query,
            expression,
        } => commands::query(&graphs, query.as_deref(), expression.as_deref()),
        Command::Synth { n, seed, out } => commands::synth(n, seed, &out),
        Command::Stats { graph } => commands::stats(&graph),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
