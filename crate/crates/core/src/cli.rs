//! Command-line front end: `transform`, `validate` and `bench`.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{render_table, run_bench};
use crate::corpus::Profile;
use crate::data_flow::DataFlowAlgorithm;
use crate::frontend::{load_ast_json, parse_java};
use crate::model::{graphs_from_xml, graphs_to_dot, graphs_to_xml, EdgeSet};
use crate::pipeline::{transform_unit, Options, PhaseTimes};
use crate::validator::{check, parse_assertions};

#[derive(Debug, Parser)]
#[command(name = "flowgraphs", version, about = "Java-subset flow graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transform a source file into flow graphs.
    Transform(TransformArgs),
    /// Check assertions against a serialized flow graph.
    Validate(ValidateArgs),
    /// Time each phase on synthetic methods.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Xml,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Edges {
    Cf,
    Df,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Traversal,
    Fixpoint,
}

impl From<Algorithm> for DataFlowAlgorithm {
    fn from(a: Algorithm) -> Self {
        match a {
            Algorithm::Traversal => DataFlowAlgorithm::Traversal,
            Algorithm::Fixpoint => DataFlowAlgorithm::Fixpoint,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Straight,
    Nested,
    Branchy,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Straight => Profile::Straight,
            ProfileArg::Nested => Profile::Nested,
            ProfileArg::Branchy => Profile::Branchy,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct TransformArgs {
    pub input: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "xml")]
    pub format: Format,
    /// Links drawn in DOT output.
    #[arg(long, value_enum, default_value = "both")]
    pub edges: Edges,
    #[arg(long)]
    pub no_controlflow: bool,
    #[arg(long)]
    pub no_dataflow: bool,
    #[arg(long, value_enum, default_value = "traversal")]
    pub dataflow: Algorithm,
    /// Print per-phase timings to standard error.
    #[arg(long)]
    pub stats: bool,
    /// Read the input as a JSON syntax tree.
    #[arg(long)]
    pub ast_json: bool,
}

#[derive(Debug, clap::Args)]
pub struct ValidateArgs {
    pub model: PathBuf,
    pub assertions: PathBuf,
    /// Graph to check; required when the model holds several.
    #[arg(long)]
    pub method: Option<String>,
}

#[derive(Debug, clap::Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    pub sizes: Vec<usize>,
    #[arg(long, value_enum, default_value = "straight")]
    pub profile: ProfileArg,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long, value_enum, default_value = "traversal")]
    pub dataflow: Algorithm,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match cli.command {
        Command::Transform(args) => cmd_transform(&args, out, err),
        Command::Validate(args) => cmd_validate(&args, out, err),
        Command::Bench(args) => cmd_bench(&args, out),
    }
}

fn write_output(path: Option<&PathBuf>, text: &str, out: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => out.write_all(text.as_bytes()),
    }
}

pub fn cmd_transform(args: &TransformArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if args.no_controlflow && !args.no_dataflow {
        let _ = writeln!(
            err,
            "error: --no-controlflow requires --no-dataflow, data flow is derived from control flow"
        );
        return EXIT_USAGE;
    }
    let mut times = PhaseTimes::default();
    let start = Instant::now();
    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", args.input.display());
            return EXIT_USAGE;
        }
    };
    let unit = if args.ast_json {
        load_ast_json(&text)
    } else {
        parse_java(&text)
    };
    times.read = start.elapsed();
    let unit = match unit {
        Ok(u) => u,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", args.input.display());
            return EXIT_FAILURE;
        }
    };
    let options = Options {
        control_flow: !args.no_controlflow,
        data_flow: (!args.no_dataflow).then(|| args.dataflow.into()),
    };
    let graphs = match transform_unit(&unit, options, &mut times) {
        Ok(g) => g,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", args.input.display());
            return EXIT_FAILURE;
        }
    };
    let start = Instant::now();
    let rendered = match args.format {
        Format::Xml => graphs_to_xml(&graphs),
        Format::Dot => {
            let edges = match args.edges {
                Edges::Cf => EdgeSet::Cf,
                Edges::Df => EdgeSet::Df,
                Edges::Both => EdgeSet::Both,
            };
            graphs_to_dot(&graphs, edges)
        }
    };
    let written = write_output(args.output.as_ref(), &rendered, out);
    times.write = start.elapsed();
    if let Err(e) = written {
        let _ = writeln!(err, "error: writing output: {e}");
        return EXIT_USAGE;
    }
    if args.stats {
        let _ = writeln!(err, "phase,micros");
        for (name, d) in PhaseTimes::NAMES.iter().zip(times.as_array()) {
            let _ = writeln!(err, "{name},{}", d.as_micros());
        }
    }
    EXIT_OK
}

pub fn cmd_validate(args: &ValidateArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let read = |p: &PathBuf| std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()));
    let (model, assertions) = match (read(&args.model), read(&args.assertions)) {
        (Ok(m), Ok(a)) => (m, a),
        (Err(e), _) | (_, Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let graphs = match graphs_from_xml(&model) {
        Ok(g) => g,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", args.model.display());
            return EXIT_USAGE;
        }
    };
    let assertions = match parse_assertions(&assertions) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", args.assertions.display());
            return EXIT_USAGE;
        }
    };
    let graph = match &args.method {
        Some(name) => graphs.iter().find(|g| g.method_name() == name),
        None if graphs.len() == 1 => graphs.first(),
        None => {
            let _ = writeln!(
                err,
                "error: the model holds {} graphs, choose one with --method",
                graphs.len()
            );
            return EXIT_USAGE;
        }
    };
    let Some(graph) = graph else {
        let _ = writeln!(
            err,
            "error: no graph for method `{}`",
            args.method.as_deref().unwrap_or_default()
        );
        return EXIT_USAGE;
    };
    let report = check(graph, &assertions);
    let _ = out.write_all(report.render().as_bytes());
    if report.all_hold() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> i32 {
    let rows = run_bench(args.profile.into(), &args.sizes, args.repeats, args.dataflow.into());
    let _ = out.write_all(render_table(&rows).as_bytes());
    EXIT_OK
}
