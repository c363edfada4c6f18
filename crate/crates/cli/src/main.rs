use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fliessnet::sim::DEFAULT_STEPS;
use fliessnet::{
    compose_single, format_coefficient, parse_network_spec, simulate_network, verify_order,
    ConstantInput, NetworkKind, NetworkSpec, Series, Word,
};
use serde_json::{json, Value};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "fliessnet",
    version,
    about = "Generating series of Chen–Fliess networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficient table of the network's generating series.
    Coeffs(CoeffsArgs),
    /// Composition product of a cascade spec's outer and inner series.
    Compose(TableArgs),
    /// Integrate the truncated state equations; CSV of t, y_1, …
    Simulate(SimArgs),
    /// Truncation error of the generating series against the simulation.
    Verify(VerifyArgs),
    /// Run the built-in acceptance checks.
    Selftest,
}

#[derive(Args)]
struct TableArgs {
    /// Network spec (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Truncation degree N; defaults to the spec's degree.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    output: Format,
}

#[derive(Args)]
struct CoeffsArgs {
    #[command(flatten)]
    table: TableArgs,
    /// 1-based outputs to report; all by default.
    #[arg(long, value_delimiter = ',')]
    outputs: Option<Vec<usize>>,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long)]
    input: PathBuf,
    /// Truncation degree of the state; defaults to the spec's degree.
    #[arg(long)]
    degree: Option<usize>,
    /// Horizon.
    #[arg(long = "T")]
    horizon: f64,
    /// Constant external inputs, one per input channel.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    v: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    #[arg(long, value_delimiter = ',')]
    outputs: Option<Vec<usize>>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "T")]
    horizon: f64,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    v: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    /// Truncation degrees to compare.
    #[arg(long = "Ns", value_delimiter = ',', required = true)]
    ns: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

/// Failures that are not the user's fault.
#[derive(Debug)]
struct Internal(String);

impl std::fmt::Display for Internal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Internal {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = std::panic::catch_unwind(|| run(cli));
    match result {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Internal>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
        Err(_) => ExitCode::from(2),
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut out = io::stdout().lock();
    let text = match cli.command {
        Command::Coeffs(args) => coeffs(&args)?,
        Command::Compose(args) => compose(&args)?,
        Command::Simulate(args) => simulate(&args)?,
        Command::Verify(args) => verify(&args)?,
        Command::Selftest => {
            let outcomes = fliessnet::selftest::run_all();
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            writeln!(out, "# fliessnet {VERSION}")?;
            for o in &outcomes {
                writeln!(out, "{o}")?;
            }
            writeln!(out, "{} passed, {failed} failed", outcomes.len() - failed)?;
            if failed > 0 {
                return Err(Internal(format!("{failed} self-test check(s) failed")).into());
            }
            return Ok(());
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

/// Reads a spec, optionally overriding its degree before validation so
/// builtin generators are expanded to the requested length.
fn load_spec(path: &Path, degree: Option<usize>) -> Result<NetworkSpec> {
    let raw = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let document = match degree {
        None => raw,
        Some(n) => {
            let mut value: Value = serde_json::from_str(&raw)
                .with_context(|| format!("{}: invalid JSON", path.display()))?;
            match value.as_object_mut() {
                Some(obj) => {
                    obj.insert("degree".into(), json!(n));
                }
                None => bail!("{}: document: expected a JSON object", path.display()),
            }
            value.to_string()
        }
    };
    parse_network_spec(&document).with_context(|| format!("{}", path.display()))
}

fn select_outputs(requested: &Option<Vec<usize>>, count: usize) -> Result<Vec<usize>> {
    match requested {
        None => Ok((1..=count).collect()),
        Some(list) => {
            for &k in list {
                if k == 0 || k > count {
                    bail!("--outputs: output {k} out of range 1..={count}");
                }
            }
            Ok(list.clone())
        }
    }
}

fn word_text(word: &Word) -> String {
    word.to_tokens()
}

fn render_table(tables: &[(usize, Series)], degree: usize, format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Text => {
            s.push_str(&format!("# fliessnet {VERSION}\n"));
            for (k, d) in tables {
                s.push_str(&format!("# output {k}, N = {degree}\n"));
                for (word, c) in d.iter().filter(|(w, _)| w.len() <= degree) {
                    s.push_str(&format!("{word}\t{}\n", format_coefficient(c)));
                }
            }
        }
        Format::Csv => {
            s.push_str(&format!("# fliessnet {VERSION}\noutput,word,coeff\n"));
            for (k, d) in tables {
                for word in d.alphabet().words(degree) {
                    let c = d.coefficient(&word);
                    s.push_str(&format!(
                        "{k},{},{}\n",
                        word_text(&word),
                        format_coefficient(&c)
                    ));
                }
            }
        }
        Format::Json => {
            let outputs: Vec<Value> = tables
                .iter()
                .map(|(k, d)| {
                    let terms: Vec<Value> = d
                        .alphabet()
                        .words(degree)
                        .iter()
                        .map(|w| {
                            json!({ "word": word_text(w), "coeff": format_coefficient(&d.coefficient(w)) })
                        })
                        .collect();
                    json!({ "output": k, "terms": terms })
                })
                .collect();
            let doc = json!({ "version": VERSION, "degree": degree, "outputs": outputs });
            s = serde_json::to_string_pretty(&doc).expect("plain JSON values");
            s.push('\n');
        }
    }
    s
}

fn coeffs(args: &CoeffsArgs) -> Result<String> {
    let spec = load_spec(&args.table.input, args.table.degree)?;
    let rep = spec.build()?;
    let degree = spec.degree;
    let mut tables = Vec::new();
    for k in select_outputs(&args.outputs, rep.output_count())? {
        tables.push((k, rep.generating_series(k, degree)?));
    }
    Ok(render_table(&tables, degree, args.table.output))
}

fn compose(args: &TableArgs) -> Result<String> {
    let spec = load_spec(&args.input, args.degree)?;
    if spec.kind != NetworkKind::Cascade {
        bail!(
            "{}: kind: compose needs a cascade spec, found {}",
            args.input.display(),
            spec.kind
        );
    }
    let d = compose_single(spec.series(1), spec.series(2), spec.degree)?;
    Ok(render_table(&[(1, d)], spec.degree, args.output))
}

fn constant_input(
    horizon: f64,
    v: &[f64],
    steps: usize,
    spec: &NetworkSpec,
) -> Result<ConstantInput> {
    if steps == 0 {
        bail!("--steps must be at least 1");
    }
    if v.len() != spec.input_count() {
        bail!(
            "--v: expected {} value(s), got {}",
            spec.input_count(),
            v.len()
        );
    }
    ConstantInput::new(v.to_vec(), horizon, steps).context("--T")
}

fn simulate(args: &SimArgs) -> Result<String> {
    let spec = load_spec(&args.input, args.degree)?;
    let input = constant_input(args.horizon, &args.v, args.steps, &spec)?;
    let result = simulate_network(&spec, &input, spec.degree.max(1))?;
    let outputs = select_outputs(&args.outputs, result.outputs.len())?;
    let mut s = format!("# fliessnet {VERSION}\nt");
    for k in &outputs {
        s.push_str(&format!(",y_{k}"));
    }
    s.push('\n');
    for (i, t) in result.times.iter().enumerate() {
        s.push_str(&format!("{t:e}"));
        for &k in &outputs {
            s.push_str(&format!(",{:e}", result.outputs[k - 1][i]));
        }
        s.push('\n');
    }
    Ok(s)
}

fn verify(args: &VerifyArgs) -> Result<String> {
    let spec = load_spec(&args.input, None)?;
    let input = constant_input(args.horizon, &args.v, args.steps, &spec)?;
    let table = verify_order(&spec, &input, &args.ns)?;
    let mut s = format!("# fliessnet {VERSION}\nN,error\n");
    for (n, e) in table {
        s.push_str(&format!("{n},{e:e}\n"));
    }
    Ok(s)
}
