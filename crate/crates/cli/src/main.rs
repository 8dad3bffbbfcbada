// Copyright 2026 The lnnsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! `lnnsynth`: nearest-neighbour synthesis, optimisation, verification and
//! exhaustive search from the command line.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lnnsynth::pipeline::{synthesize_optimized, Effort};
use lnnsynth::real::RealDocument;
use lnnsynth::report::{table_report, ReportOptions};
use lnnsynth::search::{
    enumerate_optimal_mct, Convention, CostHistogram, Exec, Limits, LnnSearch, StopReason,
};
use lnnsynth::semantics::{entangling_input, equivalent};
use lnnsynth::templates::{
    builtin_templates, find_templates, optimize, parse_template_file, write_template_file,
    TemplateBase,
};
use lnnsynth::transform::{synthesize_lnn, Direction, ModelKind, TransformOptions};
use lnnsynth::Circuit;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "lnnsynth",
    version,
    about = "Nearest-neighbour synthesis of reversible circuits"
)]
struct Cli {
    /// Run searches and reports on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn an MCT or primitive circuit into a nearest-neighbour circuit.
    Transform(TransformArgs),
    /// Apply template rewriting to a primitive circuit.
    Optimize(OptimizeArgs),
    /// Report properties of a circuit, or compare two.
    Verify(VerifyArgs),
    /// Enumerate minimal circuits for every 3-line function.
    Enumerate(EnumerateArgs),
    /// Compare synthesis flows over every 3-line function.
    Report(ReportArgs),
    /// Discover templates and write them as a template file.
    Templates(TemplatesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Model1,
    Model2,
    Model3,
}

impl From<Model> for ModelKind {
    fn from(m: Model) -> Self {
        match m {
            Model::Model1 => ModelKind::Model1,
            Model::Model2 => ModelKind::Model2,
            Model::Model3 => ModelKind::Model3,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Toward {
    Smaller,
    Larger,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Output REAL file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optimise the result with templates.
    #[arg(long)]
    optimize: bool,
    /// Template file replacing the shipped base.
    #[arg(long)]
    templates: Option<PathBuf>,
    /// Free lines MCT decomposition may borrow.
    #[arg(long, default_value_t = 1)]
    working_lines: usize,
    /// Ladder model preference for long-range CNOTs; repeat to list several.
    #[arg(long = "model", value_enum)]
    models: Vec<Model>,
    /// Direction a Toffoli target moves when it sits between its controls.
    #[arg(long, value_enum, default_value = "smaller")]
    direction: Toward,
    /// How many transformation choices to try when optimising.
    #[arg(long, default_value_t = Effort::Thorough)]
    effort: Effort,
    /// Print a JSON summary instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    templates: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Second circuit to check for exact equivalence.
    #[arg(long)]
    against: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Lnn,
    Mct,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long, value_enum, default_value = "lnn")]
    kind: Kind,
    #[arg(long, default_value_t = Convention::Separable)]
    convention: Convention,
    #[arg(long)]
    max_depth: Option<usize>,
    /// Memory budget in bytes; K, M and G suffixes are accepted.
    #[arg(long, value_parser = parse_bytes)]
    mem_budget: Option<usize>,
    /// Continue from a checkpoint written by `--checkpoint`.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Write a checkpoint after the run.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Histogram JSON file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write one minimal circuit per function.
    #[arg(long)]
    witnesses: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    templates: Option<PathBuf>,
    #[arg(long, default_value_t = Effort::Quick)]
    effort: Effort,
    /// Depth limit for the optimal column; unlimited by default.
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long, value_parser = parse_bytes)]
    mem_budget: Option<usize>,
    #[arg(long, default_value_t = Convention::Separable)]
    convention: Convention,
    /// Leave out the optimal column.
    #[arg(long)]
    skip_optimal: bool,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TemplatesArgs {
    /// Largest identity circuit to look for.
    #[arg(long, default_value_t = 6)]
    max_size: usize,
    #[arg(long, default_value_t = 3)]
    lines: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_bytes(s: &str) -> Result<usize, String> {
    let (digits, scale) = match s.char_indices().last() {
        Some((i, 'K' | 'k')) => (&s[..i], 1 << 10),
        Some((i, 'M' | 'm')) => (&s[..i], 1 << 20),
        Some((i, 'G' | 'g')) => (&s[..i], 1 << 30),
        _ => (s, 1),
    };
    let n: usize = digits
        .parse()
        .map_err(|_| format!("bad byte count `{s}`"))?;
    n.checked_mul(scale)
        .filter(|&b| b > 0)
        .ok_or_else(|| format!("bad byte count `{s}`"))
}

fn read_real(path: &Path) -> Result<RealDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RealDocument::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_base(path: Option<&Path>) -> Result<TemplateBase> {
    match path {
        None => Ok(TemplateBase::standard()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let templates =
                parse_template_file(&text).with_context(|| format!("parsing {}", p.display()))?;
            Ok(TemplateBase::new(templates))
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// Checks a rewritten circuit against its source, then serialises it and
/// checks that the text parses back to the same circuit.
fn verified_real(
    source: &Circuit,
    result: &Circuit,
    doc: &RealDocument,
    require_lnn: bool,
) -> Result<String> {
    ensure!(
        equivalent(source, result)?,
        "verification failed: result is not equivalent to the input"
    );
    if require_lnn {
        ensure!(
            result.is_lnn(),
            "verification failed: result is not nearest-neighbour"
        );
    }
    if entangling_input(source).is_none() {
        if let Some(x) = entangling_input(result) {
            bail!("verification failed: result entangles basis input {x}");
        }
    }
    // the input's comments describe the input
    let out = if result == source {
        doc.clone()
    } else {
        RealDocument {
            comments: Vec::new(),
            ..doc.with_circuit(result.clone())
        }
    };
    let text = out.write();
    let back = RealDocument::parse(&text).context("re-parsing the written circuit")?;
    ensure!(
        back.circuit == *result,
        "written circuit does not parse back to itself"
    );
    Ok(text)
}

fn exec(cli: &Cli) -> Exec {
    if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn cmd_transform(args: &TransformArgs) -> Result<()> {
    let doc = read_real(&args.input)?;
    let mut opts = TransformOptions {
        mct_working_lines: args.working_lines,
        direction_tiebreak: match args.direction {
            Toward::Smaller => Direction::TowardSmaller,
            Toward::Larger => Direction::TowardLarger,
        },
        ..TransformOptions::default()
    };
    if !args.models.is_empty() {
        opts.model_preference = args.models.iter().map(|&m| m.into()).collect();
    }
    let source = &doc.circuit;
    let (before, result) = if args.optimize {
        let base = load_base(args.templates.as_deref())?;
        let s = synthesize_optimized(source, &opts, &base, args.effort)?;
        (s.unoptimized.len(), s.circuit)
    } else {
        let c = synthesize_lnn(source, &opts)?;
        (c.len(), c)
    };
    let text = verified_real(source, &result, &doc, true)?;
    write_output(args.out.as_deref(), &text)?;
    let summary = json!({
        "input_gates": source.len(),
        "transformed_gates": before,
        "output_gates": result.len(),
        "lines": source.num_lines(),
        "optimized": args.optimize,
    });
    if args.json {
        eprintln!("{summary}");
    } else {
        eprintln!(
            "{} gates -> {} nearest-neighbour gates{}",
            source.len(),
            before,
            if args.optimize {
                format!(" -> {} after optimisation", result.len())
            } else {
                String::new()
            }
        );
    }
    Ok(())
}

fn cmd_optimize(args: &OptimizeArgs) -> Result<()> {
    let doc = read_real(&args.input)?;
    let base = load_base(args.templates.as_deref())?;
    let (result, trace) = optimize(&doc.circuit, &base)?;
    let text = verified_real(&doc.circuit, &result, &doc, false)?;
    write_output(args.out.as_deref(), &text)?;
    if args.json {
        eprintln!(
            "{}",
            json!({"input_gates": doc.circuit.len(), "output_gates": result.len(), "steps": trace.steps})
        );
    } else {
        eprintln!(
            "{} gates -> {} gates in {} rewrites",
            doc.circuit.len(),
            result.len(),
            trace.steps.len()
        );
    }
    Ok(())
}

fn properties(c: &Circuit) -> Value {
    let entangling = entangling_input(c);
    json!({
        "lines": c.num_lines(),
        "gates": c.len(),
        "lnn": c.is_lnn(),
        "entangled": entangling.is_some(),
        "entangling_input": entangling.map(|x| format!("{x:0width$b}", width = c.num_lines())),
        "quantum_cost": c.quantum_cost().ok(),
    })
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let a = read_real(&args.input)?.circuit;
    let mut report = json!({ "circuit": properties(&a) });
    let mut ok = true;
    if let Some(path) = &args.against {
        let b = read_real(path)?.circuit;
        let eq = equivalent(&a, &b)?;
        ok = eq;
        report["other"] = properties(&b);
        report["equivalent"] = json!(eq);
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        let show = |label: &str, p: &Value| {
            println!("{label}: {} lines, {} gates", p["lines"], p["gates"]);
            println!("  lnn: {}", p["lnn"]);
            match p["entangling_input"].as_str() {
                Some(x) => println!("  entangled: true (input {x})"),
                None => println!("  entangled: false"),
            }
            match p["quantum_cost"].as_u64() {
                Some(q) => println!("  quantum cost: {q}"),
                None => println!("  quantum cost: n/a (contains MCT gates)"),
            }
        };
        show("circuit", &report["circuit"]);
        if args.against.is_some() {
            show("other", &report["other"]);
            println!("equivalent: {}", report["equivalent"]);
        }
    }
    Ok(ok)
}

fn stop_name(r: StopReason) -> &'static str {
    match r {
        StopReason::Exhausted => "exhausted",
        StopReason::DepthLimit => "depth-limit",
        StopReason::MemoryBudget => "memory-budget",
    }
}

fn witness_line(images: &[u32], c: &Circuit) -> String {
    let f: Vec<String> = images.iter().map(u32::to_string).collect();
    let g: Vec<String> = c.gates().iter().map(ToString::to_string).collect();
    format!("{}: {}\n", f.join(","), g.join(" "))
}

fn cmd_enumerate(args: &EnumerateArgs, exec: Exec) -> Result<()> {
    let started = unix_now();
    let clock = Instant::now();
    let limits = Limits {
        max_depth: args.max_depth,
        mem_budget: args.mem_budget,
    };
    let (histogram, stop, states, witnesses): (CostHistogram, StopReason, usize, String) =
        match args.kind {
            Kind::Mct => {
                ensure!(
                    args.resume.is_none() && args.checkpoint.is_none(),
                    "checkpoints apply to --kind lnn only"
                );
                let bfs = enumerate_optimal_mct(exec);
                let mut text = String::new();
                if args.witnesses.is_some() {
                    let mut fs: Vec<_> = bfs.functions().map(|(f, _)| f.clone()).collect();
                    fs.sort();
                    for f in &fs {
                        text.push_str(&witness_line(f.images(), &bfs.witness(f).expect("found")));
                    }
                }
                let h = CostHistogram::from_counts(&bfs.function_counts(), bfs.is_exhausted());
                (h, StopReason::Exhausted, bfs.num_states(), text)
            }
            Kind::Lnn => {
                let mut search = match &args.resume {
                    Some(p) => {
                        let f =
                            File::open(p).with_context(|| format!("opening {}", p.display()))?;
                        LnnSearch::load_checkpoint(args.convention, &mut BufReader::new(f))
                            .with_context(|| format!("loading checkpoint {}", p.display()))?
                    }
                    None => LnnSearch::new(args.convention),
                };
                let stop = search.run(limits, exec);
                if let Some(p) = &args.checkpoint {
                    let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
                    let mut w = BufWriter::new(f);
                    search.save_checkpoint(&mut w)?;
                    w.flush()?;
                }
                let mut text = String::new();
                if args.witnesses.is_some() {
                    let mut fs = search.functions();
                    fs.sort();
                    for f in &fs {
                        text.push_str(&witness_line(
                            f.images(),
                            &search.witness(f).expect("found"),
                        ));
                    }
                }
                (search.histogram(), stop, search.num_states(), text)
            }
        };
    if let Some(p) = &args.witnesses {
        fs::write(p, witnesses).with_context(|| format!("writing {}", p.display()))?;
    }
    let out = json!({
        "kind": match args.kind { Kind::Lnn => "lnn", Kind::Mct => "mct" },
        "convention": args.convention,
        "max_depth": args.max_depth,
        "mem_budget": args.mem_budget,
        "stop_reason": stop_name(stop),
        "states": states,
        "histogram": histogram,
        "average": histogram.complete.then(|| histogram.average()),
        "started_unix": started,
        "finished_unix": unix_now(),
        "elapsed_seconds": clock.elapsed().as_secs_f64(),
    });
    write_output(
        args.out.as_deref(),
        &(serde_json::to_string_pretty(&out)? + "\n"),
    )
}

fn cmd_report(args: &ReportArgs, exec: Exec) -> Result<()> {
    let base = load_base(args.templates.as_deref())?;
    let lnn = (!args.skip_optimal).then(|| {
        let mut s = LnnSearch::new(args.convention);
        s.run(
            Limits {
                max_depth: args.max_depth,
                mem_budget: args.mem_budget,
            },
            exec,
        );
        s
    });
    let opts = ReportOptions {
        effort: args.effort,
        exec,
        ..ReportOptions::default()
    };
    let report = table_report(&base, &opts, lnn.as_ref())?;
    let text = if args.json {
        let mut v = serde_json::to_value(&report)?;
        v["convention"] = json!(args.convention);
        v["templates"] = json!(base.len());
        v["generated_unix"] = json!(unix_now());
        serde_json::to_string_pretty(&v)? + "\n"
    } else {
        format!("{report}\n")
    };
    write_output(args.out.as_deref(), &text)
}

fn cmd_templates(args: &TemplatesArgs) -> Result<()> {
    ensure!(args.lines >= 2, "templates need at least two lines");
    let builtin: Vec<_> = builtin_templates()
        .into_iter()
        .map(|t| t.circuit().clone())
        .collect();
    let found: Vec<_> = find_templates(args.max_size, args.lines)
        .into_iter()
        .filter(|t| !builtin.contains(t.circuit()))
        .collect();
    eprintln!("{} templates", found.len());
    write_output(args.out.as_deref(), &write_template_file(&found))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = exec(&cli);
    let result = match &cli.command {
        Command::Transform(a) => cmd_transform(a).map(|()| true),
        Command::Optimize(a) => cmd_optimize(a).map(|()| true),
        Command::Verify(a) => cmd_verify(a),
        Command::Enumerate(a) => cmd_enumerate(a, exec).map(|()| true),
        Command::Report(a) => cmd_report(a, exec).map(|()| true),
        Command::Templates(a) => cmd_templates(a).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
