//! Command-line front end: language classification, witness synthesis and replay,
//! exact counting and the bipartite independent-set reduction.
//!
//! Exit codes: 0 success, 1 verified negative, 2 input error, 3 resource cap.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use trichotomy::csp::{bis_reduction, classify_language, gauss_count, parse_instance, BipartiteGraph, CspInstance};
use trichotomy::format::{parse_function_spec, parse_functions, rational_to_string};
use trichotomy::gadgets::{perfect_implies_gadget, SearchBounds, Synthesizer, WitnessKind, WitnessRecord};
use trichotomy::hypergraph::Engine;
use trichotomy::{BooleanFunction, Error, Rational};

#[derive(Parser)]
#[command(name = "trichotomy", version, about = "Approximation-complexity trichotomy for bounded-degree Boolean #CSP")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Options {
    /// Emit the machine-readable JSON record instead of the summary.
    #[arg(long, global = true, env = "TRICHOTOMY_JSON")]
    json: bool,
    /// Largest candidate gadget (vertices) in bounded searches.
    #[arg(long, global = true, env = "TRICHOTOMY_MAX_VERTICES", default_value_t = 6)]
    max_vertices: usize,
    /// Largest candidate gadget (hyperarcs) in bounded searches.
    #[arg(long, global = true, env = "TRICHOTOMY_MAX_ARCS", default_value_t = 6)]
    max_arcs: usize,
    /// Auxiliary variables allowed in implementation search.
    #[arg(long, global = true, env = "TRICHOTOMY_MAX_AUX", default_value_t = 3)]
    max_aux: usize,
    /// Constraints allowed in implementation search.
    #[arg(long, global = true, env = "TRICHOTOMY_MAX_CONSTRAINTS", default_value_t = 4)]
    max_constraints: usize,
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true, env = "TRICHOTOMY_THREADS")]
    threads: Option<usize>,
}

impl Options {
    fn bounds(&self) -> SearchBounds {
        let d = SearchBounds::default();
        SearchBounds {
            max_vertices: self.max_vertices,
            max_arcs: self.max_arcs,
            conditioned_max_vertices: d.conditioned_max_vertices.min(self.max_vertices),
            max_aux: self.max_aux,
            max_constraints: self.max_constraints,
        }
    }

    fn echo(&self) -> Value {
        let b = self.bounds();
        json!({
            "max_vertices": b.max_vertices,
            "max_arcs": b.max_arcs,
            "conditioned_max_vertices": b.conditioned_max_vertices,
            "max_aux": b.max_aux,
            "max_constraints": b.max_constraints,
            "threads": self.threads,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Trichotomy verdict for a language (functions file or repeated --function).
    Classify {
        #[arg(long)]
        language: Option<PathBuf>,
        /// A bitstring, a `fn` record or a name such as `or`, `implies`, `nae3`.
        #[arg(long = "function")]
        functions: Vec<String>,
        /// Also synthesise and verify a witness for every function.
        #[arg(long)]
        witness: bool,
    },
    /// Synthesise a verified witness for one function.
    Synth {
        #[arg(long)]
        function: String,
        /// Write the replayable witness record here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a witness record with exact arithmetic.
    Verify {
        #[arg(long)]
        witness: PathBuf,
    },
    /// Exact partition function of an instance.
    Count {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Brute)]
        method: Method,
    },
    /// Build the independent-set reduction for a bipartite graph.
    ReduceBis {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        function: String,
        /// Write the reduced hypergraph here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closure properties and easy-class membership of one function.
    Info {
        #[arg(long)]
        function: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    Gauss,
}

/// Human summary, JSON record and exit code of one command.
struct Report {
    code: u8,
    human: String,
    json: Value,
}

impl Report {
    fn ok(human: String, json: Value) -> Self {
        Report { code: 0, human, json }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceCap(_) => 3,
            Error::Verification(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn function(spec: &str) -> Result<BooleanFunction, Failure> {
    parse_function_spec(spec).map_err(|e| input_error(format!("--function {spec:?}: {e}")))
}

/// A functions file, or an instance file whose language is taken.
fn language_file(path: &Path) -> Result<Vec<(String, BooleanFunction)>, Failure> {
    let text = read(path)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if first.starts_with("instance") || first.starts_with('{') {
        let inst: CspInstance<Rational> = parse_instance(&text)?;
        let fns = inst.boolean_language()?;
        return Ok(fns.into_iter().enumerate().map(|(i, f)| (inst.function_name(i).to_string(), f)).collect());
    }
    parse_functions(&text)?
        .into_iter()
        .map(|r| Ok((r.name().to_string(), r.to_boolean()?)))
        .collect::<Result<_, Error>>()
        .map_err(Failure::from)
}

fn witness_summary(rec: &WitnessRecord) -> String {
    let mut s = format!("witness: {}", kind_name(rec.kind));
    if let Some(g) = &rec.graph {
        s.push_str(&format!(
            "\n  gadget: {} vertices, {} hyperarcs, degree {}",
            g.vertex_count(),
            g.arc_count(),
            rec.degree
        ));
    }
    if !rec.vertices.is_empty() {
        s.push_str(&format!("\n  terminals: {:?}", rec.vertices));
    }
    if !rec.conditioning.is_empty() {
        let c = &rec.conditioning;
        s.push_str(&format!("\n  conditioning: pin0 {:?}, pin1 {:?}, eq {:?}", c.pin0, c.pin1, c.eq));
    }
    if let Some(t) = &rec.target {
        s.push_str(&format!("\n  g = ({})", t.join(", ")));
    }
    if !rec.marginals.is_empty() {
        s.push_str(&format!("\n  marginals = ({})", rec.marginals.join(", ")));
    }
    for line in &rec.trace {
        s.push_str(&format!("\n  trace: {line}"));
    }
    s
}

fn kind_name(k: WitnessKind) -> &'static str {
    match k {
        WitnessKind::Affine => "affine",
        WitnessKind::PerfectEquality => "perfect equality",
        WitnessKind::HardSimulation => "hard simulation",
        WitnessKind::Inconclusive => "inconclusive",
    }
}

/// Synthesises, verifies and records a witness.
fn synthesise(f: &BooleanFunction, opts: &Options, engine: &Engine) -> Result<WitnessRecord, Failure> {
    let mut synth = Synthesizer::with_engine(opts.bounds(), *engine);
    let w = synth.classify(f)?;
    let mut rec = WitnessRecord::from_witness(f, &w, engine)?;
    if w.is_inconclusive() {
        rec.trace = synth.trace().to_vec();
    } else if !rec.verify(engine)? {
        return Err(Failure { code: 1, message: "synthesised witness failed replay".into() });
    }
    Ok(rec)
}

fn classify(opts: &Options, language: Option<&Path>, specs: &[String], with_witness: bool) -> Result<Report, Failure> {
    let mut named = match language {
        Some(p) => language_file(p)?,
        None => Vec::new(),
    };
    for s in specs {
        named.push((s.clone(), function(s)?));
    }
    if named.is_empty() {
        return Err(input_error("give --language <file> or at least one --function"));
    }
    let fns: Vec<BooleanFunction> = named.iter().map(|(_, f)| f.clone()).collect();
    let c = classify_language(&fns);
    let mut human = format!("verdict: {}", c.verdict);
    let mut rows = Vec::new();
    let engine = Engine::default();
    for (i, ((name, f), ev)) in named.iter().zip(&c.evidence).enumerate() {
        human.push_str(&format!(
            "\n  {name} [{}]: affine={} im2={}",
            f.to_bitstring(),
            ev.affine,
            ev.in_im2
        ));
        let mut row = json!({ "name": name, "table": f.to_bitstring(), "affine": ev.affine, "in_im2": ev.in_im2 });
        if Some(i) == c.non_affine {
            human.push_str("  <- non-affine culprit");
        }
        if Some(i) == c.outside_im2 {
            human.push_str("  <- outside IM2");
        }
        if with_witness {
            let rec = synthesise(f, opts, &engine)?;
            human.push_str(&format!("\n    {}", witness_summary(&rec).replace('\n', "\n    ")));
            row["witness"] = serde_json::to_value(&rec).expect("records serialise");
        }
        rows.push(row);
    }
    if let Some(p) = &c.product {
        human.push_str(&format!("\n  product evidence: {} (arity {})", p.to_bitstring(), p.arity()));
    }
    for n in &c.notes {
        human.push_str(&format!("\n  note: {n}"));
    }
    let json = json!({
        "command": "classify",
        "verdict": c.verdict,
        "verdict_text": c.verdict.to_string(),
        "functions": rows,
        "non_affine": c.non_affine,
        "outside_im2": c.outside_im2,
        "product": c.product,
        "notes": c.notes,
        "bounds": opts.echo(),
    });
    Ok(Report::ok(human, json))
}

fn synth(opts: &Options, spec: &str, out: Option<&Path>) -> Result<Report, Failure> {
    let f = function(spec)?;
    let rec = synthesise(&f, opts, &Engine::default())?;
    if let Some(p) = out {
        write(p, &rec.to_json())?;
    }
    let code = if rec.kind == WitnessKind::Inconclusive { 3 } else { 0 };
    let human = format!("function: {} (arity {})\n{}", f.to_bitstring(), f.arity(), witness_summary(&rec));
    let json = json!({
        "command": "synth",
        "witness": serde_json::to_value(&rec).expect("records serialise"),
        "bounds": opts.echo(),
    });
    Ok(Report { code, human, json })
}

fn verify(path: &Path) -> Result<Report, Failure> {
    let rec = WitnessRecord::from_json(&read(path)?)?;
    let engine = Engine::default();
    let pass = rec.verify(&engine)?;
    let verdict = if pass { "PASS" } else { "FAIL" };
    let human = format!("{verdict}: function {}\n{}", rec.function, witness_summary(&rec));
    let json = json!({
        "command": "verify",
        "pass": pass,
        "kind": rec.kind,
        "marginals": rec.marginals,
        "degree": rec.degree,
    });
    Ok(Report { code: if pass { 0 } else { 1 }, human, json })
}

fn count(path: &Path, method: Method) -> Result<Report, Failure> {
    let inst: CspInstance<Rational> = parse_instance(&read(path)?)?;
    let engine = Engine::default();
    let (name, z) = match method {
        Method::Brute => ("brute", rational_to_string(&inst.brute_count(&engine)?)),
        Method::Gauss => ("gauss", gauss_count(&inst)?.to_string()),
    };
    let human = format!(
        "Z = {z}\n  method: {name}\n  variables: {}, constraints: {}, degree: {}, repeat-free: {}",
        inst.variables(),
        inst.constraints().len(),
        inst.degree(),
        inst.is_repeat_free()
    );
    let json = json!({
        "command": "count",
        "method": name,
        "partition_function": z,
        "variables": inst.variables(),
        "constraints": inst.constraints().len(),
        "degree": inst.degree(),
        "repeat_free": inst.is_repeat_free(),
    });
    Ok(Report::ok(human, json))
}

fn reduce_bis(opts: &Options, graph: &Path, spec: &str, out: Option<&Path>) -> Result<Report, Failure> {
    let g = BipartiteGraph::parse(&read(graph)?)?;
    let f = function(spec)?;
    let engine = Engine::default();
    let Some(gadget) = perfect_implies_gadget(&f, &opts.bounds(), &engine)? else {
        return Ok(Report {
            code: 1,
            human: format!("no perfect Implies gadget for {} within bounds", f.to_bitstring()),
            json: json!({ "command": "reduce-bis", "gadget": null, "bounds": opts.echo() }),
        });
    };
    let r = bis_reduction(&g, &f, &gadget.graph, gadget.terminals[0], gadget.terminals[1], &engine)?;
    if let Some(p) = out {
        write(p, &r.graph.to_text())?;
    }
    let opt = |x: &Option<String>| x.clone().unwrap_or_else(|| "skipped".into());
    let sets = r.independent_sets.as_ref().map(|x| x.to_string());
    let z = r.partition_function.map(|x| x.to_string());
    let mut human = format!(
        "reduced hypergraph: {} vertices, {} hyperarcs, degree {}\n  gadget: {} vertices, Z = {}\n  independent sets: {}\n  Z: {}\n  identity: {}",
        r.graph.vertex_count(),
        r.graph.arc_count(),
        r.degree,
        gadget.graph.vertex_count(),
        r.gadget_partition_function,
        opt(&sets),
        opt(&z),
        match r.identity_holds {
            Some(true) => "holds",
            Some(false) => "FAILS",
            None => "not checked",
        }
    );
    for w in &r.warnings {
        human.push_str(&format!("\n  warning: {w}"));
    }
    let json = json!({
        "command": "reduce-bis",
        "vertices": r.graph.vertex_count(),
        "hyperarcs": r.graph.arc_count(),
        "degree": r.degree,
        "gadget_vertices": gadget.graph.vertex_count(),
        "gadget_terminals": gadget.terminals,
        "gadget_partition_function": r.gadget_partition_function,
        "independent_sets": sets,
        "partition_function": z,
        "identity_holds": r.identity_holds,
        "warnings": r.warnings,
        "bounds": opts.echo(),
    });
    let code = if r.identity_holds == Some(false) { 1 } else { 0 };
    Ok(Report { code, human, json })
}

fn info(spec: &str) -> Result<Report, Failure> {
    let f = function(spec)?;
    let star = f.symmetrise()?;
    let semi = f.semi_trivial();
    let tag = |t: Option<trichotomy::EasyTag>| t.map_or_else(|| "none".to_string(), |t| t.to_string());
    let human = format!(
        "function: {} (arity {}, |R| = {})\n  affine: {}\n  in IM2: {}\n  self-dual: {}\n  semi-trivial: {}\n  symmetric: {}\n  easy class: {}\n  symmetrised: {} (easy class {})",
        f.to_bitstring(),
        f.arity(),
        f.relation_size(),
        f.is_affine(),
        f.is_in_im2(),
        f.is_self_dual(),
        semi.is_some(),
        f.is_symmetric(),
        tag(f.easy_member()),
        star.to_bitstring(),
        tag(star.easy_member()),
    );
    let json = json!({
        "command": "info",
        "table": f.to_bitstring(),
        "arity": f.arity(),
        "relation_size": f.relation_size(),
        "affine": f.is_affine(),
        "in_im2": f.is_in_im2(),
        "self_dual": f.is_self_dual(),
        "semi_trivial": semi.is_some(),
        "symmetric": f.is_symmetric(),
        "easy_class": f.easy_member().map(|t| t.to_string()),
        "symmetrised": star.to_bitstring(),
        "symmetrised_easy_class": star.easy_member().map(|t| t.to_string()),
    });
    Ok(Report::ok(human, json))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Classify { language, functions, witness } => classify(opts, language.as_deref(), functions, *witness),
        Command::Synth { function, out } => synth(opts, function, out.as_deref()),
        Command::Verify { witness } => verify(witness),
        Command::Count { instance, method } => count(instance, *method),
        Command::ReduceBis { graph, function, out } => reduce_bis(opts, graph, function, out.as_deref()),
        Command::Info { function } => info(function),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.opts.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(r) => {
            let text = if cli.opts.json {
                serde_json::to_string_pretty(&r.json).expect("json values serialise")
            } else {
                r.human
            };
            // A closed pipe downstream is not an error of this command.
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::from(r.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
