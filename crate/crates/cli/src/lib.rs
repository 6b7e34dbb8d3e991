//! Command-line front end for building and checking `Q(n, k)`.
//!
//! Exit codes: 0 pass, 1 fail, 2 usage or malformed input, 3 inconclusive.

pub mod document;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use projquad::complex::TwoColouredComplex;
use projquad::construct::build_sphere;
use projquad::graphs::{
    associated_graph, check_edge_critical, chromatic_number, colouring_strategy, colouring_strategy_names,
    kneser_graph, quotient_graph, schrijver_graph, Budget, Chromatic, SimpleGraph,
};
use projquad::setkit::LabelSet;
use projquad::verify::{CheckInput, CheckRegistry, LinkDepth};

pub use document::{ComplexDocument, DocumentError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "projquad", version, about = "Build and check the antisymmetric spheres Q(n,k)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build Q(n,k) and write its document.
    Build {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification checks on a document.
    Verify {
        #[arg(required_unless_present = "list")]
        path: Option<PathBuf>,
        /// Comma-separated check names; all checks if omitted.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Recurse into vertex links in every dimension.
        #[arg(long)]
        deep_links: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        /// Include wall-clock time per check.
        #[arg(long)]
        timings: bool,
        /// List the available checks and exit.
        #[arg(long)]
        list: bool,
    },
    /// Chromatic number of QG(n,k), SG(n,k) or KG(n,k) against n-2k+2.
    Chromatic {
        path: Option<PathBuf>,
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value_t = GraphKind::Qg)]
        graph: GraphKind,
        #[command(flatten)]
        search: Search,
    },
    /// Edge-criticality sweep over QG(n,k).
    Critical {
        path: PathBuf,
        #[command(flatten)]
        search: Search,
    },
    /// Write the document, a graph in DIMACS form, or the labelled facets.
    Export {
        path: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long)]
        out: PathBuf,
        /// Graph written by the DIMACS format.
        #[arg(long, value_enum, default_value_t = GraphKind::Qg)]
        graph: GraphKind,
    },
    /// Summary counts for a document.
    Stats { path: PathBuf },
}

#[derive(Args, Debug)]
pub struct Params {
    #[arg(long, conflicts_with = "path", requires = "k")]
    pub n: Option<u32>,
    #[arg(long, conflicts_with = "path", requires = "n")]
    pub k: Option<u32>,
}

#[derive(Args, Debug)]
pub struct Search {
    /// Time limit per colouring search, in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Colouring search strategy.
    #[arg(long, default_value = "dsatur")]
    pub strategy: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphKind {
    Qg,
    Sg,
    Kg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Json,
    Dimacs,
    Facets,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Kv,
}

/// A failure that ends the command with the given exit code.
struct Exit(i32, String);

type CmdResult = Result<i32, Exit>;

fn usage(msg: impl Into<String>) -> Exit {
    Exit(EXIT_USAGE, msg.into())
}

/// Runs a parsed command, writing results to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Build { n, k, out: path } => cmd_build(n, k, path.as_deref(), out),
        Command::Verify {
            path,
            checks,
            deep_links,
            format,
            timings,
            list,
        } => {
            match path {
                Some(path) if !list => cmd_verify(&path, &checks, deep_links, format, timings, out),
                _ => cmd_list_checks(out),
            }
        }
        Command::Chromatic {
            path,
            params,
            graph,
            search,
        } => cmd_chromatic(path.as_deref(), params, graph, &search, out),
        Command::Critical { path, search } => cmd_critical(&path, &search, out),
        Command::Export {
            path,
            format,
            out: dest,
            graph,
        } => cmd_export(&path, format, &dest, graph),
        Command::Stats { path } => cmd_stats(&path, out),
    };
    match result {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_PASS
            }
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Exit> {
    out.write_all(text.as_bytes()).map_err(|e| Exit(EXIT_FAIL, format!("write failed: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<(), Exit> {
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(ComplexDocument, TwoColouredComplex), Exit> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let doc = ComplexDocument::parse(&text).map_err(|e| usage(e.to_string()))?;
    let complex = doc.to_complex().map_err(|e| usage(e.to_string()))?;
    Ok((doc, complex))
}

fn budget(search: &Search) -> Result<Budget, Exit> {
    match search.timeout {
        None => Ok(Budget::unlimited()),
        Some(t) if t.is_finite() && t >= 0.0 => Ok(Budget::with_timeout(Duration::from_secs_f64(t))),
        Some(t) => Err(usage(format!("timeout must be a non-negative number of seconds, got {t}"))),
    }
}

fn strategy(search: &Search) -> Result<Box<dyn projquad::graphs::ColouringStrategy>, Exit> {
    colouring_strategy(&search.strategy).ok_or_else(|| {
        usage(format!(
            "unknown strategy '{}' (known: {})",
            search.strategy,
            colouring_strategy_names().join(",")
        ))
    })
}

fn expected_chi(n: u32, k: u32) -> usize {
    (n - 2 * k + 2) as usize
}

fn cmd_build(n: u32, k: u32, path: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let sphere = build_sphere(n, k).map_err(|e| usage(e.to_string()))?;
    let text = ComplexDocument::from_complex(n, k, &sphere).to_json();
    match path {
        Some(p) => write_file(p, &text)?,
        None => emit(out, &text)?,
    }
    Ok(EXIT_PASS)
}

fn cmd_list_checks(out: &mut dyn Write) -> CmdResult {
    let reg = CheckRegistry::standard();
    let mut text = String::new();
    for name in reg.names() {
        let c = reg.get(name).expect("registered");
        text.push_str(&format!("{name:<16} {}\n", c.description()));
    }
    emit(out, &text)?;
    Ok(EXIT_PASS)
}

fn cmd_verify(
    path: &Path,
    checks: &[String],
    deep_links: bool,
    format: ReportFormat,
    timings: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let reg = CheckRegistry::standard();
    let names: Vec<&str> = checks.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    if let Some(bad) = names.iter().find(|n| reg.get(n).is_none()) {
        return Err(usage(format!("unknown check '{bad}' (known: {})", reg.names().join(","))));
    }
    let (doc, complex) = load(path)?;
    let input = CheckInput {
        complex: &complex,
        n: doc.n,
        k: doc.k,
        links: if deep_links { LinkDepth::Always } else { LinkDepth::Auto },
    };
    let report = reg.run(&names, &input).map_err(|e| usage(e.to_string()))?;
    let text = match format {
        ReportFormat::Text => report.render_text_with(timings),
        ReportFormat::Kv => report.render_kv_with(timings),
    };
    emit(out, &text)?;
    Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
}

fn qg_of(complex: &TwoColouredComplex) -> Result<SimpleGraph<LabelSet>, Exit> {
    quotient_graph(complex)
        .map(|q| q.graph)
        .map_err(|e| Exit(EXIT_FAIL, format!("cannot form QG: {e}")))
}

fn graph_for(kind: GraphKind, n: u32, k: u32, complex: Option<&TwoColouredComplex>) -> Result<SimpleGraph<LabelSet>, Exit> {
    match kind {
        GraphKind::Qg => match complex {
            Some(c) => qg_of(c),
            None => qg_of(&build_sphere(n, k).map_err(|e| usage(e.to_string()))?),
        },
        GraphKind::Sg => schrijver_graph(n, k).map_err(|e| usage(e.to_string())),
        GraphKind::Kg => kneser_graph(n, k).map_err(|e| usage(e.to_string())),
    }
}

fn cmd_chromatic(path: Option<&Path>, params: Params, kind: GraphKind, search: &Search, out: &mut dyn Write) -> CmdResult {
    let budget = budget(search)?;
    let strategy = strategy(search)?;
    let (n, k, complex) = match (path, params.n, params.k) {
        (Some(p), _, _) => {
            let (doc, c) = load(p)?;
            (doc.n, doc.k, Some(c))
        }
        (None, Some(n), Some(k)) => (n, k, None),
        _ => return Err(usage("give a document path or both --n and --k")),
    };
    if k == 0 || n < 2 * k + 1 {
        return Err(usage(format!("need k >= 1 and n >= 2k+1, got n={n}, k={k}")));
    }
    let g = graph_for(kind, n, k, complex.as_ref())?;
    let expected = expected_chi(n, k);
    let result = chromatic_number(&g, strategy.as_ref(), budget);
    emit(out, &format!("{result} expected={expected}\n"))?;
    Ok(match result {
        Chromatic::Exact { chi, .. } if chi == expected => EXIT_PASS,
        Chromatic::Exact { .. } => EXIT_FAIL,
        Chromatic::Inconclusive { .. } => EXIT_INCONCLUSIVE,
    })
}

fn cmd_critical(path: &Path, search: &Search, out: &mut dyn Write) -> CmdResult {
    let budget = budget(search)?;
    let strategy = strategy(search)?;
    let (doc, complex) = load(path)?;
    let g = qg_of(&complex)?;
    let expected = expected_chi(doc.n, doc.k);
    let chi = chromatic_number(&g, strategy.as_ref(), budget);
    emit(out, &format!("{chi} expected={expected}\n"))?;
    let Some(target) = chi.value() else {
        return Ok(EXIT_INCONCLUSIVE);
    };
    let report = check_edge_critical(&g, target, strategy.as_ref(), budget).map_err(|e| Exit(EXIT_FAIL, e.to_string()))?;
    let edge = |(u, v): (usize, usize)| format!("{} {}", g.label(u), g.label(v));
    let critical = report.edges.iter().filter(|(_, v)| matches!(v, projquad::graphs::EdgeVerdict::Critical(_))).count();
    emit(out, &format!("edges={} critical={critical}\n", report.edges.len()))?;
    if let Some(e) = report.first_violation() {
        emit(out, &format!("edge-critical=no witness={}\n", edge(e)))?;
        return Ok(EXIT_FAIL);
    }
    if let Some(e) = report.first_inconclusive() {
        emit(out, &format!("edge-critical=inconclusive at={}\n", edge(e)))?;
        return Ok(EXIT_INCONCLUSIVE);
    }
    emit(out, "edge-critical=yes\n")?;
    Ok(EXIT_PASS)
}

/// DIMACS edge format with vertices numbered from 1 in label order, plus the
/// matching `index label` lines.
pub fn dimacs(g: &SimpleGraph<LabelSet>) -> (String, String) {
    let mut order: Vec<usize> = (0..g.num_vertices()).collect();
    order.sort_by(|&a, &b| g.label(a).cmp(g.label(b)));
    let mut number = vec![0usize; g.num_vertices()];
    for (i, &v) in order.iter().enumerate() {
        number[v] = i + 1;
    }
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (number[u], number[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    let mut text = format!("p edge {} {}\n", g.num_vertices(), edges.len());
    for (a, b) in edges {
        text.push_str(&format!("e {a} {b}\n"));
    }
    let mut labels = String::new();
    for (i, &v) in order.iter().enumerate() {
        labels.push_str(&format!("{} {}\n", i + 1, g.label(v)));
    }
    (text, labels)
}

/// One facet per line, vertices written as `b{..}` / `w{..}`.
pub fn facet_lines(complex: &TwoColouredComplex) -> String {
    let mut lines: Vec<String> = complex
        .facets()
        .iter()
        .map(|f| {
            let mut vs: Vec<_> = f.iter().map(|&v| complex.vertex(v).expect("facet vertex")).collect();
            vs.sort_by(|a, b| (a.colour, &a.label).cmp(&(b.colour, &b.label)));
            vs.iter().map(|v| format!("{}{}", v.colour.prefix(), v.label)).collect::<Vec<_>>().join(" ")
        })
        .collect();
    lines.sort();
    let mut text = lines.join("\n");
    text.push('\n');
    text
}

fn labels_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".labels");
    PathBuf::from(s)
}

fn cmd_export(path: &Path, format: ExportFormat, dest: &Path, kind: GraphKind) -> CmdResult {
    let (doc, complex) = load(path)?;
    match format {
        ExportFormat::Json => write_file(dest, &ComplexDocument::from_complex(doc.n, doc.k, &complex).to_json())?,
        ExportFormat::Facets => write_file(dest, &facet_lines(&complex))?,
        ExportFormat::Dimacs => {
            let g = graph_for(kind, doc.n, doc.k, Some(&complex))?;
            let (text, labels) = dimacs(&g);
            write_file(dest, &text)?;
            write_file(&labels_path(dest), &labels)?;
        }
    }
    Ok(EXIT_PASS)
}

fn cmd_stats(path: &Path, out: &mut dyn Write) -> CmdResult {
    let (doc, complex) = load(path)?;
    let count = |c: projquad::complex::Colour| complex.vertices().filter(|v| v.colour == c).count();
    let fv: Vec<String> = complex.f_vector().iter().map(usize::to_string).collect();
    let mut text = format!(
        "n={}\nk={}\ndim={}\nvertices={}\nblack={}\nwhite={}\nfacets={}\nf_vector={}\neuler={}\nbichromatic_edges={}\n",
        doc.n,
        doc.k,
        doc.dim,
        complex.num_vertices(),
        count(projquad::complex::Colour::Black),
        count(projquad::complex::Colour::White),
        complex.facets().len(),
        fv.join(","),
        complex.euler_characteristic(),
        associated_graph(&complex).num_edges(),
    );
    match quotient_graph(&complex) {
        Ok(q) => text.push_str(&format!("qg_vertices={}\nqg_edges={}\n", q.graph.num_vertices(), q.graph.num_edges())),
        Err(e) => text.push_str(&format!("qg=unavailable ({e})\n")),
    }
    emit(out, &text)?;
    Ok(EXIT_PASS)
}
