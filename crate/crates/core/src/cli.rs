//! Command-line front end. [`run`] parses arguments, dispatches and returns
//! the process exit code.
//!
//! Exit codes: 0 success; 1 I/O, parse or malformed input; 2 the complement
//! is not (or not provably) a partial k-tree; 3 the requested inertia or
//! dimension is out of range; 4 sampling retries exhausted; 5 a verification
//! or self-test failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::engine::{
    audit_matrix, construct_for_form, construct_prescribed_inertia, detect_k, graph_hash, sweep,
    Construction, EngineError, InertiaCertificate, MatrixAudit, SweepRow, DEFAULT_K_MAX,
};
use crate::graph::{exhaustive_treewidth, find_ktree_embedding, Graph, GraphError, EXHAUSTIVE_LIMIT};
use crate::linalg::{BilinearForm, Fault, LinalgError, Mat};
use crate::repr::{BuildError, SamplerConfig, DEFAULT_COORD_BOUND, DEFAULT_MAX_RETRIES};
use crate::selftest::{run_selftest, SelftestConfig, FULL_COUNTS, QUICK_COUNTS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_PARTIAL_KTREE: i32 = 2;
pub const EXIT_BAD_TARGET: i32 = 3;
pub const EXIT_RETRIES: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "inertia-forge",
    version,
    about = "Exact rational symmetric matrices with a given off-diagonal pattern and inertia"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build U, A = UᵀKU and a certificate for the pattern graph.
    Construct(ConstructArgs),
    /// Re-check a matrix against a pattern graph (and optionally a certificate).
    Verify(VerifyArgs),
    /// Smallest k for which the complement of the graph is a partial k-tree.
    Treewidth(TreewidthArgs),
    /// Run the randomized invariant suites.
    Selftest(SelftestArgs),
    /// Construct every inertia (p, q) with k+2 <= p+q <= n.
    Sweep(SweepArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct SamplingArgs {
    #[arg(long, env = "INERTIA_FORGE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Coordinates are drawn from [-bound, bound].
    #[arg(long, default_value_t = DEFAULT_COORD_BOUND)]
    pub coord_bound: u64,
    /// Rejected draws allowed per vertex.
    #[arg(long, default_value_t = DEFAULT_MAX_RETRIES)]
    pub max_retries: u32,
}

impl SamplingArgs {
    fn config(&self) -> SamplerConfig {
        SamplerConfig {
            seed: self.seed,
            coord_bound: self.coord_bound,
            max_retries: self.max_retries,
            ..SamplerConfig::default()
        }
    }
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    /// Pattern graph Ḡ: "n e" then one "u v" line per edge.
    #[arg(long)]
    pub graph: PathBuf,
    /// Width of the k-tree containing the complement; detected when absent.
    #[arg(long)]
    pub k: Option<usize>,
    /// Form dimension. Alone it selects the identity form.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, requires = "q", conflicts_with = "form")]
    pub p: Option<usize>,
    #[arg(long, requires = "p", conflicts_with = "form")]
    pub q: Option<usize>,
    /// Form matrix K as rational matrix JSON.
    #[arg(long)]
    pub form: Option<PathBuf>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Directory for U.json, A.json, certificate.json and representation.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Matrix A as rational matrix JSON.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Certificate to compare against.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct TreewidthArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Test this width only.
    #[arg(long)]
    pub k: Option<usize>,
    /// Writes embedding.json here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    #[arg(long, env = "INERTIA_FORGE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Reduced instance counts.
    #[arg(long)]
    pub quick: bool,
    /// Break the congruence elimination on purpose.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Writes sweep.json here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        let code = match e {
            GraphError::NotPartialKTree { .. } | GraphError::Inconclusive { .. } => {
                EXIT_NOT_PARTIAL_KTREE
            }
            GraphError::InvalidWidth => EXIT_BAD_TARGET,
            _ => EXIT_INPUT,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<LinalgError> for Failure {
    fn from(e: LinalgError) -> Self {
        Failure::new(EXIT_INPUT, e.to_string())
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Graph(g) => g.into(),
            EngineError::Build(BuildError::Graph(g)) => g.into(),
            EngineError::BadInertiaTarget { .. } => Failure::new(EXIT_BAD_TARGET, e.to_string()),
            EngineError::Build(BuildError::DimensionTooSmall { .. }) => {
                Failure::new(EXIT_BAD_TARGET, e.to_string())
            }
            EngineError::Build(BuildError::RetriesExhausted { .. })
            | EngineError::Build(BuildError::EmptySampleSpace(_)) => {
                Failure::new(EXIT_RETRIES, e.to_string())
            }
            EngineError::Uncertified(_) => Failure::new(EXIT_VERIFY, e.to_string()),
            _ => Failure::new(EXIT_INPUT, e.to_string()),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn execute(command: &Command) -> Result<i32, Failure> {
    match command {
        Command::Construct(a) => cmd_construct(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Treewidth(a) => cmd_treewidth(a),
        Command::Selftest(a) => cmd_selftest(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))
}

pub fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(Graph::parse(&read(path)?)?)
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn write_files(dir: &Path, files: &[(&str, String)]) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::new(EXIT_INPUT, format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    for (name, body) in files {
        fs::write(dir.join(name), body).map_err(io)?;
    }
    Ok(())
}

fn resolve_k(g_bar: &Graph, k: Option<usize>) -> Result<usize, Failure> {
    match k {
        Some(k) => Ok(k),
        None => Ok(detect_k(g_bar, DEFAULT_K_MAX)?),
    }
}

fn cmd_construct(args: &ConstructArgs) -> Result<i32, Failure> {
    let g_bar = load_graph(&args.graph)?;
    let form = match &args.form {
        Some(path) => Some(BilinearForm::new(load_json::<Mat>(path)?)?),
        None => None,
    };
    let k = resolve_k(&g_bar, args.k)?;
    let cfg = args.sampling.config();
    let construction = match (&form, args.p.zip(args.q)) {
        (Some(form), _) => {
            if let Some(m) = args.m.filter(|&m| m != form.dim()) {
                return Err(Failure::new(
                    EXIT_BAD_TARGET,
                    format!("--m {m} disagrees with the {0}x{0} form", form.dim()),
                ));
            }
            construct_for_form(&g_bar, k, form, &cfg)?
        }
        (None, Some((p, q))) => {
            if let Some(m) = args.m.filter(|&m| m != p + q) {
                return Err(Failure::new(
                    EXIT_BAD_TARGET,
                    format!("--m {m} disagrees with --p {p} --q {q}"),
                ));
            }
            construct_prescribed_inertia(&g_bar, k, p, q, &cfg)?
        }
        (None, None) => {
            let m = args.m.unwrap_or(k + 2);
            construct_for_form(&g_bar, k, &BilinearForm::identity(m), &cfg)?
        }
    };
    if let Some(dir) = &args.out {
        write_files(dir, &construction_files(&construction))?;
    }
    match args.format {
        Format::Json => print!("{}", to_json(&construction.certificate)),
        Format::Text => print!("{}", construction_summary(&construction)),
    }
    Ok(EXIT_OK)
}

/// The four artifacts written by `construct --out`.
pub fn construction_files(c: &Construction) -> Vec<(&'static str, String)> {
    vec![
        ("U.json", to_json(&c.u)),
        ("A.json", to_json(&c.a)),
        ("certificate.json", to_json(&c.certificate)),
        ("representation.json", to_json(&c.representation)),
    ]
}

fn construction_summary(c: &Construction) -> String {
    let cert = &c.certificate;
    let mut s = String::new();
    let _ = writeln!(s, "n = {}, k = {}, m = {}", cert.n, cert.k, cert.m);
    let _ = writeln!(s, "inertia of A: {}", cert.inertia_a);
    if let Some(t) = cert.target {
        let _ = writeln!(s, "target: {t}");
    }
    let _ = writeln!(s, "rank U = {}, rank A = {}", cert.rank_u, cert.rank_a);
    let _ = writeln!(
        s,
        "pattern ok, conditions ok, congruence and Sturm agree; {} retries",
        cert.retries_total
    );
    s
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    pass: bool,
    #[serde(flatten)]
    audit: &'a MatrixAudit,
    certificate_mismatches: Vec<String>,
}

fn certificate_mismatches(
    cert: &InertiaCertificate,
    g_bar: &Graph,
    audit: &MatrixAudit,
) -> Vec<String> {
    let mut out = Vec::new();
    if cert.graph_hash != graph_hash(g_bar) {
        out.push("graph hash differs".to_string());
    }
    if cert.n != g_bar.n() {
        out.push(format!("certificate n = {}, graph n = {}", cert.n, g_bar.n()));
    }
    if cert.inertia_a != audit.inertia_congruence {
        out.push(format!(
            "certificate inertia {}, matrix inertia {}",
            cert.inertia_a, audit.inertia_congruence
        ));
    }
    if cert.rank_a != audit.rank {
        out.push(format!("certificate rank {}, matrix rank {}", cert.rank_a, audit.rank));
    }
    if let Some(t) = cert.target {
        if t != cert.inertia_a {
            out.push(format!("target {t} differs from the certified inertia"));
        }
    }
    out
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32, Failure> {
    let g_bar = load_graph(&args.graph)?;
    let a: Mat = load_json(&args.matrix)?;
    let audit = audit_matrix(&a, &g_bar)?;
    let mismatches = match &args.certificate {
        Some(path) => certificate_mismatches(&load_json(path)?, &g_bar, &audit),
        None => Vec::new(),
    };
    let report = VerifyReport {
        pass: audit.pass() && mismatches.is_empty(),
        audit: &audit,
        certificate_mismatches: mismatches,
    };
    match args.format {
        Format::Json => print!("{}", to_json(&report)),
        Format::Text => print!("{}", verify_summary(&report)),
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY })
}

fn verify_summary(r: &VerifyReport) -> String {
    let mut s = String::new();
    let a = r.audit;
    for (u, v) in &a.pattern.missing {
        let _ = writeln!(s, "missing edge {u}-{v}: entry is zero");
    }
    for (u, v) in &a.pattern.extra {
        let _ = writeln!(s, "extra entry {u}-{v}: nonzero on a non-edge");
    }
    let _ = writeln!(s, "rank {}", a.rank);
    let _ = writeln!(
        s,
        "inertia {} by congruence, {} by Sturm",
        a.inertia_congruence, a.inertia_sturm
    );
    for m in &r.certificate_mismatches {
        let _ = writeln!(s, "certificate: {m}");
    }
    let _ = writeln!(s, "{}", if r.pass { "PASS" } else { "FAIL" });
    s
}

fn cmd_treewidth(args: &TreewidthArgs) -> Result<i32, Failure> {
    let g_bar = load_graph(&args.graph)?;
    let k = resolve_k(&g_bar, args.k)?;
    let g = g_bar.complement();
    let embedding = find_ktree_embedding(&g, k)?;
    let exact = if g.n() <= EXHAUSTIVE_LIMIT {
        Some(exhaustive_treewidth(&g)?)
    } else {
        None
    };
    if let Some(dir) = &args.out {
        write_files(dir, &[("embedding.json", to_json(&embedding))])?;
    }
    match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a, E: Serialize> {
                k: usize,
                #[serde(skip_serializing_if = "Option::is_none")]
                exhaustive_treewidth: Option<usize>,
                embedding: &'a E,
            }
            print!(
                "{}",
                to_json(&Out {
                    k,
                    exhaustive_treewidth: exact,
                    embedding: &embedding,
                })
            );
        }
        Format::Text => {
            println!("complement is a partial {k}-tree");
            if let Some(tw) = exact {
                println!("exhaustive treewidth of the complement: {tw}");
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_selftest(args: &SelftestArgs) -> Result<i32, Failure> {
    let cfg = SelftestConfig {
        seed: args.seed,
        counts: if args.quick { QUICK_COUNTS } else { FULL_COUNTS },
        fault: if args.inject_fault {
            Fault::FlipEliminationSign
        } else {
            Fault::None
        },
    };
    let results = run_selftest(&cfg);
    match args.format {
        Format::Json => print!("{}", to_json(&results)),
        Format::Text => {
            for r in &results {
                println!("{}: {}/{}", r.name, r.passed, r.total);
                for f in &r.failures {
                    println!("  {f}");
                }
            }
        }
    }
    Ok(if results.iter().all(|r| r.pass()) {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}

fn cmd_sweep(args: &SweepArgs) -> Result<i32, Failure> {
    let g_bar = load_graph(&args.graph)?;
    let k = resolve_k(&g_bar, args.k)?;
    let rows = sweep(&g_bar, k, &args.sampling.config())?;
    if let Some(dir) = &args.out {
        write_files(dir, &[("sweep.json", to_json(&rows))])?;
    }
    match args.format {
        Format::Json => print!("{}", to_json(&rows)),
        Format::Text => print!("{}", sweep_table(&rows)),
    }
    Ok(if rows.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}

fn sweep_table(rows: &[SweepRow]) -> String {
    let mut s = String::from("  m   p   q  result  retries  inertia\n");
    for r in rows {
        let inertia = r.inertia.map(|i| i.to_string()).unwrap_or_default();
        let _ = writeln!(
            s,
            "{:>3} {:>3} {:>3}  {:<6} {:>8}  {}",
            r.m,
            r.p,
            r.q,
            if r.pass { "pass" } else { "FAIL" },
            r.retries,
            inertia
        );
        if let Some(e) = &r.error {
            let _ = writeln!(s, "             {e}");
        }
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    let _ = writeln!(s, "{passed}/{} pass", rows.len());
    s
}
