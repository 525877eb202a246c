use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use udaf::builtin::{builtin, Builtin, BUILTIN_NAMES};
use udaf::certificate::{FailureReason, VerificationStatus};
use udaf::dimension::{
    check_det_compatible, component_invariants, refiner_witness, sim_d_equivalent, smith_normal_form, snf,
    VertexMultiset,
};
use udaf::search::{find_certificate, SearchBudget, SearchOptions, SearchOutcome};
use udaf::splitting::{in_split, out_split, past_future_digraph, EdgePartition, LabeledFolding, DEFAULT_PF_VERTEX_CAP};
use udaf::text::{format_digraph, format_matrix, looks_like_digraph, parse_digraph, parse_matrix, parse_multiset, parse_partition};
use udaf::{parse_script, serialize_script, verify_script, AdjacencyMatrix, Digraph, MoveScript, RelatorMatrix, SquareMatrix};

#[derive(Parser)]
#[command(name = "udaf", version, about = "Strong and weak UDAF equivalence of finite digraphs")]
struct Cli {
    #[command(flatten)]
    semantics: Semantics,
    #[command(subcommand)]
    command: Command,
}

/// How matrix files are read. Relator is the default.
#[derive(Args)]
#[group(multiple = false)]
struct Semantics {
    /// Read matrix files as relator matrices (adjacency minus identity).
    #[arg(long, global = true)]
    relator: bool,
    /// Read matrix files as adjacency matrices.
    #[arg(long, global = true)]
    adjacency: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print a named example: rose N, golden, ashley, fourcycle, script:NAME.
    /// Digraphs print as edge lists unless --relator or --adjacency is given.
    Gen {
        #[arg(required = true, num_args = 1..=2)]
        name: Vec<String>,
        /// Print as an edge list.
        #[arg(long)]
        digraph: bool,
    },
    /// Size, UDAF-ness, strong connectivity and core size.
    Info { input: String },
    /// Determinant, Smith normal form and dimension-group invariants.
    Invariants { input: String },
    /// Decide weak UDAF equivalence.
    Weak { a: String, b: String },
    /// Compare (-1)^n det of two relator matrices.
    DetCheck { a: String, b: String },
    /// Replay a move script.
    Verify { script: String },
    /// Breadth-first search for a move script from A to B.
    Search {
        a: String,
        b: String,
        #[arg(long, default_value_t = SearchBudget::default().max_steps)]
        max_steps: usize,
        #[arg(long, default_value_t = SearchBudget::default().max_matrix_size)]
        max_size: usize,
        #[arg(long, default_value_t = SearchBudget::default().max_entry_abs)]
        max_entry: u64,
        #[arg(long, default_value_t = SearchBudget::default().max_states)]
        max_states: usize,
        #[arg(long)]
        jobs: Option<usize>,
        /// Only size-preserving moves.
        #[arg(long)]
        no_cross: bool,
        /// Also try dead-index deletions.
        #[arg(long)]
        dead_moves: bool,
        /// Write the script here when one is found.
        #[arg(long)]
        emit_script: Option<PathBuf>,
    },
    /// In- or out-splitting along an edge partition.
    Split {
        digraph: String,
        #[arg(long, value_enum)]
        mode: SplitMode,
        /// Partition file; without it every edge is its own block.
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Past-future digraph PF(D, m, n) with m <= 0 <= n.
    Pf {
        digraph: String,
        #[arg(allow_negative_numbers = true)]
        past: i64,
        future: i64,
        #[arg(long, default_value_t = DEFAULT_PF_VERTEX_CAP)]
        cap: u64,
    },
    /// Decide whether two vertex multisets on the core are related by refiners.
    Simd {
        digraph: String,
        /// Multiset text such as `1:2 3:1`, or a file holding it.
        m1: String,
        m2: String,
    },
    /// Traces of the powers of the adjacency matrix, k = 1..K.
    Traces { digraph: String, k: usize },
}

#[derive(Clone, Copy)]
enum GenFormat {
    Digraph,
    Relator,
    Adjacency,
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitMode {
    In,
    Out,
}

enum Input {
    Digraph(Digraph),
    Matrix(SquareMatrix),
    Script(MoveScript),
}

/// Malformed or unsupported input (exit 3) or a bad argument (exit 2).
struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn input(message: String) -> Self {
        Failure { message, code: 3 }
    }
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::input(e.to_string())
    }
}

type Outcome = Result<(String, u8), Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// A file path, or a builtin name when no such file exists.
fn load(arg: &str) -> Result<Input, Failure> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Ok(b) = builtin(arg) {
            return Ok(match b {
                Builtin::Digraph(d) => Input::Digraph(d),
                Builtin::Relator(r) => Input::Matrix(r.into_matrix()),
                Builtin::Script(s) => Input::Script(s),
            });
        }
    }
    let text = read_text(path)?;
    let ctx = |e: &dyn std::fmt::Display| Failure::input(format!("{arg}: {e}"));
    if looks_like_digraph(&text) {
        return parse_digraph(&text).map(Input::Digraph).map_err(|e| ctx(&e));
    }
    let first = udaf::text::content_lines(&text).next().map(|(_, l)| l);
    if first == Some("matrix") {
        return parse_script(&text).map(Input::Script).map_err(|e| ctx(&e));
    }
    parse_matrix(&text).map(Input::Matrix).map_err(|e| ctx(&e))
}

struct Loader {
    adjacency: bool,
}

impl Loader {
    fn relator(&self, arg: &str) -> Result<RelatorMatrix, Failure> {
        match load(arg)? {
            Input::Digraph(d) => Ok(d.relator_matrix()),
            Input::Matrix(m) if self.adjacency => Ok(AdjacencyMatrix::new(m).map_err(|e| Failure::input(format!("{arg}: {e}")))?.to_relator()),
            Input::Matrix(m) => RelatorMatrix::new(m).map_err(|e| Failure::input(format!("{arg}: {e}"))),
            Input::Script(_) => Err(Failure::input(format!("{arg}: expected a matrix or digraph, found a script"))),
        }
    }

    fn digraph(&self, arg: &str) -> Result<Digraph, Failure> {
        match load(arg)? {
            Input::Digraph(d) => Ok(d),
            Input::Matrix(_) => Ok(Digraph::from_relator(&self.relator(arg)?)),
            Input::Script(_) => Err(Failure::input(format!("{arg}: expected a matrix or digraph, found a script"))),
        }
    }
}

fn inline(m: &RelatorMatrix) -> String {
    format!("{:?}", m.matrix().rows())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn gen(name: &[String], format: Option<GenFormat>) -> Outcome {
    let key = name.join(" ");
    let item = builtin(&key)
        .map_err(|e| Failure { message: format!("{e}; known: {}", BUILTIN_NAMES.join(", ")), code: 2 })?;
    let text = match (item, format) {
        (Builtin::Script(s), _) => serialize_script(&s),
        (Builtin::Digraph(d), None | Some(GenFormat::Digraph)) => format_digraph(&d),
        (Builtin::Digraph(d), Some(GenFormat::Relator)) => format_matrix(d.relator_matrix().matrix()),
        (Builtin::Digraph(d), Some(GenFormat::Adjacency)) => format_matrix(d.adjacency_matrix().matrix()),
        (Builtin::Relator(r), None | Some(GenFormat::Relator)) => format_matrix(r.matrix()),
        (Builtin::Relator(r), Some(GenFormat::Adjacency)) => format_matrix(r.to_adjacency().matrix()),
        (Builtin::Relator(r), Some(GenFormat::Digraph)) => format_digraph(&Digraph::from_relator(&r)),
    };
    Ok((text, 0))
}

fn info(loader: &Loader, arg: &str) -> Outcome {
    let d = loader.digraph(arg)?;
    let core = d.core().digraph;
    let mut out = String::new();
    writeln!(out, "vertices: {}", d.vertex_count())?;
    writeln!(out, "edges: {}", d.edge_count())?;
    writeln!(out, "udaf: {}", yes_no(d.is_udaf()))?;
    writeln!(out, "strongly connected: {}", yes_no(d.is_strongly_connected()))?;
    writeln!(out, "core: {} vertices, {} edges", core.vertex_count(), core.edge_count())?;
    writeln!(out, "core components: {}", if core.vertex_count() == 0 { 0 } else { core.strongly_connected_components().len() })?;
    Ok((out, 0))
}

fn invariants(loader: &Loader, arg: &str) -> Outcome {
    let rel = loader.relator(arg)?;
    let mut out = String::new();
    writeln!(out, "size: {}", rel.size())?;
    writeln!(out, "det: {}", rel.determinant())?;
    writeln!(out, "signed det: {}", rel.signed_determinant())?;
    let smith = smith_normal_form(&snf::to_big(&rel.matrix().rows()));
    let diag: Vec<String> = smith.diagonal.iter().map(|x| x.to_string()).collect();
    writeln!(out, "snf diagonal: [{}]", diag.join(", "))?;
    match component_invariants(&Digraph::from_relator(&rel)) {
        Ok(inv) => writeln!(out, "dimension group: {inv}")?,
        Err(e) => writeln!(out, "dimension group: {e}")?,
    }
    Ok((out, 0))
}

fn weak(loader: &Loader, a: &str, b: &str) -> Outcome {
    let ia = component_invariants(&loader.digraph(a)?).map_err(|e| Failure::input(format!("{a}: {e}")))?;
    let ib = component_invariants(&loader.digraph(b)?).map_err(|e| Failure::input(format!("{b}: {e}")))?;
    if ia == ib {
        Ok((format!("weakly equivalent: {ia}\n"), 0))
    } else {
        Ok((format!("invariants differ: {ia} vs {ib}\n"), 1))
    }
}

fn det_check(loader: &Loader, a: &str, b: &str) -> Outcome {
    let (ra, rb) = (loader.relator(a)?, loader.relator(b)?);
    let ok = check_det_compatible(&ra, &rb);
    let verdict = if ok { "compatible" } else { "incompatible" };
    Ok((format!("signed det: {} vs {}\n{verdict}\n", ra.signed_determinant(), rb.signed_determinant()), u8::from(!ok)))
}

fn verify(arg: &str) -> Outcome {
    let script = match load(arg)? {
        Input::Script(s) => s,
        _ => return Err(Failure::input(format!("{arg}: expected a script"))),
    };
    let report = verify_script(&script);
    let mut out = String::new();
    writeln!(out, "start: {} signed det {}", inline(&script.initial), report.invariant_trace[0])?;
    for (k, mv) in report.applied.iter().enumerate() {
        writeln!(out, "step {}: {mv} -> {} signed det {}", k + 1, inline(&report.intermediates[k + 1]), report.invariant_trace[k + 1])?;
    }
    match &report.status {
        VerificationStatus::Verified => {
            writeln!(out, "verified: {} steps", script.moves.len())?;
            Ok((out, 0))
        }
        VerificationStatus::Failed { step, reason } => {
            match reason {
                FailureReason::Illegal(e) => writeln!(out, "failed at step {step}: {e}")?,
                FailureReason::FinalMismatch { reached } => {
                    writeln!(out, "failed: reached {} but the target is {}", inline(reached), inline(&script.claimed_final))?
                }
            }
            Ok((out, 1))
        }
    }
}

fn search(loader: &Loader, a: &str, b: &str, options: SearchOptions, emit: Option<&Path>) -> Outcome {
    let (ra, rb) = (loader.relator(a)?, loader.relator(b)?);
    let outcome = find_certificate(&ra, &rb, &options)?;
    let mut out = String::new();
    let code = match outcome {
        SearchOutcome::Found(script) => {
            writeln!(out, "found: {} moves", script.moves.len())?;
            for mv in &script.moves {
                writeln!(out, "{mv}")?;
            }
            if let Some(path) = emit {
                std::fs::write(path, serialize_script(&script)).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            }
            0
        }
        SearchOutcome::ExhaustedWithinBudget { states, depth, state_limit_hit } => {
            let limit = if state_limit_hit { ", state limit hit" } else { "" };
            writeln!(out, "not found within budget: {states} states, depth {depth}{limit}")?;
            1
        }
        SearchOutcome::PrunedImpossible(reason) => {
            writeln!(out, "impossible: {reason}")?;
            1
        }
    };
    Ok((out, code))
}

fn describe_folding(out: &mut String, f: &LabeledFolding) -> std::fmt::Result {
    let one_based = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ");
    writeln!(out, "# vertex map: {}", one_based(&f.vertex_map))?;
    writeln!(out, "# edge map: {}", one_based(&f.edge_map))
}

fn split(loader: &Loader, arg: &str, mode: SplitMode, partition: Option<&Path>) -> Outcome {
    let d = loader.digraph(arg)?;
    let blocks = match partition {
        Some(p) => parse_partition(&read_text(p)?, d.edge_count()).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
        None => Vec::new(),
    };
    let p = EdgePartition::from_blocks(d.edge_count(), blocks)?;
    let (s, f) = match mode {
        SplitMode::Out => out_split(&d, &p)?,
        SplitMode::In => in_split(&d, &p)?,
    };
    let mut out = format_digraph(&s);
    describe_folding(&mut out, &f)?;
    Ok((out, 0))
}

fn pf(loader: &Loader, arg: &str, past: i64, future: i64, cap: u64) -> Outcome {
    let d = loader.digraph(arg)?;
    let (s, f) = past_future_digraph(&d, past, future, cap)?;
    let mut out = format_digraph(&s);
    describe_folding(&mut out, &f)?;
    Ok((out, 0))
}

fn multiset_arg(arg: &str, n: usize) -> Result<VertexMultiset, Failure> {
    let path = Path::new(arg);
    let text = if path.is_file() { read_text(path)? } else { arg.to_string() };
    Ok(VertexMultiset::new(parse_multiset(&text, n).map_err(|e| Failure::input(format!("{arg}: {e}")))?))
}

fn simd(loader: &Loader, arg: &str, m1: &str, m2: &str) -> Outcome {
    let d = loader.digraph(arg)?;
    let core = d.core().digraph;
    let n = core.vertex_count();
    let (a, b) = (multiset_arg(m1, n)?, multiset_arg(m2, n)?);
    let related = sim_d_equivalent(&a, &b, &d)?;
    let mut out = String::new();
    if related {
        writeln!(out, "equivalent")?;
        if let Some(y) = refiner_witness(&a, &b, &core) {
            let y: Vec<String> = y.iter().map(|c| c.to_string()).collect();
            writeln!(out, "refiner coefficients: {}", y.join(" "))?;
        }
    } else {
        writeln!(out, "not equivalent")?;
    }
    Ok((out, u8::from(!related)))
}

fn traces(loader: &Loader, arg: &str, k: usize) -> Outcome {
    let d = loader.digraph(arg)?;
    let mut out = String::new();
    for (j, t) in d.trace_sequence(k).iter().enumerate() {
        writeln!(out, "{} {t}", j + 1)?;
    }
    Ok((out, 0))
}

fn run(cli: Cli) -> Outcome {
    let loader = Loader { adjacency: cli.semantics.adjacency };
    match cli.command {
        Command::Gen { name, digraph } => {
            let format = if digraph {
                Some(GenFormat::Digraph)
            } else if cli.semantics.adjacency {
                Some(GenFormat::Adjacency)
            } else if cli.semantics.relator {
                Some(GenFormat::Relator)
            } else {
                None
            };
            gen(&name, format)
        }
        Command::Info { input } => info(&loader, &input),
        Command::Invariants { input } => invariants(&loader, &input),
        Command::Weak { a, b } => weak(&loader, &a, &b),
        Command::DetCheck { a, b } => det_check(&loader, &a, &b),
        Command::Verify { script } => verify(&script),
        Command::Search { a, b, max_steps, max_size, max_entry, max_states, jobs, no_cross, dead_moves, emit_script } => {
            let budget = SearchBudget { max_steps, max_matrix_size: max_size, max_entry_abs: max_entry, max_states };
            let options = SearchOptions { budget, jobs, no_cross, dead_moves };
            search(&loader, &a, &b, options, emit_script.as_deref())
        }
        Command::Split { digraph, mode, partition } => split(&loader, &digraph, mode, partition.as_deref()),
        Command::Pf { digraph, past, future, cap } => pf(&loader, &digraph, past, future, cap),
        Command::Simd { digraph, m1, m2 } => simd(&loader, &digraph, &m1, &m2),
        Command::Traces { digraph, k } => traces(&loader, &digraph, k),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
