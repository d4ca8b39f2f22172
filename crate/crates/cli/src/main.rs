use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use leaf_atlas::cells::{classify, Side};
use leaf_atlas::double_bruhat::{decompose, dense_orbit, is_nonempty};
use leaf_atlas::echelon::{stratify_pattern, EchelonPattern};
use leaf_atlas::harness::{run, Campaign, RunConfig};
use leaf_atlas::leaves::{closure_leq, enumerate, hasse, hasse_dot, in_leaf};
use leaf_atlas::sigma::{phi_inv, phi_to_leaf};
use leaf_atlas::{
    classify_leaf, DoubleCellIndex, Error, LeafIndex, Mode, PartialPermutation, Permutation, RationalMatrix,
    SigmaTuple,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "leaf-atlas", version, about = "Torus orbits of symplectic leaves in rectangular matrix spaces")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "LEAF_ATLAS_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orbit indices: enumeration, classification, Hasse diagram.
    #[command(subcommand)]
    Leaves(LeavesCmd),
    /// The tuple parametrization of orbit indices.
    #[command(subcommand)]
    Sigma(SigmaCmd),
    /// Echelon patterns as unions of orbits.
    #[command(subcommand)]
    Echelon(EchelonCmd),
    /// Generalized double Bruhat cells.
    #[command(subcommand)]
    Dbc(DbcCmd),
    /// Run a verification campaign and emit its report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Shape {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ListFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum LeavesCmd {
    Enumerate {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: ListFormat,
    },
    /// Classify a matrix read from FILE ("-" for standard input), as
    /// whitespace-separated rows or a JSON array of rows.
    Classify {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        matrix: PathBuf,
        /// Also test membership in the closure of this orbit index.
        #[arg(long, value_name = "W")]
        closure_of: Option<Permutation>,
    },
    Hasse {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, value_enum, default_value = "json")]
        format: GraphFormat,
    },
}

#[derive(Subcommand)]
enum SigmaCmd {
    Phi {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        t: usize,
        /// JSON object with one-line arrays "y", "v", "z", "u".
        #[arg(long)]
        sigma: String,
    },
    /// The tuple of an orbit index; give --m or --n (or both).
    PhiInv {
        #[arg(long)]
        w: Permutation,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Subcommand)]
enum EchelonCmd {
    /// Strata of a pattern such as "col:4,2:1,3" or "row:2,4:2,4".
    Stratify {
        #[arg(long)]
        pattern: EchelonPattern,
    },
}

#[derive(Args)]
struct CellArgs {
    /// B⁺ class, e.g. "3x3:1->3".
    #[arg(long)]
    w1: PartialPermutation,
    /// B⁻ class.
    #[arg(long)]
    w2: PartialPermutation,
}

#[derive(Subcommand)]
enum DbcCmd {
    Nonempty(CellArgs),
    Decompose(CellArgs),
    Dense(CellArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    campaign: Campaign,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop sampling after this many seconds; the report is then incomplete.
    #[arg(long)]
    time_budget: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Domain(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn schema(kind: &str) -> String {
    format!("leaf-atlas/{kind}/v1")
}

/// Writes to standard output; a closed pipe ends the process quietly.
fn out(text: &str) {
    let mut stdout = io::stdout().lock();
    if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn emit(value: &Value) {
    out(&(serde_json::to_string(value).expect("JSON values serialize") + "\n"));
}

fn read_matrix(path: &PathBuf) -> Result<RationalMatrix, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?
    };
    Ok(RationalMatrix::parse(&text)?)
}

fn check_shape(x: &RationalMatrix, shape: &Shape) -> CmdResult {
    if (x.rows(), x.cols()) != (shape.m, shape.n) {
        return Err(Error::DimensionMismatch {
            expected_rows: shape.m,
            expected_cols: shape.n,
            found_rows: x.rows(),
            found_cols: x.cols(),
        }
        .into());
    }
    Ok(())
}

fn nonzero_shape(m: usize, n: usize) -> CmdResult {
    if m == 0 || n == 0 {
        return Err(Failure::Domain("m and n must be positive".into()));
    }
    Ok(())
}

fn leaves_cmd(cmd: LeavesCmd) -> CmdResult {
    match cmd {
        LeavesCmd::Enumerate { shape, rank, format } => {
            nonzero_shape(shape.m, shape.n)?;
            if let Some(t) = rank {
                if t > shape.m.min(shape.n) {
                    return Err(Error::RankOutOfRange { t, rows: shape.m, cols: shape.n }.into());
                }
            }
            let leaves = enumerate(shape.m, shape.n, rank);
            match format {
                ListFormat::Json => emit(&json!({
                    "schema": schema("leaves"),
                    "m": shape.m,
                    "n": shape.n,
                    "rank": rank,
                    "count": leaves.len(),
                    "leaves": leaves,
                })),
                ListFormat::Table => {
                    let mut table = String::from("w\tt\tdim\n");
                    for l in &leaves {
                        table += &format!("{}\t{}\t{}\n", l.w(), l.t(), l.dim());
                    }
                    out(&table);
                }
            }
        }
        LeavesCmd::Classify { shape, matrix, closure_of } => {
            let x = read_matrix(&matrix)?;
            check_shape(&x, &shape)?;
            let leaf = classify_leaf(&x);
            let mut doc = json!({
                "schema": schema("classify"),
                "leaf": leaf,
                "sigma": phi_inv(&leaf),
                "upper_class": classify(&x, Side::Upper),
                "lower_class": classify(&x, Side::Lower),
            });
            if let Some(w) = closure_of {
                let target = LeafIndex::new(w, shape.m, shape.n)?;
                let by_conditions = in_leaf(&x, &target, Mode::Closure)?;
                debug_assert_eq!(by_conditions, closure_leq(&leaf, &target)?);
                doc["closure_of"] = json!(target);
                doc["in_closure"] = json!(by_conditions);
            }
            emit(&doc);
        }
        LeavesCmd::Hasse { shape, format } => {
            nonzero_shape(shape.m, shape.n)?;
            let (nodes, edges) = hasse(shape.m, shape.n);
            match format {
                GraphFormat::Dot => out(&hasse_dot(&nodes, &edges)),
                GraphFormat::Json => emit(&json!({
                    "schema": schema("hasse"),
                    "m": shape.m,
                    "n": shape.n,
                    "nodes": nodes,
                    // pairs of positions in "nodes", lower end first
                    "edges": edges,
                })),
            }
        }
    }
    Ok(())
}

fn parse_sigma(text: &str, shape: &Shape, t: usize) -> Result<SigmaTuple, Failure> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| Failure::Domain(format!("--sigma: {e}")))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Failure::Domain("--sigma must be a JSON object".into()))?;
    match obj.get("t").and_then(Value::as_u64) {
        Some(given) if given as usize != t => {
            return Err(Failure::Domain(format!("--sigma has t = {given} but --t is {t}")));
        }
        _ => {
            obj.insert("t".into(), json!(t));
        }
    }
    let sigma: SigmaTuple =
        serde_json::from_value(value).map_err(|e| Failure::Domain(format!("--sigma: {e}")))?;
    if (sigma.m(), sigma.n()) != (shape.m, shape.n) {
        return Err(Failure::Domain(format!(
            "tuple has m = {}, n = {} but the shape is {}x{}",
            sigma.m(),
            sigma.n(),
            shape.m,
            shape.n
        )));
    }
    Ok(sigma)
}

fn sigma_cmd(cmd: SigmaCmd) -> CmdResult {
    match cmd {
        SigmaCmd::Phi { shape, t, sigma } => {
            let sigma = parse_sigma(&sigma, &shape, t)?;
            let leaf = phi_to_leaf(&sigma)?;
            emit(&json!({ "schema": schema("sigma"), "sigma": sigma, "leaf": leaf }));
        }
        SigmaCmd::PhiInv { w, m, n } => {
            let size = w.size();
            let (m, n) = match (m, n) {
                (Some(m), Some(n)) => (m, n),
                (Some(m), None) if m < size => (m, size - m),
                (None, Some(n)) if n < size => (size - n, n),
                (None, None) => return Err(Failure::Domain("give --m or --n".into())),
                _ => return Err(Failure::Domain(format!("shape does not fit a permutation of size {size}"))),
            };
            let leaf = LeafIndex::new(w, m, n)?;
            emit(&json!({ "schema": schema("sigma"), "sigma": phi_inv(&leaf), "leaf": leaf }));
        }
    }
    Ok(())
}

fn echelon_cmd(cmd: EchelonCmd) -> CmdResult {
    let EchelonCmd::Stratify { pattern } = cmd;
    let strata: Vec<Value> = stratify_pattern(&pattern)
        .into_iter()
        .map(|s| {
            let leaf = phi_to_leaf(&s.sigma).expect("strata are valid tuples");
            json!({ "pair": s.pair, "sigma": s.sigma, "leaf": leaf })
        })
        .collect();
    emit(&json!({
        "schema": schema("echelon"),
        "pattern": pattern,
        "count": strata.len(),
        "strata": strata,
    }));
    Ok(())
}

fn dbc_cmd(cmd: DbcCmd) -> CmdResult {
    let (which, args) = match cmd {
        DbcCmd::Nonempty(a) => ("nonempty", a),
        DbcCmd::Decompose(a) => ("decompose", a),
        DbcCmd::Dense(a) => ("dense", a),
    };
    let d = DoubleCellIndex::new(args.w1, args.w2)?;
    let mut doc = json!({ "schema": schema("dbc"), "w1": d.w1, "w2": d.w2 });
    match which {
        "nonempty" => doc["nonempty"] = json!(is_nonempty(&d)),
        "decompose" => {
            let orbits: Vec<Value> = decompose(&d)?
                .into_iter()
                .map(|s| json!({ "sigma": s, "leaf": phi_to_leaf(&s).expect("cell orbits are valid") }))
                .collect();
            doc["count"] = json!(orbits.len());
            doc["orbits"] = json!(orbits);
        }
        _ => {
            let s = dense_orbit(&d)?;
            doc["dense"] = json!({ "sigma": s, "leaf": phi_to_leaf(&s)? });
        }
    }
    emit(&doc);
    Ok(())
}

fn verify_cmd(args: VerifyArgs) -> CmdResult {
    let mut cfg = RunConfig::new(args.m, args.n, args.samples, args.seed);
    cfg.time_budget = args.time_budget.map(Duration::from_secs);
    let report = run(args.campaign, &cfg)?;
    let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => out(&text),
    }
    eprintln!(
        "{}: {} passed, {} failed, {} skipped of {}{}",
        report.campaign,
        report.passed,
        report.failed,
        report.skipped,
        report.attempted,
        if report.complete { "" } else { " (incomplete)" }
    );
    if report.success() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Leaves(c) => leaves_cmd(c),
        Command::Sigma(c) => sigma_cmd(c),
        Command::Echelon(c) => echelon_cmd(c),
        Command::Dbc(c) => dbc_cmd(c),
        Command::Verify(a) => verify_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(2),
    }
}
