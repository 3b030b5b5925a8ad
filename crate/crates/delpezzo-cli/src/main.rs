//! `delpezzo`: command-line access to the toolkit.
//!
//! Exit codes: 0 success, 1 domain or usage error (bad literal, bad file,
//! class outside the required cone, unknown subcommand), 2 verification
//! failure (`verify-all` with a failing criterion).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use delpezzo::classes::{classes, orbit_with_cap, ClassKind, DEFAULT_ORBIT_CAP};
use delpezzo::determinant::{bertini_on_x, fixed_divisor_class, rho, rho_half, zeta};
use delpezzo::fan::{chamber_of, cross_path, moduli_status, walls_through};
use delpezzo::gale::{associate, PointConfiguration};
use delpezzo::lattice::{parse_class, parse_rat_class, Basis, PicClass};
use delpezzo::surgery::{bertini_factorization, chi_tangent, degree_ledger, special_surface_profile, walk};
use delpezzo::verify::{run_all_seeded, DEFAULT_SEED};

#[derive(Parser, Debug)]
#[command(name = "delpezzo", version, about = "Exact computations on the degree-one del Pezzo surface S and the blow-up X of P^4 in eight points")]
struct Cli {
    /// Output format. JSON is the default everywhere except `verify-all`,
    /// which prints a table unless a format is given.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Basis of class literals, overriding the subcommand default.
    #[arg(long, global = true, value_parser = parse_basis)]
    basis: Option<Basis>,
    /// Seed for the randomized checks of `verify-all`.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Bound on orbit sizes in `enumerate`.
    #[arg(long, global = true, default_value_t = DEFAULT_ORBIT_CAP)]
    orbit_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Roots,
    MinusOne,
    Conics,
    Cubics,
}

impl From<Kind> for ClassKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Roots => ClassKind::Root,
            Kind::MinusOne => ClassKind::MinusOne,
            Kind::Conics => ClassKind::Conic,
            Kind::Cubics => ClassKind::Cubic,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the roots, (-1)-classes, conics or cubics of S.
    Enumerate {
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Walls of the stability fan containing a class.
    Walls {
        #[arg(long)]
        through: String,
    },
    /// The chamber of an ample class in E, with its label and moduli status.
    Chamber { class: String },
    /// Walls crossed along the segment from L0 to L1.
    Path {
        l0: String,
        l1: String,
        /// Same as `--format`.
        #[arg(long, value_enum)]
        report: Option<Format>,
    },
    /// The surgery ledger of the walk from L0 to L1.
    Walk {
        l0: String,
        l1: String,
        /// Include running invariants after each event.
        #[arg(long)]
        invariants: bool,
    },
    /// ρ of a class on S, and ρ/2.
    Rho { class: String },
    /// ζ of a curve class on X.
    Zeta { class: String },
    /// The Bertini involution on Pic(X).
    BertiniX { class: String },
    /// The fixed-divisor class E_C of every conic C.
    FixedDivisors,
    /// The association of a point configuration read from a JSON file.
    Associate {
        #[arg(long)]
        points: PathBuf,
    },
    /// Run the acceptance suite.
    VerifyAll,
    /// Degree and singularities of the special surface for a cubic and a (-1)-class.
    SurfaceProfile {
        #[arg(long)]
        cubic: String,
        #[arg(long)]
        curve: String,
    },
    /// The factorization of the Bertini involution of X through P^4.
    BertiniFactorization,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Domain(#[from] delpezzo::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {msg}")]
    File { path: String, msg: String },
    #[error(transparent)]
    Io(std::io::Error),
    #[error("{0} of 11 criteria failed")]
    Verification(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 2,
            _ => 1,
        }
    }
}

fn parse_basis(s: &str) -> Result<Basis, String> {
    Basis::from_tag(s).ok_or_else(|| format!("unknown basis {s:?}; expected S, X or Xc"))
}

/// Output of one command: a JSON value plus, where meaningful, a CSV table.
struct Output {
    json: Value,
    csv: Option<(Vec<String>, Vec<Vec<String>>)>,
    summary: Option<String>,
}

impl Output {
    fn json(v: impl Serialize) -> Result<Self, CliError> {
        let json = serde_json::to_value(v).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Output { json, csv: None, summary: None })
    }
}

fn class_header(prefix: &str) -> Vec<String> {
    std::iter::once(format!("{prefix}d")).chain((1..=8).map(|i| format!("{prefix}m{i}"))).collect()
}

/// The serialized name of a unit enum variant.
fn tag(v: &impl Serialize) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        _ => String::new(),
    }
}

fn class_cells(c: &PicClass) -> Vec<String> {
    c.coeffs().iter().map(|x| x.to_string()).collect()
}

struct Ctx {
    basis: Option<Basis>,
    seed: u64,
    orbit_cap: usize,
}

impl Ctx {
    fn class(&self, s: &str, default: Basis) -> Result<PicClass, CliError> {
        Ok(parse_class(s, self.basis.unwrap_or(default))?)
    }

    fn rat_class(&self, s: &str, default: Basis) -> Result<delpezzo::RatClass, CliError> {
        Ok(parse_rat_class(s, self.basis.unwrap_or(default))?)
    }
}

fn run(cmd: &Command, ctx: &Ctx) -> Result<Output, CliError> {
    match cmd {
        Command::Enumerate { kind } => {
            let kind = ClassKind::from(*kind);
            let list: Vec<PicClass> = if ctx.orbit_cap == DEFAULT_ORBIT_CAP {
                delpezzo::classes::enumerate(kind)?.to_vec()
            } else {
                let mut v = orbit_with_cap(&kind.seed(), ctx.orbit_cap)?;
                v.sort();
                v
            };
            let rows = list.iter().map(class_cells).collect();
            let mut out = Output::json(json!({ "kind": kind, "count": list.len(), "classes": list }))?;
            out.csv = Some((class_header(""), rows));
            out.summary = Some(format!("{kind}: {}", list.len()));
            Ok(out)
        }
        Command::Walls { through } => {
            let l = ctx.rat_class(through, Basis::Surface)?;
            let walls = walls_through(&l)?;
            let rows = walls
                .iter()
                .map(|w| std::iter::once(w.kind.to_string()).chain(class_cells(&w.center)).collect())
                .collect();
            let mut out = Output::json(json!({ "class": l, "count": walls.len(), "walls": walls }))?;
            let mut header = vec!["kind".to_string()];
            header.extend(class_header(""));
            out.csv = Some((header, rows));
            Ok(out)
        }
        Command::Chamber { class } => {
            let l = ctx.rat_class(class, Basis::Surface)?;
            let ch = chamber_of(&l)?;
            let status = moduli_status(&l)?;
            let on: Vec<PicClass> = walls_through(&l)?.iter().map(|w| w.center).collect();
            Output::json(json!({
                "class": l,
                "label": ch.label.map(|x| x.kind),
                "witness": ch.label.and_then(|x| x.witness),
                "representative": ch.representative,
                "negative_walls": ch.signs.count_negative(),
                "on_walls": on,
                "moduli": status,
            }))
        }
        Command::Path { l0, l1, .. } => {
            let a = ctx.rat_class(l0, Basis::Surface)?;
            let b = ctx.rat_class(l1, Basis::Surface)?;
            let events = cross_path(&a, &b)?;
            let mut rows = Vec::new();
            for e in &events {
                for c in &e.crossings {
                    let mut row = vec![delpezzo::linalg::format_rational(&e.t), c.wall.kind.to_string(), tag(&c.surgery)];
                    row.extend(class_cells(&c.wall.center));
                    rows.push(row);
                }
            }
            let mut out = Output::json(json!({ "from": a, "to": b, "events": events }))?;
            let mut header = vec!["t".to_string(), "kind".to_string(), "surgery".to_string()];
            header.extend(class_header("center_"));
            out.csv = Some((header, rows));
            Ok(out)
        }
        Command::Walk { l0, l1, invariants } => {
            let a = ctx.rat_class(l0, Basis::Surface)?;
            let b = ctx.rat_class(l1, Basis::Surface)?;
            let log = walk(&a, &b)?;
            let mut v = serde_json::to_value(&log).map_err(|e| CliError::Usage(e.to_string()))?;
            if *invariants {
                v["chi_tangent"] = json!(chi_tangent(&log.invariants));
            } else if let Some(obj) = v.as_object_mut() {
                obj.remove("initial");
                obj.remove("invariants");
                if let Some(Value::Array(events)) = obj.get_mut("events") {
                    for e in events {
                        if let Some(o) = e.as_object_mut() {
                            o.remove("invariants");
                        }
                    }
                }
            }
            let rows = log
                .events
                .iter()
                .map(|e| {
                    vec![
                        delpezzo::linalg::format_rational(&e.t),
                        e.kind.map(|k| tag(&k)).unwrap_or_else(|| "MIXED".into()),
                        e.walls.len().to_string(),
                        delpezzo::surgery::format_delta(&e.deltas),
                        e.invariants.to_string(),
                        e.chamber.map(|c| c.to_string()).unwrap_or_default(),
                    ]
                })
                .collect();
            let header = ["t", "kind", "walls", "deltas", "invariants", "chamber"].map(String::from).to_vec();
            Ok(Output { json: v, csv: Some((header, rows)), summary: None })
        }
        Command::Rho { class } => {
            let l = ctx.class(class, Basis::Surface)?;
            let half = rho_half(&l)?;
            Output::json(json!({ "class": l, "rho": rho(&l)?, "rho_half": half, "rho_half_integral": half.is_integral() }))
        }
        Command::Zeta { class } => {
            let g = ctx.class(class, Basis::FourfoldCurve)?;
            Output::json(json!({ "class": g, "zeta": zeta(&g)? }))
        }
        Command::BertiniX { class } => {
            let x = ctx.class(class, Basis::Fourfold)?;
            Output::json(json!({ "class": x, "image": bertini_on_x(&x)? }))
        }
        Command::FixedDivisors => {
            let mut pairs = Vec::new();
            let mut rows = Vec::new();
            for c in classes(ClassKind::Conic) {
                let e = fixed_divisor_class(c)?;
                let mut row = class_cells(c);
                row.extend(class_cells(&e));
                rows.push(row);
                pairs.push(json!({ "conic": c, "divisor": e }));
            }
            let mut header = class_header("conic_");
            header.extend(class_header("divisor_"));
            let mut out = Output::json(json!({ "count": pairs.len(), "fixed_divisors": pairs }))?;
            out.csv = Some((header, rows));
            out.summary = Some(format!("{} fixed divisors", pairs.len()));
            Ok(out)
        }
        Command::Associate { points } => {
            let text = std::fs::read_to_string(points)
                .map_err(|e| CliError::File { path: points.display().to_string(), msg: e.to_string() })?;
            let a = PointConfiguration::from_json(&text)?;
            Output::json(associate(&a)?)
        }
        Command::VerifyAll => {
            let results = run_all_seeded(ctx.seed);
            let rows = results
                .iter()
                .map(|r| {
                    let dev = r.deviations.iter().map(|d| format!("{} | verified: {}", d.stated, d.corrected_claim_holds)).collect::<Vec<_>>();
                    vec![r.id.to_string(), r.title.to_string(), if r.passed { "PASS" } else { "FAIL" }.to_string(), r.detail.clone(), dev.join("; ")]
                })
                .collect();
            let failed = results.iter().filter(|r| !r.passed).count();
            let text = results.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
            let mut out = Output::json(&results)?;
            out.csv = Some((["id", "title", "status", "detail", "deviation"].map(String::from).to_vec(), rows));
            out.summary = Some(format!("{text}\n{}/{} criteria pass", results.len() - failed, results.len()));
            Ok(out)
        }
        Command::SurfaceProfile { cubic, curve } => {
            let h = ctx.class(cubic, Basis::Surface)?;
            let l = ctx.class(curve, Basis::Surface)?;
            let profile = special_surface_profile(&h, &l)?;
            let ledger = degree_ledger(&h, &l).ok();
            Output::json(json!({ "cubic": h, "curve": l, "profile": profile, "ledger": ledger }))
        }
        Command::BertiniFactorization => Output::json(bertini_factorization()?),
    }
}

fn emit(out: &Output, format: Option<Format>, table_default: bool) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    let io = |e: std::io::Error| CliError::Io(e);
    match format {
        Some(Format::Csv) => {
            let (header, rows) = out.csv.as_ref().ok_or_else(|| CliError::Usage("this subcommand has no CSV output; use --format json".into()))?;
            let mut cw = csv::Writer::from_writer(Vec::new());
            cw.write_record(header).and_then(|_| rows.iter().try_for_each(|r| cw.write_record(r))).map_err(|e| CliError::Usage(e.to_string()))?;
            let buf = cw.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
            w.write_all(&buf).map_err(io)?;
            if let Some(s) = &out.summary {
                if !table_default {
                    eprintln!("{s}");
                }
            }
        }
        Some(Format::Json) => {
            serde_json::to_writer(&mut w, &out.json).map_err(|e| CliError::Io(e.into()))?;
            writeln!(w).map_err(io)?;
        }
        None if table_default => {
            writeln!(w, "{}", out.summary.as_deref().unwrap_or_default()).map_err(io)?;
        }
        None => {
            serde_json::to_writer(&mut w, &out.json).map_err(|e| CliError::Io(e.into()))?;
            writeln!(w).map_err(io)?;
            if let Some(s) = &out.summary {
                eprintln!("{s}");
            }
        }
    }
    Ok(())
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("TOOLKIT_THREADS") {
        let n: usize = v.parse().map_err(|_| CliError::Usage(format!("TOOLKIT_THREADS={v:?} is not a thread count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn main_inner(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let ctx = Ctx { basis: cli.basis, seed: cli.seed, orbit_cap: cli.orbit_cap };
    let format = match &cli.command {
        Command::Path { report: Some(f), .. } => Some(*f),
        _ => cli.format,
    };
    let out = run(&cli.command, &ctx)?;
    let verify = matches!(cli.command, Command::VerifyAll);
    emit(&out, format, verify)?;
    if verify {
        let failed = out.json.as_array().map(|a| a.iter().filter(|r| r["passed"] != json!(true)).count()).unwrap_or(0);
        if failed > 0 {
            return Err(CliError::Verification(failed));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
