//! `inctab`: operator calculus and audit engine for increasing tableaux.

use clap::{Parser, Subcommand, ValueEnum};
use inctab::audits::{
    audit_dist, audit_frame_theorem, audit_full_periodicity, audit_homomesy,
    audit_homomesy_suite, audit_operator_identities, audit_rot_evac_frame, scan_three_row,
    AuditError, AuditReport, ScanOptions, StatSet,
};
use inctab::dynamics::{
    dual_evacuate, evacuate, growth_diagram, orbit, promote_inverse, promote_with_trace,
    DynamicsError, GrowthDiagram, DEFAULT_ORBIT_BUDGET,
};
use inctab::enumeration::{enumerate, orbit_partition, EnumSpec};
use inctab::format::{
    lattice_path, parse_cells, parse_input, print_filling, print_tableau, print_tableau_json,
    render_growth_svg, render_growth_text, ParsedFilling, TableauJson,
};
use inctab::kjdt::{rectify, slide_with_trace, CornerStrategy};
use inctab::shapes::{Cell, Shape};
use inctab::tableaux::IncreasingTableau;
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_COUNTEREXAMPLE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "inctab",
    version,
    about = "Increasing tableaux: jeu de taquin, promotion, evacuation, growth diagrams, and exhaustive audits"
)]
struct Cli {
    /// Emit JSON instead of the text format (reports are always JSON).
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for enumeration and audits.
    #[arg(long, global = true, env = "INCTAB_JOBS", default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a tableau or bullet-filling file.
    Validate { file: String },
    /// Apply K-promotion (or its inverse, for negative step counts).
    Promote {
        /// Number of promotions; negative values invert.
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        steps: i64,
        /// Print every intermediate stage of each promotion.
        #[arg(long)]
        trace: bool,
        file: String,
    },
    /// Rectify a skew tableau by iterated slides.
    Rectify {
        /// "all" for every inner corner each step, or "random:<seed>".
        #[arg(long, default_value = "all")]
        strategy: String,
        /// Print each slide's intermediate stages.
        #[arg(long)]
        trace: bool,
        file: String,
    },
    /// One jeu de taquin slide at the given inner corners.
    Slide {
        /// Inner corners, e.g. "(1,2),(2,1)".
        #[arg(long)]
        corners: String,
        #[arg(long)]
        trace: bool,
        file: String,
    },
    /// K-evacuation.
    Evacuate { file: String },
    /// Dual K-evacuation.
    DualEvacuate { file: String },
    /// Growth diagram of promotion powers.
    Growth {
        /// Row window "j_min:j_max" (default "0:q").
        #[arg(long)]
        rows: Option<String>,
        #[arg(long, value_enum, default_value_t = GrowthFormat::Text)]
        format: GrowthFormat,
        /// Shade every partition containing this box, e.g. "(2,4)".
        #[arg(long)]
        shade: Option<String>,
        /// Emit the (k, rank) diagonal lattice path for this box instead
        /// of rendering.
        #[arg(long)]
        lattice_path: Option<String>,
        file: String,
    },
    /// Walk the promotion orbit of one tableau.
    Orbit {
        #[arg(long, default_value_t = DEFAULT_ORBIT_BUDGET)]
        budget: u64,
        /// Print every orbit element, not just the size and representative.
        #[arg(long)]
        elements: bool,
        file: String,
    },
    /// Stream every increasing tableau of a shape and ceiling.
    Enumerate {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        count_only: bool,
    },
    /// Partition a family into promotion orbits.
    Orbits {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        q: u32,
        /// Print an orbit-size histogram as JSON.
        #[arg(long)]
        summary: bool,
        #[arg(long, default_value_t = DEFAULT_ORBIT_BUDGET)]
        budget: u64,
    },
    /// Exhaustively verify a statement over a family; reports are JSON.
    Audit {
        #[arg(value_enum)]
        kind: AuditKind,
        #[arg(long)]
        shape: String,
        #[arg(long)]
        q: u32,
        /// For homomesy: full-frame | corners | first-last-row | pairs |
        /// suite | custom:(r,c),(r,c),...
        #[arg(long, default_value = "suite")]
        stat_set: String,
        #[arg(long, default_value_t = DEFAULT_ORBIT_BUDGET)]
        budget: u64,
        /// Write the report(s) here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan 3-row rectangles for a counterexample to q-periodicity.
    #[command(name = "scan-3row")]
    Scan3Row {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        /// Checkpoint file: read to resume, written as the scan advances.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Maximum promotions before stopping with a resumable checkpoint.
        #[arg(long)]
        budget: Option<u64>,
        /// Orbits between checkpoint writes.
        #[arg(long, default_value_t = 1000)]
        checkpoint_every: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GrowthFormat {
    Text,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum AuditKind {
    /// Frame labels are q-periodic under promotion.
    Frame,
    /// Orbit averages of rotation-fixed frame statistics.
    Homomesy,
    /// Evacuation operator identities.
    Identities,
    /// Rotation and evacuation agree on the frame.
    RotEvac,
    /// Distribution multisets are evacuation-invariant.
    Dist,
    /// Whole tableaux are q-periodic (true for two rows; open for three).
    Periodicity,
}

struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    fn usage(msg: impl fmt::Display) -> Self {
        CliError {
            code: EXIT_USAGE,
            msg: msg.to_string(),
        }
    }
}

impl From<AuditError> for CliError {
    fn from(e: AuditError) -> Self {
        let code = match e {
            AuditError::Budget(_) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        CliError {
            code: EXIT_BUDGET,
            msg: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(e)
    }
}

fn main() -> ExitCode {
    // die quietly when a pipe downstream closes (e.g. `inctab ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

fn read_source(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{path}: {e}")))
    }
}

fn load(path: &str) -> Result<ParsedFilling, CliError> {
    parse_input(&read_source(path)?).map_err(CliError::usage)
}

fn load_tableau(path: &str) -> Result<IncreasingTableau, CliError> {
    load(path)?.into_tableau().map_err(CliError::usage)
}

fn emit_tableau(t: &IncreasingTableau, json: bool) {
    if json {
        println!("{}", print_tableau_json(t));
    } else {
        print!("{}", print_tableau(t));
    }
}

fn parse_one_cell(input: &str) -> Result<Cell, CliError> {
    let cells = parse_cells(input).map_err(CliError::usage)?;
    match cells.as_slice() {
        [c] => Ok(*c),
        _ => Err(CliError::usage(format!(
            "expected a single box, got {input:?}"
        ))),
    }
}

fn parse_spec(shape: &str, q: u32) -> Result<EnumSpec, CliError> {
    let shape: Shape = shape.parse().map_err(CliError::usage)?;
    if !shape.is_straight() {
        return Err(CliError::usage("enumeration requires a straight shape"));
    }
    Ok(EnumSpec::new(shape, q))
}

fn parse_strategy(s: &str) -> Result<CornerStrategy, CliError> {
    match s {
        "all" => Ok(CornerStrategy::AllCorners),
        _ => match s.split_once(':') {
            Some(("random", seed)) => seed
                .parse::<u64>()
                .map(CornerStrategy::SeededRandom)
                .map_err(|_| CliError::usage(format!("bad seed {seed:?}"))),
            _ => Err(CliError::usage(format!(
                "unknown strategy {s:?}; use \"all\" or \"random:<seed>\""
            ))),
        },
    }
}

fn write_or_print(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(CliError::from),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn report_exit(reports: &[AuditReport]) -> u8 {
    if reports.iter().all(AuditReport::passed) {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let json = cli.json;
    let jobs = cli.jobs.max(1);
    match cli.command {
        Command::Validate { file } => match load(&file)? {
            ParsedFilling::Tableau(t) => {
                println!(
                    "ok: increasing tableau, shape {}, q={}, {} boxes{}",
                    t.shape(),
                    t.ceiling(),
                    t.num_cells(),
                    if t.is_standard() { ", standard" } else { "" }
                );
                Ok(EXIT_OK)
            }
            ParsedFilling::Bullets(x) => {
                println!(
                    "ok: bullet filling, shape {}, q={}, {} bullets",
                    x.shape(),
                    x.ceiling(),
                    x.bullets().len()
                );
                Ok(EXIT_OK)
            }
        },

        Command::Promote { steps, trace, file } => {
            let mut t = load_tableau(&file)?;
            if steps >= 0 {
                for step in 0..steps {
                    if trace {
                        if steps > 1 {
                            println!("# promotion {}", step + 1);
                        }
                        let (next, stages) = promote_with_trace(&t);
                        for s in &stages {
                            println!("== {}", s.label);
                            print!("{}", print_filling(&s.filling));
                        }
                        println!("== result");
                        t = next;
                    } else {
                        t = inctab::dynamics::promote(&t);
                    }
                }
            } else {
                for _ in 0..-steps {
                    t = promote_inverse(&t);
                }
            }
            emit_tableau(&t, json);
            Ok(EXIT_OK)
        }

        Command::Rectify {
            strategy,
            trace,
            file,
        } => {
            let t = load_tableau(&file)?;
            let strategy = parse_strategy(&strategy)?;
            if trace {
                let mut current = t;
                let mut slide_no = 0;
                while !current.shape().is_straight() {
                    slide_no += 1;
                    let corners = current.shape().inner_corners();
                    println!("# slide {slide_no} at {}", cells_label(&corners));
                    current = slide_with_trace(&current, &corners, |label, x| {
                        println!("== {label}");
                        print!("{}", print_filling(x));
                    })
                    .map_err(CliError::usage)?;
                }
                emit_tableau(&current, json);
            } else {
                emit_tableau(&rectify(&t, &strategy), json);
            }
            Ok(EXIT_OK)
        }

        Command::Slide {
            corners,
            trace,
            file,
        } => {
            let t = load_tableau(&file)?;
            let corners = parse_cells(&corners).map_err(CliError::usage)?;
            let out = if trace {
                slide_with_trace(&t, &corners, |label, x| {
                    println!("== {label}");
                    print!("{}", print_filling(x));
                })
            } else {
                inctab::kjdt::slide(&t, &corners)
            }
            .map_err(CliError::usage)?;
            emit_tableau(&out, json);
            Ok(EXIT_OK)
        }

        Command::Evacuate { file } => {
            let t = load_tableau(&file)?;
            require_straight(&t)?;
            emit_tableau(&evacuate(&t), json);
            Ok(EXIT_OK)
        }

        Command::DualEvacuate { file } => {
            let t = load_tableau(&file)?;
            require_straight(&t)?;
            emit_tableau(&dual_evacuate(&t), json);
            Ok(EXIT_OK)
        }

        Command::Growth {
            rows,
            format,
            shade,
            lattice_path: path_box,
            file,
        } => {
            let t = load_tableau(&file)?;
            require_straight(&t)?;
            let (j_min, j_max) = match rows {
                None => (0, t.ceiling() as i64),
                Some(spec) => parse_window(&spec)?,
            };
            let gd = growth_diagram(&t, j_min, j_max);
            if let Some(b) = path_box {
                let spec = b.strip_prefix("b=").unwrap_or(&b);
                return emit_lattice_path(&gd, parse_one_cell(spec)?, json);
            }
            let shade = shade.map(|s| parse_one_cell(&s)).transpose()?;
            match format {
                GrowthFormat::Text => print!("{}", render_growth_text(&gd, shade)),
                GrowthFormat::Svg => print!("{}", render_growth_svg(&gd, shade)),
            }
            Ok(EXIT_OK)
        }

        Command::Orbit {
            budget,
            elements,
            file,
        } => {
            let t = load_tableau(&file)?;
            let o = orbit(&t, budget)?;
            if json {
                let mut value = json!({
                    "size": o.size(),
                    "canonical": TableauJson::from_tableau(o.canonical()),
                });
                if elements {
                    value["elements"] = json!(o
                        .elements()
                        .iter()
                        .map(TableauJson::from_tableau)
                        .collect::<Vec<_>>());
                }
                println!("{value}");
            } else {
                println!("orbit size {}", o.size());
                if elements {
                    for e in o.elements() {
                        println!();
                        print!("{}", print_tableau(e));
                    }
                } else {
                    print!("{}", print_tableau(o.canonical()));
                }
            }
            Ok(EXIT_OK)
        }

        Command::Enumerate {
            shape,
            q,
            count_only,
        } => {
            let spec = parse_spec(&shape, q)?;
            if count_only {
                let count = if jobs > 1 {
                    inctab::enumeration::count_parallel(&spec, jobs)
                } else {
                    inctab::enumeration::count(&spec)
                };
                println!("{count}");
                return Ok(EXIT_OK);
            }
            let mut first = true;
            for t in enumerate(&spec) {
                if json {
                    println!("{}", print_tableau_json(&t));
                } else {
                    if !first {
                        println!();
                    }
                    print!("{}", print_tableau(&t));
                }
                first = false;
            }
            Ok(EXIT_OK)
        }

        Command::Orbits {
            shape,
            q,
            summary,
            budget,
        } => {
            let spec = parse_spec(&shape, q)?;
            let orbits = orbit_partition(&spec, budget, jobs)?;
            if summary {
                let mut histogram: BTreeMap<usize, u64> = BTreeMap::new();
                for o in &orbits {
                    *histogram.entry(o.size()).or_default() += 1;
                }
                let total: u64 = orbits.iter().map(|o| o.size() as u64).sum();
                println!(
                    "{}",
                    json!({
                        "shape": spec.shape().to_string(),
                        "q": q,
                        "tableaux": total,
                        "orbits": orbits.len(),
                        "histogram": histogram
                            .into_iter()
                            .map(|(size, count)| (size.to_string(), count))
                            .collect::<BTreeMap<String, u64>>(),
                    })
                );
            } else {
                for o in &orbits {
                    println!("# size {}", o.size());
                    print!("{}", print_tableau(o.canonical()));
                    println!();
                }
            }
            Ok(EXIT_OK)
        }

        Command::Audit {
            kind,
            shape,
            q,
            stat_set,
            budget,
            out,
        } => {
            let spec = parse_spec(&shape, q)?;
            let reports: Vec<AuditReport> = match kind {
                AuditKind::Frame => vec![audit_frame_theorem(&spec, jobs, budget)?],
                AuditKind::Identities => vec![audit_operator_identities(&spec, jobs)?],
                AuditKind::RotEvac => vec![audit_rot_evac_frame(&spec, jobs)?],
                AuditKind::Dist => vec![audit_dist(&spec, jobs, budget)?],
                AuditKind::Periodicity => vec![audit_full_periodicity(&spec, jobs, budget)?],
                AuditKind::Homomesy => homomesy_reports(&spec, &stat_set, jobs, budget)?,
            };
            let text = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0]).expect("report serializes")
            } else {
                serde_json::to_string_pretty(&reports).expect("reports serialize")
            };
            write_or_print(out.as_ref(), &text)?;
            for r in &reports {
                eprintln!(
                    "{}: {} ({} tableaux, {} orbits, {} ms)",
                    r.audit, r.verdict, r.instances, r.orbits, r.elapsed_ms
                );
            }
            Ok(report_exit(&reports))
        }

        Command::Scan3Row {
            n,
            q,
            resume,
            budget,
            checkpoint_every,
            out,
        } => {
            let opts = ScanOptions {
                budget,
                checkpoint: resume.as_deref(),
                checkpoint_every,
            };
            let outcome = scan_three_row(n, q, &opts)?;
            let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
            write_or_print(out.as_ref(), &text)?;
            if !outcome.complete {
                eprintln!(
                    "budget exhausted after {} promotions; checkpoint covers {} orbits",
                    outcome.checkpoint.promotions, outcome.checkpoint.orbits
                );
                return Ok(EXIT_BUDGET);
            }
            Ok(report_exit(std::slice::from_ref(&outcome.report)))
        }
    }
}

fn require_straight(t: &IncreasingTableau) -> Result<(), CliError> {
    if t.shape().is_straight() {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "operation requires a straight shape, got {}",
            t.shape()
        )))
    }
}

fn cells_label(cells: &[Cell]) -> String {
    cells
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_window(spec: &str) -> Result<(i64, i64), CliError> {
    let err = || CliError::usage(format!("bad row window {spec:?}; expected \"min:max\""));
    let (lo, hi) = spec.split_once(':').ok_or_else(err)?;
    let lo: i64 = lo.trim().parse().map_err(|_| err())?;
    let hi: i64 = hi.trim().parse().map_err(|_| err())?;
    if lo > 0 || hi < 0 {
        return Err(CliError::usage(format!(
            "row window [{lo}, {hi}] must contain 0"
        )));
    }
    Ok((lo, hi))
}

fn emit_lattice_path(gd: &GrowthDiagram, b: Cell, json: bool) -> Result<u8, CliError> {
    let points = lattice_path(gd, b);
    if json {
        println!("{}", json!(points));
    } else {
        for (k, rank) in points {
            println!("{k} {rank}");
        }
    }
    Ok(EXIT_OK)
}

fn homomesy_reports(
    spec: &EnumSpec,
    stat_set: &str,
    jobs: usize,
    budget: u64,
) -> Result<Vec<AuditReport>, CliError> {
    let (m, n) = spec
        .shape()
        .rectangle_dims()
        .filter(|&(m, n)| m > 0 && n > 0)
        .ok_or_else(|| CliError::usage("homomesy audits require a rectangle"))?;
    let single = |set: StatSet| -> Result<Vec<AuditReport>, CliError> {
        Ok(vec![audit_homomesy(spec, &set, jobs, budget)?])
    };
    match stat_set {
        "suite" => Ok(audit_homomesy_suite(spec, jobs, budget)?),
        "full-frame" => single(StatSet::full_frame(m, n)),
        "corners" => single(StatSet::corners(m, n)),
        "first-last-row" => single(StatSet::first_last_row(m, n)),
        "pairs" => {
            let mut reports = Vec::new();
            let mut seen = std::collections::BTreeSet::new();
            for b in inctab::shapes::frame(m, n).cells() {
                let partner = inctab::shapes::rotate_box(m, n, b);
                if seen.insert(b.min(partner)) {
                    reports.push(audit_homomesy(spec, &StatSet::pair(m, n, b)?, jobs, budget)?);
                }
            }
            Ok(reports)
        }
        custom => match custom.strip_prefix("custom:") {
            Some(list) => {
                let cells = parse_cells(list).map_err(CliError::usage)?;
                single(StatSet::symmetric(m, n, cells, "custom")?)
            }
            None => Err(CliError::usage(format!(
                "unknown stat set {custom:?}; use full-frame | corners | first-last-row | \
                 pairs | suite | custom:(r,c),..."
            ))),
        },
    }
}
