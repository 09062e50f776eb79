//! The command-line surface: parsing, analysis, search, conversion, cycle
//! evaluation, SVG rendering. Every verb has plain-text output and a
//! `--format=json` variant; exit codes are 2 for parse errors, 1 for domain
//! errors, 0 otherwise.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::convert::convert;
use crate::diagram::{parse_diagram, print_diagram, Diagram};
use crate::group::{parse_group_spec, parse_perm_hom_min, GroupSpec, Perm};
use crate::homotopy::{eval_quotient, psp_rank, read_cycle, QuotientHom};
use crate::render::render_svg;
use crate::search::{
    find_irreducible_jobs, BoundaryFilter, SearchSpec, MAX_DISCS_CAP,
};
use crate::shape::TShape;
use crate::word::{recover_blowup, RelWord, WordError};

#[derive(Debug, Parser)]
#[command(
    name = "diagramma",
    about = "Relative presentations, planar w-diagrams, and second-homotopy cycles",
    version
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze a t-shape: complexity, root, amenability.
    Shape {
        /// The shape, e.g. "T T T'" or compact "++-".
        shape: String,
    },
    /// Analyze a word in G*<t>: shape data, coefficient roles, blow-up.
    Word {
        #[command(flatten)]
        group: GroupArg,
        /// The word, e.g. "a T T b T' T' c d T' e T T".
        word: String,
    },
    /// Validate a diagram file.
    DiagramValidate { file: PathBuf },
    /// Remove dipole pairs from a diagram file.
    DiagramReduce {
        file: PathBuf,
        /// Write the reduced diagram here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Report the irreducibility verdict of a diagram file.
    DiagramIrreducible { file: PathBuf },
    /// Read the relative 2-cycle of a closed diagram, optionally evaluating
    /// it in a finite permutation quotient.
    DiagramCycle {
        file: PathBuf,
        /// Permutation images, e.g. "hom S3 { a = (2 3); b = (1 2); }".
        #[arg(long)]
        hom: Option<String>,
        /// Image of t in cycle notation, e.g. "(1 3)".
        #[arg(long, requires = "hom")]
        t_image: Option<String>,
    },
    /// Convert a diagram over an amenable word into a W-diagram over G*<s>.
    DiagramConvert {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Bounded exhaustive search for irreducible diagrams.
    Search {
        #[command(flatten)]
        group: GroupArg,
        /// The ambient word.
        #[arg(long)]
        word: String,
        /// Disc bound (hard cap 6; DIAGRAMMA_MAX_DISCS lowers the default).
        #[arg(long)]
        max_discs: Option<usize>,
        /// Include diagrams with boundary.
        #[arg(long)]
        boundary: bool,
        /// With --boundary: admit only boundary words of complexity
        /// strictly below this.
        #[arg(long, requires = "boundary")]
        boundary_complexity_below: Option<usize>,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write any irreducible diagram found into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Second homotopy rank of the pseudo-projective plane P_n.
    Psp { n: usize },
    /// Render a diagram file as schematic SVG.
    Render {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct GroupArg {
    /// Group spec: `free:a,b,c`, `group { a: inf; b: 2; }`, or a file path.
    #[arg(long)]
    group: String,
}

impl GroupArg {
    fn resolve(&self) -> Result<Arc<GroupSpec>, CliError> {
        let text = if self.group.contains('{') || self.group.starts_with("free:") {
            self.group.clone()
        } else {
            std::fs::read_to_string(&self.group)
                .map_err(|e| CliError::Parse(format!("group `{}`: {e}", self.group)))?
        };
        parse_group_spec(&text).map_err(|e| CliError::Parse(e.to_string()))
    }
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    Domain(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Domain(m) => m,
        }
    }
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

/// Run the CLI; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through this path too.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(output) => {
            print!("{output}");
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

/// Run a command and capture its output; the integration tests' entry.
/// Returns (exit code, stdout text or error message).
pub fn execute(args: &[&str]) -> (i32, String) {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => return (if e.use_stderr() { 2 } else { 0 }, e.to_string()),
    };
    match dispatch(&cli) {
        Ok(output) => (0, output),
        Err(e) => (e.exit_code(), e.message().to_string()),
    }
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Shape { shape } => {
            let shape = TShape::parse(shape).map_err(|e| CliError::Parse(e.to_string()))?;
            let a = shape.analyze();
            let root_text = a.root.as_ref().map(|r| r.canonical_rotation().to_string());
            Ok(match cli.format {
                Format::Text => format!(
                    "complexity={} root={} amenable={}\n",
                    a.complexity,
                    root_text
                        .as_ref()
                        .map(|r| format!("\"{r}\""))
                        .unwrap_or_else(|| "none".into()),
                    a.amenable
                ),
                Format::Json => pretty(&json!({
                    "verb": "shape",
                    "complexity": a.complexity,
                    "root": root_text,
                    "amenable": a.amenable,
                    "one_clump": a.one_clump,
                    "is_power": a.is_power,
                    "exponent_sum": a.exponent_sum,
                })),
            })
        }
        Command::Word { group, word } => {
            let spec = group.resolve()?;
            let w = RelWord::parse(spec.clone(), word)
                .map_err(|e| CliError::Parse(e.to_string()))?;
            let analysis = w.shape().analyze();
            let roles = w.coefficient_roles().ok();
            let witness = match recover_blowup(&w) {
                Ok(b) => Some(b),
                Err(WordError::NotAmenable | WordError::PowerShape | WordError::TFree) => None,
                Err(e) => return Err(domain(e)),
            };
            Ok(match cli.format {
                Format::Text => {
                    let mut out = String::new();
                    let _ = writeln!(out, "word: {w}");
                    let _ = writeln!(
                        out,
                        "shape: {} complexity={} amenable={}",
                        w.shape(),
                        analysis.complexity,
                        analysis.amenable
                    );
                    if let Some(roles) = &roles {
                        let text: Vec<String> = roles
                            .iter()
                            .enumerate()
                            .map(|(i, r)| format!("{i}:{r}"))
                            .collect();
                        let _ = writeln!(out, "roles: {}", text.join(" "));
                    }
                    if let Some(b) = &witness {
                        let _ = writeln!(out, "blowup: {}", b.display(&spec));
                    }
                    out
                }
                Format::Json => pretty(&json!({
                    "verb": "word",
                    "word": w.to_string(),
                    "shape": w.shape().to_string(),
                    "complexity": analysis.complexity,
                    "amenable": analysis.amenable,
                    "roles": roles.map(|rs| rs.iter().map(|r| r.to_string()).collect::<Vec<_>>()),
                    "blowup": witness.map(|b| b.display(&spec).to_string()),
                })),
            })
        }
        Command::DiagramValidate { file } => {
            let d = load_diagram(file)?;
            let report = d.validate();
            Ok(match cli.format {
                Format::Text => {
                    let mut out = format!("valid={}\n", report.is_valid());
                    for f in &report.failures {
                        let _ = writeln!(out, "failure: {f}");
                    }
                    out
                }
                Format::Json => pretty(&json!({
                    "verb": "diagram-validate",
                    "valid": report.is_valid(),
                    "failures": report.failures.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                })),
            })
        }
        Command::DiagramReduce { file, out } => {
            let d = load_diagram(file)?;
            let reduced = d.reduce().map_err(domain)?;
            let text = print_diagram(&reduced).map_err(domain)?;
            if let Some(path) = out {
                std::fs::write(path, &text).map_err(domain)?;
            }
            Ok(match cli.format {
                Format::Text => {
                    if out.is_some() {
                        format!(
                            "discs={} arcs={} written\n",
                            reduced.discs.len(),
                            reduced.arcs.len()
                        )
                    } else {
                        text
                    }
                }
                Format::Json => pretty(&json!({
                    "verb": "diagram-reduce",
                    "discs": reduced.discs.len(),
                    "arcs": reduced.arcs.len(),
                    "diagram": text,
                })),
            })
        }
        Command::DiagramIrreducible { file } => {
            let d = load_diagram(file)?;
            let rep = d.is_irreducible();
            Ok(match cli.format {
                Format::Text => format!(
                    "connected={} has_main_disc={} dipole_free={} twoleg_strings_ok={} irreducible={}\n",
                    rep.connected,
                    rep.has_main_disc,
                    rep.dipole_free,
                    rep.twoleg_strings_ok,
                    rep.verdict()
                ),
                Format::Json => pretty(&json!({
                    "verb": "diagram-irreducible",
                    "connected": rep.connected,
                    "has_main_disc": rep.has_main_disc,
                    "dipole_free": rep.dipole_free,
                    "twoleg_strings_ok": rep.twoleg_strings_ok,
                    "irreducible": rep.verdict(),
                })),
            })
        }
        Command::DiagramCycle { file, hom, t_image } => {
            let d = load_diagram(file)?;
            let cycle = read_cycle(&d).map_err(domain)?;
            let cycle_text = cycle.display(&d.group).to_string();
            let evaluation = match (hom, t_image) {
                (Some(hom_text), Some(t_text)) => {
                    let t_cycles = parse_cycles_text(t_text)?;
                    let t_max = t_cycles.iter().flatten().copied().max().unwrap_or(1);
                    let hom = parse_perm_hom_min(d.group.clone(), hom_text, t_max)
                        .map_err(|e| CliError::Parse(e.to_string()))?;
                    let t = Perm::from_cycles(hom.degree, &t_cycles)
                        .map_err(|e| CliError::Parse(e.to_string()))?;
                    let q = QuotientHom::new(hom, t);
                    Some(eval_quotient(&cycle, &q, &d.word).map_err(domain)?)
                }
                _ => None,
            };
            Ok(match cli.format {
                Format::Text => {
                    let mut out = format!("cycle: {cycle_text}\n");
                    if let Some(ev) = &evaluation {
                        let coeffs: Vec<String> = ev
                            .coefficients
                            .iter()
                            .map(|(p, c)| format!("{}:{c:+}", p.cycle_string()))
                            .collect();
                        let _ = writeln!(out, "evaluation: {}", coeffs.join(" "));
                        let _ = writeln!(out, "is_zero={}", ev.is_zero());
                    }
                    out
                }
                Format::Json => pretty(&json!({
                    "verb": "diagram-cycle",
                    "cycle": cycle_text,
                    "evaluation": evaluation.as_ref().map(|ev| {
                        ev.coefficients
                            .iter()
                            .map(|(p, c)| json!({"element": p.cycle_string(), "coefficient": c}))
                            .collect::<Vec<_>>()
                    }),
                    "is_zero": evaluation.map(|ev| ev.is_zero()),
                })),
            })
        }
        Command::DiagramConvert { file, out } => {
            let d = load_diagram(file)?;
            let witness = recover_blowup(&d.word).map_err(domain)?;
            let converted = convert(&d, &witness).map_err(domain)?;
            let text = print_diagram(&converted.diagram).map_err(domain)?;
            if let Some(path) = out {
                std::fs::write(path, &text).map_err(domain)?;
            }
            Ok(match cli.format {
                Format::Text => {
                    let mut header = format!(
                        "discs={} twolegs={} irreducibility_preserved={}\n",
                        converted.diagram.discs.len(),
                        converted
                            .diagram
                            .discs
                            .iter()
                            .filter(|disc| !disc.kind.is_main())
                            .count(),
                        match converted.irreducibility_preserved {
                            Some(v) => v.to_string(),
                            None => "n/a".into(),
                        }
                    );
                    if out.is_none() {
                        header.push_str(&text);
                    }
                    header
                }
                Format::Json => pretty(&json!({
                    "verb": "diagram-convert",
                    "discs": converted.diagram.discs.len(),
                    "irreducibility_preserved": converted.irreducibility_preserved,
                    "diagram": text,
                })),
            })
        }
        Command::Search {
            group,
            word,
            max_discs,
            boundary,
            boundary_complexity_below,
            jobs,
            out,
        } => {
            let spec = group.resolve()?;
            let w = RelWord::parse(spec.clone(), word)
                .map_err(|e| CliError::Parse(e.to_string()))?;
            let cap = env_disc_cap();
            let max = max_discs.unwrap_or(cap);
            if max > cap {
                return Err(CliError::Domain(format!(
                    "disc bound {max} exceeds the active cap {cap}"
                )));
            }
            let mut search = SearchSpec::new(w, max).map_err(domain)?;
            if *boundary {
                search = search.with_filter(match boundary_complexity_below {
                    Some(c) => BoundaryFilter::ComplexityBelow(*c),
                    None => BoundaryFilter::AnyBoundary,
                });
            }
            let (found, stats) =
                find_irreducible_jobs(&search, (*jobs).max(1)).map_err(domain)?;
            let mut written = None;
            if let (Some(dir), Some(d)) = (out, &found) {
                std::fs::create_dir_all(dir).map_err(domain)?;
                let path = dir.join("irreducible-1.diagram");
                std::fs::write(&path, print_diagram(d).map_err(domain)?).map_err(domain)?;
                written = Some(path);
            }
            Ok(match cli.format {
                Format::Text => {
                    let mut line = format!(
                        "searched={} irreducible={}\n",
                        stats.searched, stats.irreducible
                    );
                    if let Some(d) = &found {
                        let _ = writeln!(
                            line,
                            "found: discs={} arcs={}{}",
                            d.discs.len(),
                            d.arcs.len(),
                            written
                                .as_ref()
                                .map(|p| format!(" file={}", p.display()))
                                .unwrap_or_default()
                        );
                    }
                    line
                }
                Format::Json => pretty(&json!({
                    "verb": "search",
                    "searched": stats.searched,
                    "irreducible": stats.irreducible,
                    "found": found.map(|d| print_diagram(&d).unwrap_or_default()),
                })),
            })
        }
        Command::Psp { n } => {
            if *n == 0 {
                return Err(CliError::Domain("n must be at least 1".into()));
            }
            let rank = psp_rank(*n);
            Ok(match cli.format {
                Format::Text => format!("rank={rank}\n"),
                Format::Json => pretty(&json!({"verb": "psp", "n": n, "rank": rank})),
            })
        }
        Command::Render { file, out } => {
            let d = load_diagram(file)?;
            let report = d.validate();
            if !report.is_valid() {
                return Err(CliError::Domain(format!(
                    "diagram is invalid: {}",
                    report
                        .failures
                        .first()
                        .map(|f| f.to_string())
                        .unwrap_or_default()
                )));
            }
            let svg = render_svg(&d);
            if let Some(path) = out {
                std::fs::write(path, &svg).map_err(domain)?;
                Ok(match cli.format {
                    Format::Text => format!("written {}\n", path.display()),
                    Format::Json => pretty(&json!({
                        "verb": "render",
                        "file": path.display().to_string(),
                        "bytes": svg.len(),
                    })),
                })
            } else {
                Ok(match cli.format {
                    Format::Text => svg,
                    Format::Json => pretty(&json!({"verb": "render", "svg": svg})),
                })
            }
        }
    }
}

/// The disc cap honoring `DIAGRAMMA_MAX_DISCS` (never above the hard cap).
pub fn env_disc_cap() -> usize {
    std::env::var("DIAGRAMMA_MAX_DISCS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .map(|v| v.min(MAX_DISCS_CAP))
        .unwrap_or(MAX_DISCS_CAP)
}

fn load_diagram(path: &PathBuf) -> Result<Diagram, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_diagram(&text).map_err(|e| CliError::Parse(e.to_string()))
}

fn parse_cycles_text(text: &str) -> Result<Vec<Vec<usize>>, CliError> {
    text.split(')')
        .filter_map(|part| {
            let part = part.trim().trim_start_matches('(').trim();
            if part.is_empty() {
                return None;
            }
            Some(
                part.split_whitespace()
                    .map(|s| s.parse::<usize>().map_err(|_| ()))
                    .collect::<Result<Vec<_>, _>>(),
            )
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Parse(format!("bad cycles `{text}`")))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}
