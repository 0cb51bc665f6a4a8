//! The `movcone` command line.

pub mod tables;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::chambers::{build_movable, render_svg, verify_cone_conjecture, ConeReport, ConeStructure, MovableCone};
use crate::chern::odp_count;
use crate::error::{Error, Result};
use crate::fano::{Catalog, SplitPair};
use crate::invariants::{hodge, profile, surface_invariants, Side};
use tables::TableId;

pub const CATALOG_ENV: &str = "MOVCONE_CATALOG";

#[derive(Parser, Debug)]
#[command(name = "movcone", version, about = "Movable cones of determinantal Calabi-Yau threefolds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Md,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Md,
    Json,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// All catalog cases with index, degree, rank, node count and h21.
    List {
        /// Only cases over this base, e.g. Mu3.
        #[arg(long)]
        base: Option<String>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Rebuild one of the intersection or Hodge tables.
    Table {
        #[arg(value_enum, ignore_case = true)]
        which: TableId,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Profiles, Hodge numbers and exceptional surface of one case.
    Show {
        case: String,
        #[arg(long, value_enum, default_value = "md")]
        format: ReportFormat,
    },
    /// Build and verify the movable cone of a case.
    Movable {
        case: String,
        /// Translates checked on each side in the infinite case.
        #[arg(long, default_value_t = 10)]
        depth: u32,
        /// Also write the cone slice as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "md")]
        format: ReportFormat,
    },
    /// Print the loaded catalog as JSON.
    Catalog,
}

/// Runs the CLI, writing normal output to `out` and diagnostics to `err`;
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.cmd) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load_catalog() -> Result<Catalog> {
    match std::env::var_os(CATALOG_ENV) {
        Some(p) => Catalog::load(std::path::Path::new(&p)),
        None => Ok(Catalog::builtin().clone()),
    }
}

fn dispatch(cmd: Cmd) -> Result<String> {
    let cat = load_catalog()?;
    match cmd {
        Cmd::List { base, format } => list(&cat, base.as_deref(), format),
        Cmd::Table { which, format } => {
            let t = tables::build(&cat, which)?;
            Ok(match format {
                Format::Md => t.markdown(),
                Format::Csv => t.csv(),
                Format::Json => pretty(&t.json()),
            })
        }
        Cmd::Show { case, format } => show(&SplitPair::parse(&case, &cat)?, format),
        Cmd::Movable { case, depth, svg, format } => {
            let pair = SplitPair::parse(&case, &cat)?;
            let mc = build_movable(&pair)?;
            let report = verify_cone_conjecture(&mc, depth)?;
            if let Some(path) = svg {
                std::fs::write(&path, render_svg(&mc, &report)).map_err(|e| {
                    Error::Parse(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            Ok(match format {
                ReportFormat::Json => pretty(&movable_json(&mc, &report)),
                ReportFormat::Md => movable_markdown(&mc, &report),
            })
        }
        Cmd::Catalog => Ok(cat.to_json() + "\n"),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

/// One row per case: (id, index, degree, rank, nodes, h21, variants).
pub fn list_rows(cat: &Catalog, base: Option<&str>) -> Result<Vec<Value>> {
    if let Some(b) = base {
        cat.get(b)?;
    }
    cat.cases()
        .into_iter()
        .filter(|c| base.is_none_or(|b| c.base.id == b))
        .map(|c| {
            let h = hodge(&c)?;
            let variants = if c.base.variants.is_empty() {
                vec![c.base.description.clone()]
            } else {
                c.base.variants.clone()
            };
            Ok(json!({
                "case": c.id(),
                "base": c.base.id,
                "index": c.base.index,
                "degree": c.base.degree,
                "rank": c.rank(),
                "odp": odp_count(&c)?,
                "h21": h.h21,
                "euler": h.euler,
                "variants": variants,
            }))
        })
        .collect()
}

fn list(cat: &Catalog, base: Option<&str>, format: Format) -> Result<String> {
    let rows = list_rows(cat, base)?;
    let cols = ["case", "index", "degree", "rank", "odp", "h21", "variants"];
    let cell = |r: &Value, k: &str| match &r[k] {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().filter_map(|v| v.as_str()).collect::<Vec<_>>().join("; "),
        v => v.to_string(),
    };
    Ok(match format {
        Format::Json => pretty(&Value::Array(rows)),
        Format::Csv => {
            let mut s = cols.join(",") + "\n";
            for r in &rows {
                let cells: Vec<String> = cols
                    .iter()
                    .map(|k| {
                        let c = cell(r, k);
                        if c.contains(',') || c.contains(';') {
                            format!("\"{c}\"")
                        } else {
                            c
                        }
                    })
                    .collect();
                s += &(cells.join(",") + "\n");
            }
            s
        }
        Format::Md => {
            let mut s = format!("| {} |\n|{}\n", cols.join(" | "), "---|".repeat(cols.len()));
            for r in &rows {
                let cells: Vec<String> = cols.iter().map(|k| cell(r, k)).collect();
                s += &format!("| {} |\n", cells.join(" | "));
            }
            s
        }
    })
}

fn show(pair: &SplitPair, format: ReportFormat) -> Result<String> {
    let pf = profile(pair, Side::F)?;
    let pe = profile(pair, Side::E)?;
    let h = hodge(pair)?;
    let surface = surface_invariants(pair).ok();
    if let ReportFormat::Json = format {
        return Ok(pretty(&json!({
            "case": pair.id(),
            "profile_F": pf,
            "profile_E": pe,
            "hodge": h,
            "surface": surface,
        })));
    }
    let mut s = String::new();
    let _ = writeln!(s, "# {}\n", pair.id());
    let _ = writeln!(s, "- X_F: {pf}");
    let _ = writeln!(s, "- X_E: {pe}");
    let _ = writeln!(s, "- h11 = {}, h21 = {}, euler = {}", h.h11, h.h21, h.euler);
    match surface {
        Some(sd) => {
            let _ = writeln!(
                s,
                "- exceptional surface {}: K^2 = {}, K.H = {}, {}",
                sd.exc_class, sd.ks_sq, sd.ks_dot_h, sd.surface
            );
        }
        None => {
            let _ = writeln!(s, "- no exceptional surface");
        }
    }
    Ok(s)
}

pub fn movable_json(mc: &MovableCone, report: &ConeReport) -> Value {
    let mut v = serde_json::to_value(mc).expect("cone serializes");
    v["verification"] = serde_json::to_value(report).expect("report serializes");
    v
}

fn movable_markdown(mc: &MovableCone, report: &ConeReport) -> String {
    let mut s = String::new();
    let finiteness = if mc.is_finite() { "finite" } else { "infinite" };
    let _ = writeln!(s, "# Movable cone of {}\n", mc.case);
    let [l, r] = mc.boundary();
    match &mc.structure {
        ConeStructure::Finite { distinct_models } => {
            let _ = writeln!(
                s,
                "{finiteness}: {} chambers, {} distinct models, boundary {} and {}\n",
                mc.chambers.len(),
                distinct_models,
                r.class,
                l.class
            );
        }
        ConeStructure::Infinite { fundamental_domain, generator, rays } => {
            let _ = writeln!(
                s,
                "{finiteness}: fundamental domain <{}, {}>, generator {}",
                fundamental_domain[0], fundamental_domain[1], generator.matrix
            );
            let _ = writeln!(
                s,
                "eigenvalues {} and {}; boundary rays {} and {}\n",
                rays.eigenvalues[0], rays.eigenvalues[1], rays.dominant, rays.recessive
            );
        }
    }
    let _ = writeln!(s, "| chamber | model | nef | marking |\n|---|---|---|---|");
    for (i, m) in mc.chambers.iter().enumerate() {
        let _ = writeln!(s, "| {i} | {} | <{}, {}> | {} |", m.id, m.nef[0], m.nef[1], m.marking);
    }
    let _ = writeln!(s, "\n| wall | kind | certificates |\n|---|---|---|");
    for w in &mc.walls {
        let certs: Vec<String> = w.certificates.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(s, "| {} | {} | {} |", w.class, w.kind.label(), certs.join(", "));
    }
    let _ = writeln!(s, "\n| map | matrix | from | to |\n|---|---|---|---|");
    for (name, m) in &mc.maps {
        let _ = writeln!(s, "| {name} | {} | {} | {} |", m.matrix, m.source, m.target);
    }
    let _ = writeln!(s, "\nverified with {} tiles:", report.tiles.len());
    for c in &report.checks {
        let _ = writeln!(s, "- {c}");
    }
    s
}

/// Entry point for the binary.
pub fn main_with_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
