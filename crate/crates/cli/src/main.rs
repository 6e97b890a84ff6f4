use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use foxweave::complex::{export_bicomplex, load_or_build, Bicomplex, Caps, CacheOutcome};
use foxweave::fn_core::{enumerate_trees, tree_count};
use foxweave::geometry::CollapseDirection;
use foxweave::linalg::Ring;
use foxweave::spectral::{Orientation, PageOptions, PageReport, SpectralSequence, Variance};
use foxweave::verify::{run_suite, Suite, SuiteReport, VerifyOptions};
use foxweave::Error;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "foxweave", version, about = "Exact Fox–Neuwirth bicomplexes, spectral pages and verification suites")]
struct Cli {
    #[command(flatten)]
    cfg: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Height of the trees (ambient dimension).
    #[arg(long, global = true, env = "FOXWEAVE_M", default_value_t = 2)]
    m: usize,
    /// Last column of the truncated bicomplex.
    #[arg(long = "n-max", global = true, env = "FOXWEAVE_N_MAX", default_value_t = 3)]
    n_max: usize,
    /// Coefficients: q, z or fp:<prime>.
    #[arg(long, global = true, env = "FOXWEAVE_COEFF", default_value = "q")]
    coeff: Ring,
    #[arg(long = "r-max", global = true, env = "FOXWEAVE_R_MAX", default_value_t = 4)]
    r_max: usize,
    #[arg(long, global = true, env = "FOXWEAVE_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory for cached bicomplex blocks.
    #[arg(long = "cache-dir", global = true, env = "FOXWEAVE_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, env = "FOXWEAVE_SEED", default_value_t = 42)]
    seed: u64,
    /// Maximum number of trees per level.
    #[arg(long, global = true, env = "FOXWEAVE_CAP", default_value_t = 1_000_000)]
    cap: u128,
    /// Maximum number of chains per bidegree.
    #[arg(long = "chain-cap", global = true, env = "FOXWEAVE_CHAIN_CAP", default_value_t = 50_000_000)]
    chain_cap: u128,
    #[arg(long = "collapse-dir", global = true, env = "FOXWEAVE_COLLAPSE_DIR", value_enum, default_value_t = Collapse::Em)]
    collapse_dir: Collapse,
}

impl RunConfig {
    fn caps(&self) -> Caps {
        Caps { trees: self.cap, chains: self.chain_cap }
    }

    fn validate(&self) -> Result<(), Failure> {
        if self.m < 2 {
            return Err(Failure::config(format!("m must be at least 2, got {}", self.m)));
        }
        if self.cap == 0 || self.chain_cap == 0 {
            return Err(Failure::config("caps must be positive"));
        }
        Ok(())
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Mm,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Collapse {
    Em,
    E1,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum OrientationArg {
    Columns,
    Rows,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum VarianceArg {
    Homology,
    Cohomology,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ExportWhat {
    Bicomplex,
    Pages,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count (and optionally list) the trees with n leaves.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        list: bool,
    },
    /// Spectral sequence pages with reliability flags.
    Pages {
        #[arg(long, value_enum, default_value_t = OrientationArg::Columns)]
        orientation: OrientationArg,
        #[arg(long, value_enum, default_value_t = VarianceArg::Homology)]
        variance: VarianceArg,
        /// Include the d_r matrices in JSON output.
        #[arg(long)]
        matrices: bool,
    },
    /// Run a named verification suite, or `all`.
    Verify {
        suite: String,
        /// Random samples per (m, n) for sampled checks.
        #[arg(long, env = "FOXWEAVE_SAMPLES", default_value_t = 1000)]
        samples: usize,
        /// Restrict height-dependent checks to --m.
        #[arg(long = "only-m")]
        only_m: bool,
        /// Restrict size-dependent checks to --n-max.
        #[arg(long = "only-n")]
        only_n: bool,
    },
    /// Write MatrixMarket files and a hashed manifest.
    Export {
        #[arg(value_enum)]
        what: ExportWhat,
        /// Output directory.
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = OrientationArg::Columns)]
        orientation: OrientationArg,
    },
}

/// A failed run: exit code plus machine-readable cause.
#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure { code: 2, kind: "config", message: message.into() }
    }

    fn verification(message: impl Into<String>) -> Self {
        Failure { code: 1, kind: "verification", message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::CapExceeded { .. } => (3, "cap_exceeded"),
            Error::Invariant(_) => (1, "invariant"),
            Error::UnsupportedRing(_) => (2, "unsupported_ring"),
            Error::Io { .. } => (2, "io"),
            Error::Parse(_) => (2, "parse"),
            _ => (2, "config"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 2, kind: "io", message: format!("{}: {e}", path.display()) }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    match run(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let body = json!({ "error": f.kind, "message": f.message, "exit_code": f.code });
            eprintln!("{body}");
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli, out: &mut impl Write) -> Result<(), Failure> {
    let cfg = &cli.cfg;
    cfg.validate()?;
    let mut emit = |text: &str| -> Result<(), Failure> {
        out.write_all(text.as_bytes()).map_err(|e| Failure { code: 2, kind: "io", message: e.to_string() })
    };
    match &cli.command {
        Command::Enumerate { n, list } => emit(&enumerate(cfg, *n, *list)?),
        Command::Pages { orientation, variance, matrices } => {
            let (report, outcome) = pages(cfg, *orientation, *variance, *matrices)?;
            let text = match cfg.format {
                Format::Csv => report.to_csv(),
                Format::Json => {
                    let mut v: serde_json::Value = serde_json::from_str(&report.to_json()).expect("report is JSON");
                    v["m"] = json!(cfg.m);
                    v["n_max"] = json!(cfg.n_max);
                    v["coeff"] = json!(cfg.coeff.to_string());
                    v["cache"] = json!(outcome.map(|o| format!("{o:?}").to_lowercase()));
                    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
                }
                Format::Text => text_table(&report),
                Format::Mm => return Err(Failure::config("pages are reported as json, csv or text; use `export` for MatrixMarket")),
            };
            emit(&text)
        }
        Command::Verify { suite, samples, only_m, only_n } => {
            let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse::<Suite>()?] };
            let opts = VerifyOptions {
                m: only_m.then_some(cfg.m),
                n_max: only_n.then_some(cfg.n_max),
                seed: cfg.seed,
                samples: *samples,
                collapse: collapse(cfg.collapse_dir),
                caps: cfg.caps(),
            };
            let reports: Vec<SuiteReport> = suites.into_iter().map(|s| run_suite(s, &opts)).collect();
            let text = match cfg.format {
                Format::Json => serde_json::to_string_pretty(&reports).expect("serializable") + "\n",
                Format::Csv => {
                    let mut s = String::new();
                    for (i, r) in reports.iter().enumerate() {
                        let csv = r.to_csv();
                        s.push_str(if i == 0 { &csv } else { csv.split_once('\n').map_or("", |x| x.1) });
                    }
                    s
                }
                _ => reports.iter().map(SuiteReport::to_text).collect(),
            };
            emit(&text)?;
            let failed: Vec<String> = reports.iter().flat_map(|r| r.failures().map(move |c| format!("{}/{}", r.suite, c.name))).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::verification(format!("{} check(s) failed: {}", failed.len(), failed.join(", "))))
            }
        }
        Command::Export { what, path, orientation } => {
            let summary = export(cfg, *what, path, *orientation)?;
            emit(&(serde_json::to_string_pretty(&summary).expect("serializable") + "\n"))
        }
    }
}

fn collapse(c: Collapse) -> CollapseDirection {
    match c {
        Collapse::Em => CollapseDirection::Em,
        Collapse::E1 => CollapseDirection::E1,
    }
}

fn enumerate(cfg: &RunConfig, n: usize, list: bool) -> Result<String, Failure> {
    let count = tree_count(cfg.m, n);
    let trees = if list || count > cfg.cap { enumerate_trees(cfg.m, n, cfg.cap)? } else { Vec::new() };
    let noun = if count == 1 { "tree" } else { "trees" };
    Ok(match cfg.format {
        Format::Json => {
            let mut v = json!({ "m": cfg.m, "n": n, "count": count.to_string(), "summary": format!("{count} {noun}") });
            if list {
                v["trees"] = json!(trees.iter().map(|t| t.to_string()).collect::<Vec<_>>());
            }
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        _ => {
            let mut s = format!("{count} {noun}\n");
            for t in &trees {
                s.push_str(&format!("{t}\n"));
            }
            s
        }
    })
}

fn build(cfg: &RunConfig) -> Result<(Bicomplex, Option<CacheOutcome>), Failure> {
    Ok(match &cfg.cache_dir {
        Some(dir) => {
            let (b, outcome) = load_or_build(cfg.m, cfg.n_max, cfg.caps(), dir)?;
            (b, Some(outcome))
        }
        None => (Bicomplex::build(cfg.m, cfg.n_max, cfg.caps())?.0, None),
    })
}

fn page_options(cfg: &RunConfig, orientation: OrientationArg, variance: VarianceArg) -> PageOptions {
    PageOptions {
        ring: cfg.coeff,
        r_max: cfg.r_max,
        variance: match variance {
            VarianceArg::Homology => Variance::Homology,
            VarianceArg::Cohomology => Variance::Cohomology,
        },
        orientation: match orientation {
            OrientationArg::Columns => Orientation::Columns,
            OrientationArg::Rows => Orientation::Rows,
        },
    }
}

fn pages(
    cfg: &RunConfig,
    orientation: OrientationArg,
    variance: VarianceArg,
    matrices: bool,
) -> Result<(PageReport, Option<CacheOutcome>), Failure> {
    let options = page_options(cfg, orientation, variance);
    options.ring.as_field().map_err(|_| {
        Failure::from(Error::UnsupportedRing("pages need field coefficients (q or fp:<prime>); use z only for column homology".into()))
    })?;
    if cfg.r_max == 0 {
        return Err(Failure::config("r-max must be at least 1"));
    }
    let (b, outcome) = build(cfg)?;
    let ss = SpectralSequence::compute(&b, options)?;
    Ok((PageReport::new(&ss.pages, matrices), outcome))
}

fn text_table(report: &PageReport) -> String {
    let mut s = String::from("  r    p    q  dim  reliable\n");
    for row in &report.rows {
        s.push_str(&format!("{:>3} {:>4} {:>4} {:>4}  {}\n", row.r, row.p, row.q, row.dim, row.reliable));
    }
    s
}

fn export(cfg: &RunConfig, what: ExportWhat, path: &Path, orientation: OrientationArg) -> Result<serde_json::Value, Failure> {
    match what {
        ExportWhat::Bicomplex => {
            let (b, _) = build(cfg)?;
            let manifest = export_bicomplex(&b, path)?;
            Ok(json!({ "path": path.display().to_string(), "files": manifest.bidegrees.len(), "manifest": "manifest.json" }))
        }
        ExportWhat::Pages => {
            let (report, _) = pages(cfg, orientation, VarianceArg::Homology, true)?;
            fs::create_dir_all(path).map_err(|e| io_failure(path, e))?;
            let mut files = Vec::new();
            for (name, body) in [("pages.csv", report.to_csv()), ("pages.json", report.to_json())] {
                let file = path.join(name);
                fs::write(&file, body.as_bytes()).map_err(|e| io_failure(&file, e))?;
                files.push(json!({ "file": name, "sha256": foxweave::complex::export::sha256_hex(body.as_bytes()) }));
            }
            let manifest = json!({
                "m": cfg.m,
                "n_max": cfg.n_max,
                "coeff": cfg.coeff.to_string(),
                "r_max": cfg.r_max,
                "files": files,
            });
            let file = path.join("manifest.json");
            fs::write(&file, serde_json::to_string_pretty(&manifest).expect("serializable") + "\n").map_err(|e| io_failure(&file, e))?;
            Ok(json!({ "path": path.display().to_string(), "files": 2, "manifest": "manifest.json" }))
        }
    }
}
