//! `loopstrata`: stratum atlases, element classification, matrix truncation
//! and verification suites from the command line.

mod config;
mod suites;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use loopstrata::matrix::{
    brute_force_truncation_oracle, parse_matrix, required_precision, truncation_type_matrix, write_matrix,
    OracleMode, MAX_STATES,
};
use loopstrata::parse::parse_element;
use loopstrata::{Error, RootDatum, SemistandardParabolic, SlopeData};

use config::{RawOptions, RunConfig};
use suites::Suite;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Config(String),
    Io(String),
    /// A checked property failed; the report was already written.
    Property(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Property(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                Error::BudgetExceeded { .. } => 3,
                Error::InsufficientPrecision { .. } => 4,
                Error::Parse { .. }
                | Error::UnknownGroup(_)
                | Error::InvalidCartanData(_)
                | Error::UnsupportedSigma(_)
                | Error::WeylTooLarge { .. }
                | Error::InvalidField(_)
                | Error::InvalidSlopes(_)
                | Error::NotMinimalType(_)
                | Error::Precondition(_)
                | Error::Dimension(_) => 2,
                _ => 1,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => format!("{}: {e}", e.kind()),
            CliError::Config(m) => format!("config: {m}"),
            CliError::Io(m) => format!("io: {m}"),
            CliError::Property(m) => format!("property failure: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "loopstrata", version, about = "Truncations of level one and stratum closures for loop groups")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// `GL:n`, `SL:n`, `GSp:2g` or a raw-datum JSON file.
    #[arg(long, global = true)]
    group: Option<String>,
    /// Dominant coweight, comma separated (default: the group's default μ).
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Option<String>,
    /// Residue field characteristic power `q`.
    #[arg(long, global = true, default_value_t = 2)]
    q: u32,
    /// Degree `m` of the residue field over `F_q`.
    #[arg(long, global = true, default_value_t = 1)]
    ext: u32,
    #[arg(long, global = true)]
    precision: Option<i64>,
    /// Enumeration budget (falls back to LOOPSTRATA_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Emit the closure poset as DOT.
    #[arg(long, global = true)]
    dot: bool,
    /// Cross-check matrix truncations against the orbit oracle.
    #[arg(long, global = true)]
    oracle: bool,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closure poset of the strata below μ, as JSON (and DOT with --dot).
    Atlas {
        /// EO strata of GSp with the Siegel coweight, plus the closure check.
        #[arg(long)]
        eo: bool,
    },
    /// κ, ν, truncation type and minimal type of an element of W̃.
    Classify { element: String },
    /// Truncation type of a matrix file.
    Truncate { file: PathBuf },
    /// Run a verification suite; exit 0 iff every property holds.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Matrix of the minimal Dieudonné module, e.g. `--slopes 1/2,0/1`.
    Dieudonne {
        #[arg(long)]
        slopes: String,
    },
}

fn raw_options(o: &Opts) -> RawOptions {
    RawOptions {
        group: o.group.clone(),
        mu: o.mu.clone(),
        q: o.q,
        ext: o.ext,
        precision: o.precision,
        budget: o.budget,
        seed: o.seed,
        jobs: o.jobs,
        dot: o.dot,
        oracle: o.oracle,
        out: o.out.clone(),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_atlas(cfg: &RunConfig, eo: bool) -> Result<(), CliError> {
    let (atlas, failures) = if eo {
        let r = cfg.rd.eo_atlas_jobs(cfg.budget, cfg.jobs)?;
        let checked: usize = r.thm_main.iter().map(|t| t.checked).sum();
        let failed: usize = r.thm_main.iter().map(|t| t.failures.len()).sum();
        eprintln!("closure check: {checked} elements, {failed} failures");
        (r.atlas, failed)
    } else {
        (cfg.rd.closure_poset_jobs(&cfg.mu, cfg.budget, cfg.jobs)?, 0)
    };
    for &(i, j) in &atlas.antisymmetry_violations {
        eprintln!(
            "warning: strata {} and {} lie in each other's closure",
            atlas.strata[i].ty.display(&cfg.rd),
            atlas.strata[j].ty.display(&cfg.rd)
        );
    }
    let json = atlas.to_json(&cfg.rd) + "\n";
    match (&cfg.out, cfg.dot) {
        (Some(p), true) => {
            write_out(Some(p), &json)?;
            write_out(Some(&p.with_extension("dot")), &atlas.to_dot(&cfg.rd))?;
        }
        (None, true) => write_out(None, &atlas.to_dot(&cfg.rd))?,
        (out, false) => write_out(out.as_deref(), &json)?,
    }
    if failures > 0 {
        return Err(CliError::Property(format!("{failures} cone elements outside the stratum closure")));
    }
    Ok(())
}

fn standard_parabolics(rd: &RootDatum) -> Vec<SemistandardParabolic> {
    let ns = rd.semisimple_rank();
    (0u32..1 << ns)
        .map(|mask| {
            let sub: Vec<usize> = (0..ns).filter(|&i| mask & (1 << i) != 0).collect();
            SemistandardParabolic::standard(rd, &sub)
        })
        .collect()
}

fn cmd_classify(cfg: &RunConfig, element: &str) -> Result<(), CliError> {
    let rd = &cfg.rd;
    let x = parse_element(rd, element)?;
    let cls = rd.class_of(&x);
    let t = rd.truncation_type_affine(&x)?;
    let min = rd.minimal_type(&cls)?;
    let mut s = String::new();
    let _ = writeln!(s, "element: {}", rd.format_affine(&x));
    let _ = writeln!(s, "length: {}", rd.alength(&x));
    let _ = writeln!(s, "kappa: {}", cls.kappa);
    let _ = writeln!(s, "newton: {}", cls.newton);
    let _ = writeln!(s, "truncation: {}", t.display(rd));
    let _ = writeln!(s, "minimal type: {}", min.display(rd));
    let _ = writeln!(s, "minimal element: {}", rd.format_affine(&rd.w_tau(min.w, &min.mu)));
    for p in standard_parabolics(rd) {
        let _ = writeln!(s, "fundamental [{}]: {}", p.describe(rd), rd.is_fundamental(&x, &p));
    }
    write_out(cfg.out.as_deref(), &s)
}

fn cmd_truncate(raw: &RawOptions, file: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(file).map_err(|e| CliError::Io(format!("{}: {e}", file.display())))?;
    let mut g = parse_matrix(&text)?;
    let default_group = format!("GL:{}", g.n());
    let cfg = RunConfig::resolve(raw, &default_group)?;
    let n = cfg.require_gl("truncate")?;
    if n != g.n() {
        return Err(Error::Dimension(format!("{}×{} matrix for {}", g.n(), g.n(), cfg.rd.name())).into());
    }
    if let Some(p) = cfg.precision {
        if p < g.precision() {
            g = g.truncate(p);
        }
    }
    let (t, tr) = truncation_type_matrix(&cfg.rd, &g)?;
    let rd = &cfg.rd;
    let mut s = String::new();
    let _ = writeln!(s, "truncation: {}", t.display(rd));
    let _ = writeln!(s, "precision: {}", tr.precision);
    let _ = writeln!(s, "steps: {}", tr.steps.len());
    for (i, st) in tr.steps.iter().enumerate() {
        let _ = writeln!(s, "step {i}: delta={} u={}", rd.word_string(st.delta), rd.word_string(st.u));
    }
    let mut disagreement = None;
    if cfg.oracle {
        let depth = cfg.precision.unwrap_or_else(|| required_precision(&t.mu));
        let states = (g.field().size() as u128).checked_pow((n * n) as u32 * depth as u32);
        let mode = match states {
            Some(k) if k <= MAX_STATES as u128 => OracleMode::Exhaustive,
            _ => OracleMode::Randomized { trials: 4096, seed: cfg.seed },
        };
        match brute_force_truncation_oracle(rd, &g, depth, mode) {
            Ok(o) if o == t => {
                let _ = writeln!(s, "oracle: agrees");
            }
            Ok(o) => {
                let _ = writeln!(s, "oracle: disagrees, orbit of {}", o.display(rd));
                disagreement = Some(o.display(rd).to_string());
            }
            Err(Error::Inconclusive(m)) => {
                let _ = writeln!(s, "oracle: inconclusive ({m})");
            }
            Err(e) => return Err(e.into()),
        }
    }
    write_out(cfg.out.as_deref(), &s)?;
    match disagreement {
        Some(o) => Err(CliError::Property(format!("oracle found {o}, matrix computation {}", t.display(rd)))),
        None => Ok(()),
    }
}

fn parse_slopes(text: &str) -> Result<SlopeData, Error> {
    let mut pairs = vec![];
    let mut pos = 0;
    for part in text.split(',') {
        let bad = || Error::Parse {
            pos,
            expected: "slope n/h".into(),
        };
        let (a, b) = part.trim().split_once('/').ok_or_else(bad)?;
        pairs.push((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?));
        pos += part.len() + 1;
    }
    SlopeData::new(pairs)
}

fn cmd_dieudonne(raw: &RawOptions, slopes: &str) -> Result<(), CliError> {
    let s = parse_slopes(slopes)?;
    let cfg = RunConfig::resolve(raw, &format!("GL:{}", s.height()))?;
    let m = cfg.rd.minimal_dieudonne(&s, cfg.field.clone())?;
    write_out(cfg.out.as_deref(), &write_matrix(&m))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let raw = raw_options(&cli.opts);
    match cli.cmd {
        Cmd::Atlas { eo } => cmd_atlas(&RunConfig::resolve(&raw, "GL:2")?, eo),
        Cmd::Classify { element } => cmd_classify(&RunConfig::resolve(&raw, "GL:2")?, &element),
        Cmd::Truncate { file } => cmd_truncate(&raw, &file),
        Cmd::Verify { suite } => {
            let cfg = RunConfig::resolve(&raw, "GL:2")?;
            let report = suites::run(&cfg, suite)?;
            write_out(cfg.out.as_deref(), &(serde_json::to_string_pretty(&report).expect("report") + "\n"))?;
            if report.passed {
                Ok(())
            } else {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.property.as_str()).collect();
                Err(CliError::Property(failed.join(", ")))
            }
        }
        Cmd::Dieudonne { slopes } => cmd_dieudonne(&raw, &slopes),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
