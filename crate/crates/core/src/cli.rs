//! The `rmt` command-line front end.
//!
//! Every subcommand produces a table, optionally with a summary report, and
//! writes it as CSV (with a `#` metadata header) or as a JSON document. The
//! parsed configuration is echoed into the header so a file can be
//! regenerated from its own contents.

use crate::equilibrium::{quartic_closed_form, EquilibriumMeasure};
use crate::extsource::{self, MhpKernel};
use crate::kernels::{self, fredholm_det, Kernel, KernelEvaluator};
use crate::orthopoly::{self, CdKernel};
use crate::painleve::{self, PainleveSolution};
use crate::partition::{self, FreeEnergyMethod};
use crate::potential::Potential;
use crate::sampler;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::sync::Arc;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser, Serialize)]
#[command(name = "rmt", version, about = "Random matrix numerics: equilibrium measures, kernels, Painlevé II, free energies")]
pub struct RunConfig {
    #[command(flatten)]
    pub output: OutputOptions,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct OutputOptions {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Destination file, `-` for stdout. The words `csv` and `json` select a format and write to stdout.
    #[arg(long, default_value = "-", global = true)]
    pub out: String,
    /// Leave the timestamp out of the metadata so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Worker threads for the parallel parts.
    #[arg(long, env = "RMT_THREADS", global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    Sine,
    Airy,
    Pearcey,
    #[value(name = "finite-n", alias = "finite-N")]
    FiniteN,
    #[value(name = "ext-source")]
    ExtSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Product,
    Integral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Special,
    All,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Equilibrium density and effective potential on a grid.
    Eqdensity {
        /// Coefficients v1,...,vp of V, lowest degree first.
        #[arg(long, allow_hyphen_values = true)]
        potential: String,
        /// Number of support intervals.
        #[arg(long, default_value_t = 1)]
        cuts: usize,
        /// Grid `lo:hi:count`.
        #[arg(long, allow_hyphen_values = true, default_value = "-2:2:401")]
        grid: String,
    },
    /// Recurrence coefficients of e^{-N V} with their string-equation residuals.
    Recurrence {
        /// Coefficients v1,...,vp of V, lowest degree first.
        #[arg(long, allow_hyphen_values = true)]
        potential: String,
        /// The N in e^{-N V}.
        #[arg(long = "N")]
        big_n: f64,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
    },
    /// Minimizes the string Hamiltonian of t x²/2 + g x⁴/4.
    StringMin {
        #[arg(long = "N", default_value_t = 400)]
        big_n: usize,
        #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
        t: f64,
        #[arg(long, default_value_t = 1.0)]
        g: f64,
        /// Truncation index, N by default.
        #[arg(long = "M")]
        m: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        boundary: f64,
    },
    /// Kernel values K(x, y) over a grid of pairs.
    Kernel {
        /// Which kernel.
        #[arg(long, alias = "mode", value_enum)]
        kind: KernelKind,
        /// Pearcey parameter b.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        b: f64,
        /// Grid for x, `lo:hi:count`.
        #[arg(long, allow_hyphen_values = true, default_value = "-2:2:21")]
        grid: String,
        /// Grid for y; the x grid when omitted.
        #[arg(long, allow_hyphen_values = true)]
        ygrid: Option<String>,
        /// Potential for the finite-N kernel.
        #[arg(long, allow_hyphen_values = true, default_value = "0,1")]
        potential: String,
        #[arg(long = "N", default_value_t = 50)]
        big_n: usize,
        /// Size of the external-source model.
        #[arg(long, default_value_t = 16)]
        n: u64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Gap probability det(I − K) on an interval.
    Gap {
        #[arg(long, value_enum)]
        kind: KernelKind,
        /// Pearcey parameter b.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        b: f64,
        /// `c:d`; `d` may be `inf` for the Airy kernel.
        #[arg(long, allow_hyphen_values = true)]
        interval: String,
        #[arg(long, default_value_t = 16)]
        order: usize,
    },
    /// Tracy–Widom distribution function and density.
    TwCdf {
        #[arg(long, allow_hyphen_values = true, default_value = "-6:4:101")]
        x: String,
        /// Also report the Airy-kernel Fredholm determinant.
        #[arg(long)]
        fredholm: bool,
    },
    /// The Hastings–McLeod solution on its grid.
    HmSolution {
        #[arg(long, allow_hyphen_values = true, default_value_t = -12.0)]
        y_min: f64,
        #[arg(long, default_value_t = 8.0)]
        y_max: f64,
        #[arg(long, default_value_t = 220)]
        nodes: usize,
        /// Output points, equally spaced.
        #[arg(long, default_value_t = 401)]
        points: usize,
    },
    /// Free energy F_N of τ_t V by the product or the deformation-integral route.
    FreeEnergy {
        /// Coefficients v1,...,vp of V, lowest degree first.
        #[arg(long, allow_hyphen_values = true)]
        potential: String,
        /// Matrix size.
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long, value_enum, default_value_t = Method::Product)]
        method: Method,
        /// Deformation parameter, t >= 1.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Energy of the even quartic family across the two-cut transition.
    Transition {
        #[arg(long, default_value = "quartic")]
        family: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-2.2:-1.8:81")]
        t: String,
        #[arg(long, default_value_t = 1e-2)]
        h: f64,
    },
    /// Pastur density of the Gaussian model with external source ±a.
    Pastur {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, allow_hyphen_values = true, default_value = "-3:3:301")]
        grid: String,
    },
    /// Finite-n density of the external-source model next to its Pastur limit.
    MhpDensity {
        #[arg(long, default_value_t = 32)]
        n: u64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, allow_hyphen_values = true, default_value = "-3:3:121")]
        grid: String,
    },
    /// Maps a Brownian-bridge time to the external-source parameters.
    Bridge {
        #[arg(long)]
        t: f64,
    },
    /// Metropolis samples of the eigenvalue gas.
    Sample {
        /// Coefficients v1,...,vp of V, lowest degree first.
        #[arg(long, allow_hyphen_values = true)]
        potential: String,
        /// Matrix size.
        #[arg(long = "N")]
        big_n: usize,
        /// Total sweeps, 20 % of them burn-in.
        #[arg(long, default_value_t = 100_000)]
        sweeps: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Keep every `thin`-th sweep after burn-in.
        #[arg(long, default_value_t = 100)]
        thin: usize,
        /// Independent chains, seeded seed, seed + 1, ...
        #[arg(long, default_value_t = 1)]
        chains: usize,
        #[arg(long, default_value_t = 20)]
        bins: usize,
    },
    /// Runs a suite of internal consistency checks.
    Check {
        #[arg(long, value_enum, default_value_t = Suite::Identities)]
        suite: Suite,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(crate::Error),
    Io(std::io::Error),
    /// Checks ran but some failed; the table is still written.
    CheckFailed(usize, Box<Artifact>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numeric(e) if !e.is_numeric() => 1,
            CliError::Numeric(_) | CliError::CheckFailed(..) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numeric(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::CheckFailed(k, _) => write!(f, "{k} check(s) failed"),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Numeric(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(flag: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{flag}: {msg}"))
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(x) => fmt_f64(*x),
            Cell::I(i) => i.to_string(),
            Cell::S(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(x) if x.is_finite() => json!(x),
            Cell::F(_) => Value::Null,
            Cell::I(i) => json!(i),
            Cell::S(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::I(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::S(s.to_string())
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// What a subcommand produces.
#[derive(Debug, Default)]
pub struct Artifact {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub report: Option<Value>,
}

impl Artifact {
    fn table(columns: Vec<&'static str>, rows: Vec<Vec<Cell>>) -> Self {
        Artifact { columns, rows, report: None }
    }

    fn with_report(mut self, r: Value) -> Self {
        self.report = Some(r);
        self
    }
}

/// Parses `a:b:n` into n equally spaced points.
pub fn parse_grid(flag: &str, s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(flag, format!("expected a:b:n, got {s:?}")));
    }
    let a: f64 = parts[0].trim().parse().map_err(|e| usage(flag, format!("{s:?}: {e}")))?;
    let b: f64 = parts[1].trim().parse().map_err(|e| usage(flag, format!("{s:?}: {e}")))?;
    let n: usize = parts[2].trim().parse().map_err(|e| usage(flag, format!("{s:?}: {e}")))?;
    if !a.is_finite() || !b.is_finite() || n == 0 {
        return Err(usage(flag, format!("bad grid {s:?}")));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

fn parse_interval(flag: &str, s: &str) -> CliResult<(f64, f64)> {
    let (c, d) = s.split_once(':').ok_or_else(|| usage(flag, format!("expected c:d, got {s:?}")))?;
    let p = |t: &str| -> CliResult<f64> {
        match t.trim() {
            "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
            v => v.parse().map_err(|e| usage(flag, format!("{s:?}: {e}"))),
        }
    };
    Ok((p(c)?, p(d)?))
}

fn parse_potential(s: &str) -> CliResult<Potential> {
    s.parse::<Potential>().map_err(|e| usage("--potential", e))
}

fn metadata(cfg: &RunConfig) -> Vec<(String, Value)> {
    let mut m = vec![
        ("tool".to_string(), json!("rmt")),
        ("version".to_string(), json!(VERSION)),
    ];
    if !cfg.output.no_timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        m.push(("timestamp_unix".to_string(), json!(secs)));
    }
    m.push(("config".to_string(), serde_json::to_value(cfg).unwrap_or(Value::Null)));
    m
}

/// Renders an artifact in the configured format.
pub fn render(cfg: &RunConfig, art: &Artifact) -> String {
    let meta = metadata(cfg);
    match effective_format(&cfg.output) {
        Format::Csv => {
            let mut s = String::new();
            for (k, v) in &meta {
                let _ = writeln!(s, "# {k}: {v}");
            }
            if let Some(r) = &art.report {
                let _ = writeln!(s, "# report: {r}");
            }
            let _ = writeln!(s, "{}", art.columns.join(","));
            for row in &art.rows {
                let line: Vec<String> = row.iter().map(Cell::csv).collect();
                let _ = writeln!(s, "{}", line.join(","));
            }
            s
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (k, v) in meta {
                obj.insert(k, v);
            }
            obj.insert("columns".into(), json!(art.columns));
            let rows: Vec<Value> = art
                .rows
                .iter()
                .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                .collect();
            obj.insert("rows".into(), Value::Array(rows));
            if let Some(r) = &art.report {
                obj.insert("report".into(), r.clone());
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(obj)).unwrap_or_default();
            s.push('\n');
            s
        }
    }
}

fn effective_format(o: &OutputOptions) -> Format {
    match o.out.as_str() {
        "csv" => Format::Csv,
        "json" => Format::Json,
        _ => o.format,
    }
}

fn write_out(o: &OutputOptions, text: &str) -> CliResult<()> {
    match o.out.as_str() {
        "-" | "csv" | "json" => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
        path => std::fs::write(path, text)?,
    }
    Ok(())
}

/// Runs the configured subcommand and returns its artifact.
pub fn execute(cfg: &RunConfig) -> CliResult<Artifact> {
    match &cfg.command {
        Command::Eqdensity { potential, cuts, grid } => eqdensity(potential, *cuts, grid),
        Command::Recurrence { potential, big_n, nmax } => recurrence(potential, *big_n, *nmax),
        Command::StringMin { big_n, t, g, m, boundary } => {
            string_min(*big_n, *t, *g, m.unwrap_or(*big_n), *boundary)
        }
        Command::Kernel { kind, b, grid, ygrid, potential, big_n, n, a } => {
            let xs = parse_grid("--grid", grid)?;
            let ys = match ygrid {
                Some(g) => parse_grid("--ygrid", g)?,
                None => xs.clone(),
            };
            let k = evaluator(*kind, *b, potential, *big_n, *n, *a)?;
            kernel_table(&k, &xs, &ys)
        }
        Command::Gap { kind, b, interval, order } => {
            let iv = parse_interval("--interval", interval)?;
            if matches!(kind, KernelKind::FiniteN | KernelKind::ExtSource) {
                return Err(usage("--kind", "gap supports sine, airy and pearcey"));
            }
            let k = evaluator(*kind, *b, "0,1", 1, 2, 1.0)?;
            let det = fredholm_det(&k, iv, *order)?;
            Ok(Artifact::table(
                vec!["kind", "b", "c", "d", "det"],
                vec![vec![k.name().into(), (*b).into(), iv.0.into(), iv.1.into(), det.into()]],
            ))
        }
        Command::TwCdf { x, fredholm } => tw_cdf(x, *fredholm),
        Command::HmSolution { y_min, y_max, nodes, points } => hm_solution(*y_min, *y_max, *nodes, *points),
        Command::FreeEnergy { potential, big_n, method, t } => free_energy(potential, *big_n, *method, *t),
        Command::Transition { family, t, h } => transition(family, t, *h),
        Command::Pastur { a, grid } => pastur(*a, grid),
        Command::MhpDensity { n, a, grid } => mhp_density(*n, *a, grid),
        Command::Bridge { t } => {
            let (a, scale) = extsource::bridge_map(*t)?;
            Ok(Artifact::table(vec!["t", "a", "scale"], vec![vec![(*t).into(), a.into(), scale.into()]]))
        }
        Command::Sample { potential, big_n, sweeps, seed, thin, chains, bins } => {
            sample(potential, *big_n, *sweeps, *seed, *thin, *chains, *bins)
        }
        Command::Check { suite } => check(*suite),
    }
}

fn eqdensity(potential: &str, cuts: usize, grid: &str) -> CliResult<Artifact> {
    let v = parse_potential(potential)?;
    if cuts == 0 {
        return Err(usage("--cuts", "need at least one cut"));
    }
    let xs = parse_grid("--grid", grid)?;
    let m = EquilibriumMeasure::solve(&v, cuts)?;
    let rows = xs
        .par_iter()
        .map(|&x| vec![x.into(), m.density(x).into(), (m.effective_potential(x) - m.lagrange_l).into()])
        .collect();
    Ok(Artifact::table(vec!["x", "density", "effective_potential_minus_l"], rows).with_report(json!({
        "endpoints": m.support.endpoints(),
        "l": m.lagrange_l,
        "energy": m.energy(),
    })))
}

fn recurrence(potential: &str, big_n: f64, nmax: usize) -> CliResult<Artifact> {
    let v = parse_potential(potential)?;
    if !(big_n > 0.0) {
        return Err(usage("--N", "must be positive"));
    }
    let table = orthopoly::recurrence_from_weight(&v, big_n, nmax + v.degree() + 1)?;
    let rows = (0..=nmax)
        .map(|n| {
            let (r1, r2) = orthopoly::string_residual(&v, &table, n);
            vec![n.into(), table.gamma[n].into(), table.beta[n].into(), table.ln_h[n].into(), r1.into(), r2.into()]
        })
        .collect();
    Ok(Artifact::table(vec!["n", "gamma", "beta", "ln_h", "string_residual_1", "string_residual_2"], rows))
}

fn string_min(big_n: usize, t: f64, g: f64, m: usize, boundary: f64) -> CliResult<Artifact> {
    let v = Potential::quartic(t, g).map_err(|e| usage("--g", e))?;
    let sol = orthopoly::minimize_hamiltonian(&v, big_n as f64, m, boundary)?;
    let nf = big_n as f64;
    let lambda_c = if t < 0.0 { t * t / (4.0 * g) } else { 0.0 };
    let rows = (1..m)
        .map(|n| {
            let lambda = n as f64 / nf;
            let y = sol.gamma_sq(n);
            let branch = if lambda < lambda_c {
                let d = (t * t - 4.0 * g * lambda).max(0.0).sqrt();
                let (r, l) = ((-t + d) / (2.0 * g), (-t - d) / (2.0 * g));
                if (y - r).abs() <= (y - l).abs() {
                    "R"
                } else {
                    "L"
                }
            } else {
                "bulk"
            };
            vec![n.into(), lambda.into(), y.into(), branch.into()]
        })
        .collect();
    Ok(Artifact::table(vec!["n", "n_over_N", "gamma_sq", "branch"], rows).with_report(json!({
        "max_gradient": sol.max_gradient,
        "cg_iterations": sol.cg_iterations,
        "newton_iterations": sol.newton_iterations,
    })))
}

fn evaluator(kind: KernelKind, b: f64, potential: &str, big_n: usize, n: u64, a: f64) -> CliResult<KernelEvaluator> {
    Ok(match kind {
        KernelKind::Sine => KernelEvaluator::Sine,
        KernelKind::Airy => KernelEvaluator::Airy,
        KernelKind::Pearcey => KernelEvaluator::Pearcey { b },
        KernelKind::FiniteN => {
            let v = parse_potential(potential)?;
            if big_n == 0 {
                return Err(usage("--N", "must be positive"));
            }
            let table = orthopoly::recurrence_from_weight(&v, big_n as f64, big_n + 1)?;
            KernelEvaluator::FiniteN(Arc::new(CdKernel::new(table, v, big_n)))
        }
        KernelKind::ExtSource => KernelEvaluator::ExtSource(Arc::new(MhpKernel::new(n, a)?)),
    })
}

fn kernel_table(k: &KernelEvaluator, xs: &[f64], ys: &[f64]) -> CliResult<Artifact> {
    let pairs: Vec<(f64, f64)> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
    let vals: crate::Result<Vec<f64>> = pairs.par_iter().map(|&(x, y)| k.eval(x, y)).collect();
    let rows = pairs
        .iter()
        .zip(vals?)
        .map(|(&(x, y), v)| vec![x.into(), y.into(), v.into()])
        .collect();
    Ok(Artifact::table(vec!["x", "y", "K"], rows).with_report(json!({ "kernel": k.name() })))
}

fn tw_cdf(x: &str, fredholm: bool) -> CliResult<Artifact> {
    let xs = parse_grid("--x", x)?;
    let sol = PainleveSolution::standard()?;
    let rows: crate::Result<Vec<Vec<Cell>>> = xs
        .par_iter()
        .map(|&x| {
            let mut row = vec![
                x.into(),
                painleve::tracy_widom_cdf(&sol, x)?.into(),
                painleve::tracy_widom_pdf(&sol, x)?.into(),
            ];
            if fredholm {
                row.push(fredholm_det(&KernelEvaluator::Airy, (x, f64::INFINITY), 16)?.into());
            }
            Ok(row)
        })
        .collect();
    let mut cols = vec!["x", "cdf", "pdf"];
    if fredholm {
        cols.push("fredholm_det");
    }
    Ok(Artifact::table(cols, rows?))
}

fn hm_solution(y_min: f64, y_max: f64, nodes: usize, points: usize) -> CliResult<Artifact> {
    if points < 2 {
        return Err(usage("--points", "need at least 2"));
    }
    let sol = painleve::hastings_mcleod(y_min, y_max, nodes)?;
    let rows: crate::Result<Vec<Vec<Cell>>> = (0..points)
        .map(|i| {
            let y = y_min + (y_max - y_min) * i as f64 / (points - 1) as f64;
            Ok(vec![y.into(), sol.u_at(y)?.into(), sol.w_at(y)?.into(), sol.v_at(y)?.into()])
        })
        .collect();
    Ok(Artifact::table(vec!["y", "u", "uprime", "v"], rows?).with_report(json!({
        "max_node_residual": sol.max_node_residual(),
        "newton_iterations": sol.newton_iterations,
    })))
}

fn free_energy(potential: &str, big_n: usize, method: Method, t: f64) -> CliResult<Artifact> {
    let v = parse_potential(potential)?;
    if big_n == 0 {
        return Err(usage("--N", "must be positive"));
    }
    let w = v.deform(t).map_err(|e| usage("--t", e))?;
    let report = match method {
        Method::Product => partition::free_energy_product(&w, big_n)?,
        Method::Integral => partition::free_energy_via_deformation(&v, big_n, t)?,
    };
    // the leading term needs a one-cut path; report null when it has none
    let f = partition::leading_free_energy(&w).ok();
    let d2 = partition::d2_identity_residual(&w, big_n, 1e-4).ok();
    let method_name = match report.method {
        FreeEnergyMethod::Product => "product",
        FreeEnergyMethod::Integral => "integral",
    };
    let row = vec![
        report.n.into(),
        report.ln_z.into(),
        report.f_n.into(),
        report.f_n_minus_gauss.into(),
        f.unwrap_or(f64::NAN).into(),
        method_name.into(),
    ];
    Ok(Artifact::table(vec!["N", "lnZ", "F_N", "F_N_minus_gauss", "F", "method"], vec![row]).with_report(json!({
        "N": report.n,
        "lnZ": report.ln_z,
        "F_N": report.f_n,
        "F_N_minus_gauss": report.f_n_minus_gauss,
        "F": f,
        "method": method_name,
        "residuals": { "d2_identity": d2 },
    })))
}

fn transition(family: &str, t: &str, h: f64) -> CliResult<Artifact> {
    if family != "quartic" {
        return Err(usage("--family", format!("unknown family {family:?}; only `quartic` is available")));
    }
    if !(h > 0.0) {
        return Err(usage("--h", "must be positive"));
    }
    let ts = parse_grid("--t", t)?;
    let rows = partition::energy_table(&ts, h)
        .into_iter()
        .map(|r| r.iter().map(|&x| x.into()).collect())
        .collect();
    let probe = partition::phase_transition_probe(-2.0, h);
    let half = partition::phase_transition_probe(-2.0, h / 2.0);
    Ok(Artifact::table(vec!["t", "F", "dF", "d2F"], rows).with_report(json!({
        "t_c": probe.t_c,
        "h": h,
        "F": probe.value,
        "left": probe.left,
        "right": probe.right,
        "third_derivative_gap": probe.third_derivative_gap(),
        "third_derivative_gap_half_h": half.third_derivative_gap(),
    })))
}

fn pastur(a: f64, grid: &str) -> CliResult<Artifact> {
    let xs = parse_grid("--grid", grid)?;
    if !(a >= 0.0) {
        return Err(usage("--a", "must be non-negative"));
    }
    let rows = xs
        .par_iter()
        .map(|&x| vec![x.into(), extsource::pastur_density(x, a).into()])
        .collect();
    let support: Vec<[f64; 2]> = extsource::pastur_support(a).into_iter().map(|(l, r)| [l, r]).collect();
    Ok(Artifact::table(vec!["x", "density"], rows).with_report(json!({ "support": support })))
}

fn mhp_density(n: u64, a: f64, grid: &str) -> CliResult<Artifact> {
    let xs = parse_grid("--grid", grid)?;
    let k = MhpKernel::new(n, a)?;
    let dens: crate::Result<Vec<f64>> = xs.par_iter().map(|&x| k.density(x)).collect();
    let rows = xs
        .iter()
        .zip(dens?)
        .map(|(&x, d)| vec![x.into(), d.into(), extsource::pastur_density(x, a).into()])
        .collect();
    Ok(Artifact::table(vec!["x", "density", "pastur"], rows))
}

fn sample(
    potential: &str,
    big_n: usize,
    sweeps: usize,
    seed: u64,
    thin: usize,
    chains: usize,
    bins: usize,
) -> CliResult<Artifact> {
    let v = parse_potential(potential)?;
    if chains == 0 {
        return Err(usage("--chains", "need at least one chain"));
    }
    if sweeps < 2 {
        return Err(usage("--sweeps", "need at least 2"));
    }
    let sets = sampler::run_chains(&v, big_n, sweeps, thin, seed, chains)?;
    let mut rows = Vec::new();
    for set in &sets {
        for (sweep, config) in &set.samples {
            for (i, &x) in config.iter().enumerate() {
                let mut r: Vec<Cell> = Vec::with_capacity(4);
                if chains > 1 {
                    r.push(set.chain.into());
                }
                r.extend([(*sweep).into(), i.into(), x.into()]);
                rows.push(r);
            }
        }
    }
    let (lo, hi) = sets
        .iter()
        .flat_map(|s| s.positions())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(x), h.max(x)));
    let hi = hi + 1e-12 * (1.0 + hi.abs());
    let hist = sampler::histogram(sets.iter().flat_map(|s| s.positions()), lo, hi, bins.max(1));
    let cols = if chains > 1 {
        vec!["chain", "sweep", "particle", "position"]
    } else {
        vec!["sweep", "particle", "position"]
    };
    Ok(Artifact::table(cols, rows).with_report(json!({
        "rng": sampler::RNG_ALGORITHM,
        "chains": sets.iter().map(|s| json!({
            "seed": s.seed,
            "burn_in": s.burn_in,
            "thin": s.thin,
            "step": s.step,
            "acceptance_rate": s.acceptance_rate,
        })).collect::<Vec<_>>(),
        "histogram": { "lo": lo, "hi": hi, "density": hist },
    })))
}

struct CheckRow {
    name: &'static str,
    value: f64,
    tolerance: f64,
}

fn identity_checks() -> crate::Result<Vec<CheckRow>> {
    let quartic = Potential::quartic(-1.0, 1.0)?;
    let mut rows = Vec::new();
    for (k, name) in [(2, "deformation_k2"), (4, "deformation_k4")] {
        let res = partition::d1_identity_residuals(&quartic, 8.0, k, 10, 1e-5)?;
        let worst = res.iter().flat_map(|r| r.iter().copied()).fold(0.0, f64::max);
        rows.push(CheckRow { name, value: worst, tolerance: 1e-5 });
    }
    rows.push(CheckRow {
        name: "second_derivative_identity",
        value: partition::d2_identity_residual(&quartic, 8, 1e-4)?,
        tolerance: 1e-4,
    });
    let table = orthopoly::recurrence_from_weight(&quartic, 20.0, 40)?;
    let worst = (1..=30)
        .map(|n| {
            let (a, b) = orthopoly::string_residual(&quartic, &table, n);
            a.abs().max(b.abs())
        })
        .fold(0.0, f64::max);
    rows.push(CheckRow { name: "string_residual", value: worst, tolerance: 1e-7 });
    Ok(rows)
}

fn special_checks() -> crate::Result<Vec<CheckRow>> {
    let sol = PainleveSolution::standard()?;
    let mut rows = vec![CheckRow {
        name: "painleve_residual",
        value: sol.max_node_residual(),
        tolerance: 1e-8,
    }];
    let mut worst: f64 = 0.0;
    for x in [-3.0, -1.0, 1.0] {
        let f = painleve::tracy_widom_cdf(&sol, x)?;
        let d = fredholm_det(&KernelEvaluator::Airy, (x, f64::INFINITY), 16)?;
        worst = worst.max((f - d).abs());
    }
    rows.push(CheckRow { name: "tracy_widom_vs_fredholm", value: worst, tolerance: 1e-4 });
    let p00 = kernels::pearcey_p(0.0, 0.0)?;
    let gamma_quarter = 3.625_609_908_221_908_3;
    let exact = gamma_quarter / (std::f64::consts::PI * 4f64.powf(0.75));
    rows.push(CheckRow { name: "pearcey_p_origin", value: (p00 - exact).abs(), tolerance: 1e-10 });
    rows.push(CheckRow {
        name: "pastur_mass_a1",
        value: (extsource::pastur_mass(1.0)? - 1.0).abs(),
        tolerance: 1e-8,
    });
    let m = quartic_closed_form(-3.0);
    rows.push(CheckRow {
        name: "two_cut_mass",
        value: (crate::equilibrium::total_mass_gl(&m, 64) - 1.0).abs(),
        tolerance: 1e-10,
    });
    Ok(rows)
}

fn check(suite: Suite) -> CliResult<Artifact> {
    let mut rows = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        rows.extend(identity_checks()?);
    }
    if matches!(suite, Suite::Special | Suite::All) {
        rows.extend(special_checks()?);
    }
    let failed = rows.iter().filter(|r| !(r.value < r.tolerance)).count();
    let table = rows
        .iter()
        .map(|r| {
            vec![
                r.name.into(),
                r.value.into(),
                r.tolerance.into(),
                if r.value < r.tolerance { "pass" } else { "fail" }.into(),
            ]
        })
        .collect();
    let mut art = Artifact::table(vec!["check", "value", "tolerance", "status"], table);
    art.report = Some(json!({ "failed": failed }));
    if failed > 0 {
        return Err(CliError::CheckFailed(failed, Box::new(art)));
    }
    Ok(art)
}

fn configure_threads(threads: Option<usize>) -> CliResult<()> {
    if let Some(t) = threads {
        if t == 0 {
            return Err(usage("--threads", "must be at least 1"));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    Ok(())
}

/// Parses arguments, runs, writes output and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cfg) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("rmt: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cfg: &RunConfig) -> CliResult<()> {
    configure_threads(cfg.output.threads)?;
    match execute(cfg) {
        Ok(art) => write_out(&cfg.output, &render(cfg, &art)),
        Err(CliError::CheckFailed(k, art)) => {
            write_out(&cfg.output, &render(cfg, &art))?;
            Err(CliError::CheckFailed(k, art))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(args).unwrap()
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("--grid", "-1:1:3").unwrap(), vec![-1.0, 0.0, 1.0]);
        assert!(parse_grid("--grid", "0:1").is_err());
        let e = parse_grid("--grid", "0:x:3").unwrap_err();
        assert!(e.to_string().contains("--grid"));
        assert_eq!(parse_interval("--interval", "-2:inf").unwrap(), (-2.0, f64::INFINITY));
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e0");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn output_is_reproducible_without_timestamp() {
        let cfg = parse(&["rmt", "--no-timestamp", "pastur", "--a", "1", "--grid", "-2:2:5"]);
        let a = render(&cfg, &execute(&cfg).unwrap());
        let b = render(&cfg, &execute(&cfg).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with("# tool: \"rmt\""));
        assert!(a.contains("\"subcommand\":\"pastur\""));
        assert!(!a.contains("timestamp_unix"));
    }

    #[test]
    fn json_output_has_rows() {
        let cfg = parse(&["rmt", "--no-timestamp", "--format", "json", "bridge", "--t", "0.5"]);
        let text = render(&cfg, &execute(&cfg).unwrap());
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["columns"], json!(["t", "a", "scale"]));
        assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["rmt", "nonsense"]), 1);
        assert_eq!(main_with_args(["rmt", "eqdensity", "--potential", "1,2,3"]), 1);
        assert_eq!(main_with_args(["rmt", "--no-timestamp", "--out", "/dev/null", "bridge", "--t", "0.5"]), 0);
        // t slightly below −2 has no one-cut solution: a numeric failure
        assert_eq!(
            main_with_args(["rmt", "--out", "/dev/null", "eqdensity", "--potential", "0,-1.05,0,0.25", "--cuts", "1"]),
            2
        );
    }
}
