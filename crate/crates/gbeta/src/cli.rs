//! Command-line front end: every experiment as a reproducible, seeded
//! subcommand emitting CSV (tables) or JSON (scalar summaries).
//!
//! Every output file embeds the fully resolved parameter set (including
//! defaults and the seed) plus the library version, so a result file is
//! self-describing. Exit codes: 0 success, 2 usage error, 3 numeric domain
//! error (the offending index or point is named in the message).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::asymptotics::{
    airy_regime_ratio, chebyshev_coeffs, clt_prediction, clt_statistic, hermite_zero_identity,
    plancherel_rotach_log,
};
use crate::error::{Error, Result};
use crate::expansion::{deviation_table, DeviationConfig};
use crate::expansion::{psi_bruteforce, psi_recursive, MatrixFamily};
use crate::field::{
    coupling_ratio, covariance_w, gaf_eval, gaf_required_terms, GafSample, GAF_TAIL_SD_BUDGET,
};
use crate::mat2::Mat2;
use crate::numeric::cheb_t;
use crate::rng::{StreamKind, Substream};
use crate::sampling::{sample_model, sample_model_replica, write_model_csv, EnsembleConfig};
use crate::stats;
use crate::transfer::{
    char_poly, classify_regime_with, hermite_pi, in_domain_p, inverse_joukowsky,
};

/// Resolved defaults mirroring the planar-approximation parameter choices.
pub const DEFAULT_OMEGA: f64 = 1.0;
pub const DEFAULT_ALPHA: f64 = 1.0 / 9.0;
pub const DEFAULT_DELTA: f64 = 1.0 / 45.0;

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    // Accept "a", "a+bi", "a-bi", "bi".
    let t = s.trim().trim_end_matches('i');
    if let Ok(re) = t.parse::<f64>() {
        if s.trim().ends_with('i') {
            return Ok(Complex64::new(0.0, re));
        }
        return Ok(Complex64::new(re, 0.0));
    }
    // Split at the last +/- that is not an exponent sign or leading sign.
    let bytes = t.as_bytes();
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
            let (re_s, im_s) = t.split_at(i);
            let re = re_s.parse::<f64>().map_err(|e| e.to_string())?;
            let im_s = if im_s == "+" || im_s == "-" {
                format!("{im_s}1")
            } else {
                im_s.to_string()
            };
            let im = im_s.parse::<f64>().map_err(|e| e.to_string())?;
            return Ok(Complex64::new(re, im));
        }
    }
    Err(format!("cannot parse `{s}` as a complex number"))
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}{}i", z.re, z.im)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "gbeta",
    version,
    about = "Gaussian beta-ensemble transfer-matrix experiments"
)]
pub struct Cli {
    /// Worker thread cap (0 = library default). Results are identical for
    /// any thread count.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Output directory (default: $GBETA_OUTPUT_DIR, else the working dir).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw one tridiagonal model and write it as CSV.
    Sample(SampleArgs),
    /// Characteristic-polynomial trajectory (CSV) or z-grid values (JSON).
    Charpoly(CharpolyArgs),
    /// Per-replica coupling ratios against the Gaussian-field prediction.
    Coupling(CouplingArgs),
    /// Tail table of the transfer-product distance from the projector.
    Projector(ProjectorArgs),
    /// Brute-force vs recursive expansion cross-check report.
    PsiCheck(PsiCheckArgs),
    /// Field covariances: closed form and truncated-series Monte Carlo.
    FieldCov(FieldCovArgs),
    /// Central-limit-theorem harness for linear eigenvalue statistics.
    Clt(CltArgs),
    /// Deterministic asymptotics report: Plancherel-Rotach, Airy window,
    /// Hermite-zero identity.
    Asymptotics(AsymptoticsArgs),
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long = "N")]
    pub n_dim: usize,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CharpolyArgs {
    #[arg(long = "N")]
    pub n_dim: usize,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, value_parser = parse_complex, default_value = "2")]
    pub z: Complex64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_OMEGA)]
    pub omega: f64,
    /// Evaluate log Phi_N on a semicolon-separated z grid and emit JSON
    /// instead of the trajectory CSV.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CouplingArgs {
    #[arg(long = "N")]
    pub n_dim: usize,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, value_parser = parse_complex, default_value = "2")]
    pub z: Complex64,
    #[arg(long, default_value_t = 1000)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ProjectorArgs {
    /// Matrix sizes; repeat the flag for a size grid.
    #[arg(long = "N", required = true)]
    pub n_dims: Vec<usize>,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, value_parser = parse_complex, default_value = "1.5")]
    pub z: Complex64,
    #[arg(long, default_value_t = DEFAULT_OMEGA)]
    pub omega: f64,
    /// Margin parameter of the hyperbolic-domain membership check.
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    #[arg(long, default_value_t = 1000)]
    pub replicas: usize,
    /// Threshold grid; repeat the flag for several epsilons.
    #[arg(long = "epsilon", default_values_t = vec![0.05, 0.1, 0.2, 0.4])]
    pub epsilons: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PsiCheckArgs {
    #[arg(long, default_value_t = 12)]
    pub max_span: usize,
    #[arg(long, default_value_t = 4)]
    pub max_order: usize,
    #[arg(long, default_value_t = 100)]
    pub families: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FieldCovArgs {
    #[arg(long, value_parser = parse_complex, default_value = "2")]
    pub z: Complex64,
    #[arg(long, value_parser = parse_complex, default_value = "1.5+0.5i")]
    pub w: Complex64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TestFunction {
    T1,
    T2,
    T3,
    T4,
}

impl TestFunction {
    fn degree(self) -> usize {
        match self {
            TestFunction::T1 => 1,
            TestFunction::T2 => 2,
            TestFunction::T3 => 3,
            TestFunction::T4 => 4,
        }
    }

    fn name(self) -> &'static str {
        match self {
            TestFunction::T1 => "T1",
            TestFunction::T2 => "T2",
            TestFunction::T3 => "T3",
            TestFunction::T4 => "T4",
        }
    }
}

#[derive(Args, Debug)]
pub struct CltArgs {
    #[arg(long = "N")]
    pub n_dim: usize,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, value_enum, ignore_case = true, default_value_t = TestFunction::T2)]
    pub f: TestFunction,
    #[arg(long, default_value_t = 1000)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AsymptoticsArgs {
    /// Sizes for the Plancherel-Rotach and Hermite-zero checks.
    #[arg(long = "N", default_values_t = vec![200usize, 400, 800])]
    pub n_dims: Vec<usize>,
    #[arg(long, value_parser = parse_complex, default_value = "2")]
    pub z: Complex64,
    /// Size for the Airy turning-point ratio at z = 1.
    #[arg(long, default_value_t = 400)]
    pub airy_n: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Fully resolved experiment description embedded into every artifact.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ExperimentSpec {
    pub command: String,
    pub params: Vec<(String, String)>,
    pub library_version: String,
}

impl ExperimentSpec {
    fn new(command: &str, params: Vec<(String, String)>) -> Self {
        ExperimentSpec {
            command: command.to_string(),
            params,
            library_version: VERSION.to_string(),
        }
    }

    fn csv_header(&self) -> String {
        let mut line = format!("# gbeta v{} command={}", self.library_version, self.command);
        for (k, v) in &self.params {
            let _ = write!(line, " {k}={v}");
        }
        line
    }

    fn json_value(&self) -> serde_json::Value {
        let params: serde_json::Map<String, serde_json::Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        serde_json::json!({
            "command": self.command,
            "library_version": self.library_version,
            "params": params,
        })
    }
}

fn output_path(dir: &Path, chosen: &Option<PathBuf>, default_name: &str) -> PathBuf {
    match chosen {
        Some(p) if p.is_absolute() => p.clone(),
        Some(p) => dir.join(p),
        None => dir.join(default_name),
    }
}

fn resolve_dir(cli_dir: &Option<PathBuf>) -> PathBuf {
    cli_dir
        .clone()
        .or_else(|| std::env::var_os("GBETA_OUTPUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Run a parsed invocation; returns the path of the artifact written.
pub fn run(cli: Cli) -> Result<PathBuf> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| Error::InvalidParameter {
            name: "threads",
            reason: e.to_string(),
        })?;
    let dir = resolve_dir(&cli.out_dir);
    fs::create_dir_all(&dir)?;
    pool.install(|| dispatch(&cli.command, &dir))
}

fn dispatch(command: &Command, dir: &Path) -> Result<PathBuf> {
    match command {
        Command::Sample(a) => run_sample(a, dir),
        Command::Charpoly(a) => run_charpoly(a, dir),
        Command::Coupling(a) => run_coupling(a, dir),
        Command::Projector(a) => run_projector(a, dir),
        Command::PsiCheck(a) => run_psi_check(a, dir),
        Command::FieldCov(a) => run_field_cov(a, dir),
        Command::Clt(a) => run_clt(a, dir),
        Command::Asymptotics(a) => run_asymptotics(a, dir),
    }
}

fn run_sample(args: &SampleArgs, dir: &Path) -> Result<PathBuf> {
    let config = EnsembleConfig::new(args.n_dim, args.beta, args.seed)?;
    let model = sample_model(&config)?;
    let path = output_path(dir, &args.output, "model.csv");
    let mut buf = Vec::new();
    let spec = ExperimentSpec::new(
        "sample",
        vec![
            ("N".into(), args.n_dim.to_string()),
            ("beta".into(), args.beta.to_string()),
            ("seed".into(), args.seed.to_string()),
        ],
    );
    {
        use std::io::Write;
        writeln!(buf, "{}", spec.csv_header())?;
    }
    write_model_csv(&mut buf, &model, &config)?;
    fs::write(&path, buf)?;
    Ok(path)
}

fn run_charpoly(args: &CharpolyArgs, dir: &Path) -> Result<PathBuf> {
    let config = EnsembleConfig::new(args.n_dim, args.beta, args.seed)?;
    let model = sample_model(&config)?;
    let mut params = vec![
        ("N".into(), args.n_dim.to_string()),
        ("beta".into(), args.beta.to_string()),
        ("z".into(), fmt_complex(args.z)),
        ("Omega".into(), args.omega.to_string()),
        ("seed".into(), args.seed.to_string()),
    ];
    if let Some(grid) = &args.grid {
        params.push(("grid".into(), grid.clone()));
        let spec = ExperimentSpec::new("charpoly", params);
        let points: Vec<Complex64> = grid
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                parse_complex(s).map_err(|reason| Error::InvalidParameter {
                    name: "grid",
                    reason,
                })
            })
            .collect::<Result<_>>()?;
        let rows: Vec<serde_json::Value> = points
            .iter()
            .map(|&z| {
                let log_phi = char_poly(z, &model, args.beta).last().unwrap().log_first();
                serde_json::json!({
                    "z_re": z.re,
                    "z_im": z.im,
                    "log_phi_re": log_phi.re,
                    "log_phi_im": log_phi.im,
                })
            })
            .collect();
        let doc = serde_json::json!({ "spec": spec.json_value(), "grid": rows });
        let path = output_path(dir, &args.output, "charpoly_grid.json");
        fs::write(&path, serde_json::to_string_pretty(&doc).unwrap())?;
        return Ok(path);
    }
    let spec = ExperimentSpec::new("charpoly", params);
    let traj = char_poly(args.z, &model, args.beta);
    let mut out = String::new();
    out.push_str(&spec.csv_header());
    out.push('\n');
    out.push_str("n,re_logphi,im_logphi,regime\n");
    for (i, pair) in traj.iter().enumerate() {
        let lp = pair.log_first();
        let regime = classify_regime_with(args.z, args.n_dim, i + 1, args.omega);
        let _ = writeln!(out, "{},{},{},{}", i + 1, lp.re, lp.im, regime);
    }
    let path = output_path(dir, &args.output, "charpoly_trajectory.csv");
    fs::write(&path, out)?;
    Ok(path)
}

fn run_coupling(args: &CouplingArgs, dir: &Path) -> Result<PathBuf> {
    if !in_domain_p(args.z, args.n_dim, args.alpha) {
        return Err(Error::DomainViolation {
            z: args.z,
            domain: "the planar domain at the configured alpha",
        });
    }
    let config = EnsembleConfig::new(args.n_dim, args.beta, args.seed)?;
    let ratios: Vec<f64> = (0..args.replicas)
        .into_par_iter()
        .map(|r| {
            let model = sample_model_replica(&config, r as u64)?;
            coupling_ratio(args.z, &model, args.beta)
        })
        .collect::<Result<_>>()?;
    let spec = ExperimentSpec::new(
        "coupling",
        vec![
            ("N".into(), args.n_dim.to_string()),
            ("beta".into(), args.beta.to_string()),
            ("z".into(), fmt_complex(args.z)),
            ("alpha".into(), args.alpha.to_string()),
            ("replicas".into(), args.replicas.to_string()),
            ("seed".into(), args.seed.to_string()),
        ],
    );
    let mut out = String::new();
    out.push_str(&spec.csv_header());
    out.push('\n');
    let _ = writeln!(out, "# median={}", stats::median(&ratios));
    out.push_str("replica,ratio\n");
    for (r, v) in ratios.iter().enumerate() {
        let _ = writeln!(out, "{r},{v}");
    }
    let path = output_path(dir, &args.output, "coupling.csv");
    fs::write(&path, out)?;
    Ok(path)
}

fn run_projector(args: &ProjectorArgs, dir: &Path) -> Result<PathBuf> {
    for &n in &args.n_dims {
        if !crate::transfer::in_domain_dh(args.z, n, args.delta) {
            return Err(Error::DomainViolation {
                z: args.z,
                domain: "the hyperbolic domain at the configured delta",
            });
        }
    }
    let config = DeviationConfig {
        n_values: args.n_dims.clone(),
        z: args.z,
        beta: args.beta,
        omega: args.omega,
        replicas: args.replicas,
        epsilons: args.epsilons.clone(),
        seed: args.seed,
    };
    let rows = deviation_table(&config)?;
    let spec = ExperimentSpec::new(
        "projector",
        vec![
            (
                "N".into(),
                args.n_dims
                    .iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join("|"),
            ),
            ("beta".into(), args.beta.to_string()),
            ("z".into(), fmt_complex(args.z)),
            ("Omega".into(), args.omega.to_string()),
            ("delta".into(), args.delta.to_string()),
            ("replicas".into(), args.replicas.to_string()),
            (
                "epsilon".into(),
                args.epsilons
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join("|"),
            ),
            ("seed".into(), args.seed.to_string()),
        ],
    );
    let mut out = String::new();
    out.push_str(&spec.csv_header());
    out.push('\n');
    out.push_str("N,z_re,z_im,beta,omega,epsilon,tail,ci_lo,ci_hi,replicas\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.n_dim,
            r.z_re,
            r.z_im,
            r.beta,
            r.omega,
            r.epsilon,
            r.tail,
            r.ci_lo,
            r.ci_hi,
            r.replicas
        );
    }
    let path = output_path(dir, &args.output, "projector_tails.csv");
    fs::write(&path, out)?;
    Ok(path)
}

fn run_psi_check(args: &PsiCheckArgs, dir: &Path) -> Result<PathBuf> {
    use rand_distr::{Distribution, StandardNormal};
    if args.max_span > crate::expansion::BRUTE_FORCE_MAX_SPAN {
        return Err(Error::OracleGuard {
            span: args.max_span,
            max: crate::expansion::BRUTE_FORCE_MAX_SPAN,
        });
    }
    let mut max_discrepancy = 0.0f64;
    let mut max_parity_leak = 0.0f64;
    let mut checks = 0usize;
    for fam_idx in 0..args.families {
        let mut rng = Substream::new(args.seed, fam_idx as u64, 0, StreamKind::Scalar);
        // Entry scale 1/2 keeps span-long products order one, so the 1e-12
        // absolute tolerance in the report is a meaningful target.
        let mut draw = || -> Complex64 {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            0.5 * Complex64::new(re, im)
        };
        let u_list: Vec<Mat2> = (0..args.max_span)
            .map(|_| Mat2::new(draw(), draw(), draw(), draw()))
            .collect();
        let family = MatrixFamily::from_u(u_list);
        for j in 0..=args.max_order {
            let brute = psi_bruteforce(&family, j, 1, args.max_span)?.matrix;
            let rec = psi_recursive(&family, j, 1, args.max_span)?.matrix;
            max_discrepancy = max_discrepancy.max(brute.sub(&rec).max_abs_entry());
            let leak = if j % 2 == 0 {
                rec.m[0][1].norm().max(rec.m[1][0].norm())
            } else {
                rec.m[0][0].norm().max(rec.m[1][1].norm())
            };
            max_parity_leak = max_parity_leak.max(leak);
            checks += 1;
        }
    }
    let spec = ExperimentSpec::new(
        "psi-check",
        vec![
            ("max_span".into(), args.max_span.to_string()),
            ("max_order".into(), args.max_order.to_string()),
            ("families".into(), args.families.to_string()),
            ("seed".into(), args.seed.to_string()),
        ],
    );
    let doc = serde_json::json!({
        "spec": spec.json_value(),
        "checks": checks,
        "max_discrepancy": max_discrepancy,
        "max_parity_leak": max_parity_leak,
        "tolerance": 1e-12,
        "pass": max_discrepancy <= 1e-12 && max_parity_leak == 0.0,
    });
    let path = output_path(dir, &args.output, "psi_check.json");
    fs::write(&path, serde_json::to_string_pretty(&doc).unwrap())?;
    Ok(path)
}

fn run_field_cov(args: &FieldCovArgs, dir: &Path) -> Result<PathBuf> {
    let closed = covariance_w(args.z, args.w)?;
    let q_max = inverse_joukowsky(args.z)
        .norm()
        .max(inverse_joukowsky(args.w).norm());
    let terms = gaf_required_terms(q_max, GAF_TAIL_SD_BUDGET);
    let prods: Vec<Complex64> = (0..args.samples)
        .into_par_iter()
        .map(|r| {
            let sample = GafSample::sample(terms, args.seed, r as u64);
            let a = gaf_eval(&sample, inverse_joukowsky(args.z))?;
            let b = gaf_eval(&sample, inverse_joukowsky(args.w))?;
            Ok(a * b)
        })
        .collect::<Result<_>>()?;
    let mean = prods.iter().sum::<Complex64>() / args.samples as f64;
    let spec = ExperimentSpec::new(
        "field-cov",
        vec![
            ("z".into(), fmt_complex(args.z)),
            ("w".into(), fmt_complex(args.w)),
            ("samples".into(), args.samples.to_string()),
            ("series_terms".into(), terms.to_string()),
            ("seed".into(), args.seed.to_string()),
        ],
    );
    let mut out = String::new();
    out.push_str(&spec.csv_header());
    out.push('\n');
    out.push_str("z_re,z_im,w_re,w_im,value_re,value_im,kind\n");
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},closed_form",
        args.z.re, args.z.im, args.w.re, args.w.im, closed.re, closed.im
    );
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},gaf_empirical",
        args.z.re, args.z.im, args.w.re, args.w.im, mean.re, mean.im
    );
    let path = output_path(dir, &args.output, "field_cov.csv");
    fs::write(&path, out)?;
    Ok(path)
}

fn run_clt(args: &CltArgs, dir: &Path) -> Result<PathBuf> {
    let degree = args.f.degree();
    let f = move |x: f64| cheb_t(degree, x);
    let config = EnsembleConfig::new(args.n_dim, args.beta, args.seed)?;
    let values: Vec<f64> = (0..args.replicas)
        .into_par_iter()
        .map(|r| {
            let model = sample_model_replica(&config, r as u64)?;
            clt_statistic(f, &model, args.beta)
        })
        .collect::<Result<_>>()?;
    let series = chebyshev_coeffs(f, 16, args.f.name());
    let f_at_pm1 = (f(1.0), f(-1.0));
    let (pred_mean, pred_var) = clt_prediction(&series, args.beta, f_at_pm1);
    let spec = ExperimentSpec::new(
        "clt",
        vec![
            ("N".into(), args.n_dim.to_string()),
            ("beta".into(), args.beta.to_string()),
            ("f".into(), args.f.name().to_string()),
            ("replicas".into(), args.replicas.to_string()),
            ("seed".into(), args.seed.to_string()),
        ],
    );
    let doc = serde_json::json!({
        "spec": spec.json_value(),
        "beta": args.beta,
        "N": args.n_dim,
        "replicas": args.replicas,
        "f_name": args.f.name(),
        "sample_mean": stats::mean(&values),
        "sample_var": stats::variance(&values),
        "predicted_mean_abs": pred_mean.abs(),
        "predicted_var": pred_var,
        "se_mean": stats::standard_error(&values),
    });
    let path = output_path(dir, &args.output, "clt.json");
    fs::write(&path, serde_json::to_string_pretty(&doc).unwrap())?;
    Ok(path)
}

fn run_asymptotics(args: &AsymptoticsArgs, dir: &Path) -> Result<PathBuf> {
    let pr: Vec<serde_json::Value> = args
        .n_dims
        .iter()
        .map(|&n| -> Result<serde_json::Value> {
            let log_pr = plancherel_rotach_log(n, n, args.z)?;
            let log_pi = hermite_pi(args.z, n, n).log_first();
            let rel = ((log_pi - log_pr).exp() - 1.0).norm();
            Ok(serde_json::json!({ "N": n, "rel_error": rel }))
        })
        .collect::<Result<_>>()?;
    let airy = airy_regime_ratio(args.airy_n, args.airy_n, Complex64::new(1.0, 0.0))?;
    let zero_identity: Vec<serde_json::Value> = args
        .n_dims
        .iter()
        .map(|&n| {
            let d = hermite_zero_identity(|x| cheb_t(2, x), n);
            serde_json::json!({ "N": n, "discrepancy": d })
        })
        .collect();
    let spec = ExperimentSpec::new(
        "asymptotics",
        vec![
            (
                "N".into(),
                args.n_dims
                    .iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join("|"),
            ),
            ("z".into(), fmt_complex(args.z)),
            ("airy_n".into(), args.airy_n.to_string()),
        ],
    );
    let doc = serde_json::json!({
        "spec": spec.json_value(),
        "plancherel_rotach": pr,
        "airy_ratio": { "N": args.airy_n, "z": 1.0, "ratio": airy },
        "hermite_zero_identity": zero_identity,
    });
    let path = output_path(dir, &args.output, "asymptotics.json");
    fs::write(&path, serde_json::to_string_pretty(&doc).unwrap())?;
    Ok(path)
}

/// Entry point used by the binary: parse, run, map errors to exit codes.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(path) => {
            println!("wrote {}", path.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
