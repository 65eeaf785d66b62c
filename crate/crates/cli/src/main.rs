//! `eigenrest` — exponent tables and desk-scale verification experiments for
//! restriction estimates of orthonormal systems of sphere eigenfunctions.
//!
//! One experiment per invocation. Every run writes three artifacts into the
//! output directory (flag `--out`, else config `out`, else `$EIGENREST_OUT`,
//! else the working directory): a CSV of measured quantities, a plain-text
//! summary with one line per check, and a TOML echo of the fully resolved
//! configuration (which reparses to an identical config).
//!
//! Exit codes: 0 all checks pass; 1 a check failed; 2 configuration or
//! domain error; 3 numerical failure or i/o error.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use config::{parse_p_grid, LGridSpec, RunConfig};
use eigenrest::experiments::{
    csv_file_name, duality_sampling, kernel_decay_check, ratio_upper_scaling, scaling_file_name,
    sharpness_s2, sharpness_zonal, weyl_check, ExperimentReport, SystemFamily, TProfile, Verdict,
};
use eigenrest::exponents::{
    beta_threshold, bgt_delta, sogge_sigma, theorem_alpha_h, Exponent, ExponentQuery,
};
use eigenrest::{Error, Result};
use num_traits::ToPrimitive;

#[derive(Parser)]
#[command(
    name = "eigenrest",
    version,
    about = "Exponent tables and verification experiments for eigenfunction restriction bounds"
)]
struct Cli {
    /// TOML config file; command-line flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory for artifacts (default: $EIGENREST_OUT, else CWD).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Degree-ladder flags shared by the experiment subcommands. Give `--l-min`
/// and `--l-max` together; without `--l-count` the built-in half-octave
/// ladder is filtered to that range.
#[derive(Args, Debug, Default)]
struct LadderArgs {
    /// Smallest degree in the ladder.
    #[arg(long = "l-min", value_name = "L")]
    l_min: Option<u32>,
    /// Largest degree in the ladder.
    #[arg(long = "l-max", value_name = "L")]
    l_max: Option<u32>,
    /// Number of ladder points between l-min and l-max.
    #[arg(long = "l-count", value_name = "N")]
    l_count: Option<u32>,
    /// Space ladder points linearly instead of geometrically.
    #[arg(long = "l-linear")]
    l_linear: bool,
}

impl LadderArgs {
    fn to_spec(&self) -> Result<Option<LGridSpec>> {
        match (self.l_min, self.l_max) {
            (None, None) if self.l_count.is_none() && !self.l_linear => Ok(None),
            (Some(min), Some(max)) => Ok(Some(LGridSpec {
                min,
                max,
                count: self.l_count,
                geometric: !self.l_linear,
            })),
            _ => Err(Error::config(
                "--l-min and --l-max must be given together (with optional --l-count/--l-linear)",
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the closed-form exponent table (sigma, delta, alpha, h) over a p-grid.
    Exponents {
        /// Sphere dimension (default 2).
        #[arg(long)]
        d: Option<u32>,
        /// Submanifold dimension, 1 <= k <= d-1 (default 1).
        #[arg(long)]
        k: Option<u32>,
        /// "2:16" (integer range) or a comma list like "2,8/3,4,inf".
        #[arg(long = "p-grid", value_name = "GRID")]
        p_grid: Option<String>,
    },
    /// Upper-bound scaling: weighted density L^{p/2} norm against the
    /// closed-form envelope for a system family and coefficient profile.
    Scaling {
        /// Lebesgue exponent: "2", "8/3", "inf" (required).
        #[arg(long)]
        p: Option<String>,
        /// zonal | eigenspace | window-low | window-high | random
        #[arg(long)]
        family: Option<String>,
        /// ones | spike | geom | geom:<ratio>
        #[arg(long)]
        profile: Option<String>,
        /// Window-width exponent for the window families (default 0.5).
        #[arg(long)]
        tau: Option<f64>,
        /// System size for the random family (default 16).
        #[arg(long = "n-functions", value_name = "N")]
        n_functions: Option<u32>,
        /// Number of random draws per degree (default 20).
        #[arg(long)]
        draws: Option<u32>,
        /// Random seed (default 1).
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        ladder: LadderArgs,
    },
    /// Window-system saturation on the 2-sphere: density growth on a meridian
    /// (low window) and on the equator (high window).
    #[command(name = "sharpness-s2")]
    SharpnessS2 {
        /// Lebesgue exponent >= 2 (required).
        #[arg(long)]
        p: Option<String>,
        /// Window-width exponent in (0, 1) (default 0.5).
        #[arg(long)]
        tau: Option<f64>,
        #[command(flatten)]
        ladder: LadderArgs,
    },
    /// Whitened zonal-packet lower bounds on a separated cap packing.
    #[command(name = "sharpness-zonal")]
    SharpnessZonal {
        /// Sphere dimension (default 3).
        #[arg(long)]
        d: Option<u32>,
        /// Submanifold dimension, 1 or 2 (default 1).
        #[arg(long)]
        k: Option<u32>,
        /// Lebesgue exponent >= 2 (required).
        #[arg(long)]
        p: Option<String>,
        /// Separation exponent; must be >= the 2k/(2k+d-1) threshold
        /// (default: threshold + 0.05).
        #[arg(long)]
        beta: Option<f64>,
        /// Separation constant >= 1 (default 8).
        #[arg(long = "big-c", alias = "c")]
        c: Option<f64>,
        #[command(flatten)]
        ladder: LadderArgs,
    },
    /// Sampled trace-duality inequality with a Schatten right-hand side.
    Duality {
        /// Eigenvalue degree (default 32).
        #[arg(long)]
        l: Option<u32>,
        /// Submanifold dimension (only k = 1 is supported).
        #[arg(long)]
        k: Option<u32>,
        /// Lebesgue exponent >= 2 (required).
        #[arg(long)]
        p: Option<String>,
        /// Optional sequence-norm exponent; must match the table value.
        #[arg(long)]
        alpha: Option<String>,
        /// Number of random draws (default 100).
        #[arg(long = "n-draws", value_name = "N")]
        n_draws: Option<u32>,
        /// Random seed (default 1).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Normalized zonal-packet envelope flatness (peak and tail statistics).
    #[command(name = "kernel-decay")]
    KernelDecay {
        /// Sphere dimension, 2..4 (default 2).
        #[arg(long)]
        d: Option<u32>,
        #[command(flatten)]
        ladder: LadderArgs,
    },
    /// Pointwise spectral-sum constancy on S^2 and the density-norm slope.
    Weyl {
        /// Random sample points for the pointwise check (default 100; 0 skips it).
        #[arg(long = "n-samples", value_name = "N")]
        n_samples: Option<u64>,
        /// Random seed (default 1).
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        ladder: LadderArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(Outcome::Table) => ExitCode::SUCCESS,
        Ok(Outcome::Ran(Verdict::Pass)) => ExitCode::SUCCESS,
        Ok(Outcome::Ran(Verdict::Fail)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

enum Outcome {
    Table,
    Ran(Verdict),
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Config(_) => 2,
        Error::GramNotPositiveDefinite { .. } | Error::Numerical(_) | Error::Io(_) => 3,
    }
}

fn execute(cli: Cli) -> Result<Outcome> {
    let file_cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                Error::config(format!("cannot read config file {}: {e}", path.display()))
            })?;
            RunConfig::parse_toml(&text)?
        }
        None => RunConfig::default(),
    };
    let (name, mut overlay) = overlay_for(&cli.command)?;
    if overlay.out.is_none() {
        overlay.out = cli.out.clone();
    }
    if let Some(file_name) = file_cfg.experiment.as_deref() {
        if file_name != name {
            return Err(Error::config(format!(
                "config file names experiment '{file_name}' but the command line asked for '{name}'"
            )));
        }
    }
    let mut cfg = file_cfg.merged_with(&overlay);
    cfg.experiment = Some(name.to_string());
    cfg.validate_resolution()?;

    if name == "exponents" {
        run_exponents(&cfg)?;
        return Ok(Outcome::Table);
    }

    let out_dir = resolve_out_dir(&cfg);
    fs::create_dir_all(&out_dir)?;
    let verdict = run_experiment(name, &cfg, &out_dir)?;
    Ok(Outcome::Ran(verdict))
}

fn overlay_for(cmd: &Command) -> Result<(&'static str, RunConfig)> {
    Ok(match cmd {
        Command::Exponents { d, k, p_grid } => (
            "exponents",
            RunConfig { d: *d, k: *k, p_grid: p_grid.clone(), ..Default::default() },
        ),
        Command::Scaling { p, family, profile, tau, n_functions, draws, seed, ladder } => (
            "scaling",
            RunConfig {
                p: p.clone(),
                family: family.clone(),
                profile: profile.clone(),
                tau: *tau,
                n_functions: *n_functions,
                draws: *draws,
                seed: *seed,
                lgrid: ladder.to_spec()?,
                ..Default::default()
            },
        ),
        Command::SharpnessS2 { p, tau, ladder } => (
            "sharpness-s2",
            RunConfig { p: p.clone(), tau: *tau, lgrid: ladder.to_spec()?, ..Default::default() },
        ),
        Command::SharpnessZonal { d, k, p, beta, c, ladder } => (
            "sharpness-zonal",
            RunConfig {
                d: *d,
                k: *k,
                p: p.clone(),
                beta: *beta,
                c: *c,
                lgrid: ladder.to_spec()?,
                ..Default::default()
            },
        ),
        Command::Duality { l, k, p, alpha, n_draws, seed } => (
            "duality",
            RunConfig {
                l: *l,
                k: *k,
                p: p.clone(),
                alpha: alpha.clone(),
                n_draws: *n_draws,
                seed: *seed,
                ..Default::default()
            },
        ),
        Command::KernelDecay { d, ladder } => (
            "kernel-decay",
            RunConfig { d: *d, lgrid: ladder.to_spec()?, ..Default::default() },
        ),
        Command::Weyl { n_samples, seed, ladder } => (
            "weyl",
            RunConfig {
                n_samples: *n_samples,
                seed: *seed,
                lgrid: ladder.to_spec()?,
                ..Default::default()
            },
        ),
    })
}

fn resolve_out_dir(cfg: &RunConfig) -> PathBuf {
    cfg.out
        .clone()
        .or_else(|| std::env::var_os("EIGENREST_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Print the exponent table: one row per p with the single-function exponent
/// sigma, the restriction exponent delta, and the system pair (alpha, h).
fn run_exponents(cfg: &RunConfig) -> Result<()> {
    let d = cfg.d.unwrap_or(2);
    let k = cfg.k.unwrap_or(1);
    let grid = match (&cfg.p_grid, &cfg.p) {
        (Some(text), _) => parse_p_grid(text)?,
        (None, Some(p)) => vec![Exponent::from_str(p)?],
        (None, None) => parse_p_grid("2:16")?,
    };
    println!("exponent table on S^{d}, submanifold dimension k = {k}");
    println!(
        "{:<8} {:<12} {:<12} {:<12} {:<8} {:<18} {}",
        "p", "sigma", "delta", "alpha", "h", "delta-regime", "alpha-regime"
    );
    for p in &grid {
        let q = ExponentQuery::new(d, k, *p)?;
        let sigma = sogge_sigma(*p, d)?;
        let delta = bgt_delta(&q)?;
        let ah = theorem_alpha_h(&q)?;
        let alpha_text = if ah.alpha_is_range {
            format!("[1, {}]", ah.alpha)
        } else {
            ah.alpha.to_string()
        };
        println!(
            "{:<8} {:<12} {:<12} {:<12} {:<8} {:<18} {}",
            p.to_string(),
            sigma.value.to_string(),
            delta.value.to_string(),
            alpha_text,
            ah.h.to_string(),
            delta.regime.to_string(),
            ah.regime
        );
    }
    Ok(())
}

fn run_experiment(name: &str, cfg: &RunConfig, out_dir: &Path) -> Result<Verdict> {
    let (report, stem, claim, echo) = match name {
        "scaling" => run_scaling(cfg)?,
        "sharpness-s2" => run_sharpness_s2(cfg)?,
        "sharpness-zonal" => run_sharpness_zonal(cfg)?,
        "duality" => run_duality(cfg)?,
        "kernel-decay" => run_kernel(cfg)?,
        "weyl" => run_weyl(cfg)?,
        other => return Err(Error::config(format!("unknown experiment '{other}'"))),
    };
    let mut echo = echo;
    echo.experiment = Some(name.to_string());
    echo.resolution = Some("auto".to_string());
    echo.out = Some(out_dir.to_path_buf());
    write_artifacts(out_dir, &stem, &report, claim, &echo)
}

/// The claim each verdict checks, stated in closed form.
const CLAIM_SCALING: &str = "Claim: for an orthonormal system (f_j) of degree-l eigenfunctions and \
    weights t, || sum_j t_j |f_j|^2 ||_{L^{p/2}(Sigma)} <= const * Lambda(lambda) * ||t||_{alpha(p)} \
    with Lambda = lambda^{2 delta(k,d,p)} (times log lambda only at (p,k) = (2,d-2)). Checked: the \
    log-log slope of the measured ratio is <= 0 within tolerance, so the envelope is not exceeded \
    asymptotically.";
const CLAIM_S2: &str = "Claim: window systems saturate the curve bound on S^2 — for windows of \
    width k^tau, the density L^{p/2} norm grows like k^{(1-2/p)+tau(2/p)} on a meridian through the \
    pole (low window) and like k^{(1+tau)/2} on the equator (high window). Checked: measured \
    log-log slopes reach those rates minus a small tolerance.";
const CLAIM_ZONAL: &str = "Claim: whitened zonal packets centered at C*lambda^{beta-1}-separated \
    points form an orthonormal system whose density satisfies || sum_j |f_j|^2 ||_{L^{p/2}(Sigma)} \
    >= const * lambda^{(d-1) - 2k/p + (2/p) k (1-beta)}, forcing delta(k,d,p) in the upper bound. \
    Checked: whitening residual <= 1e-10, Gram perturbation < 1/2, and measured slopes reach the \
    rate minus tolerance.";
const CLAIM_DUALITY: &str = "Claim (duality): sum_j t_j <P f_j, f_j> <= ||t||_alpha * \
    ||P||_{S^{alpha'}} for the sampled kernel operator P, any orthonormal family (f_j), and the \
    conjugate pair (alpha, alpha'); discretely this holds exactly for every draw. Checked: zero \
    violations beyond 1e-8 relative slack.";
const CLAIM_KERNEL: &str = "Claim: the L^2-normalized zonal packet peaks at height ~ \
    lambda^{(d-1)/2} in a 1/lambda cap and decays like theta^{-(d-1)/2} away from it, with \
    constants independent of the degree. Checked: peak and tail envelope statistics vary by at \
    most a factor 4 across the ladder.";
const CLAIM_WEYL: &str = "Claim (pointwise spectral sum): sum_m |Y_l^m(x)|^2 = (2l+1)/(4*pi) \
    identically on S^2, so the eigenspace density L^{p/2}(Sigma) norm scales exactly like \
    lambda^1. Checked: pointwise relative deviation <= 1e-8 at random points and fitted slope \
    within 1.00 +/- 0.02.";

type RunParts = (ExperimentReport, String, &'static str, RunConfig);

fn echo_ladder(cfg: &RunConfig, used: &[u32]) -> Option<LGridSpec> {
    cfg.lgrid.clone().or_else(|| {
        Some(LGridSpec {
            min: *used.first().unwrap(),
            max: *used.last().unwrap(),
            count: None,
            geometric: true,
        })
    })
}

fn family_token(family: &SystemFamily) -> String {
    match family {
        SystemFamily::SingleZonal => "zonal".to_string(),
        SystemFamily::FullEigenspace => "eigenspace".to_string(),
        SystemFamily::WindowLow { .. } => "window-low".to_string(),
        SystemFamily::WindowHigh { .. } => "window-high".to_string(),
        SystemFamily::Random { .. } => "random".to_string(),
    }
}

fn profile_token(profile: &TProfile) -> String {
    match profile {
        TProfile::Ones => "ones".to_string(),
        TProfile::Spike => "spike".to_string(),
        TProfile::Geometric { ratio } => format!("geom:{ratio}"),
    }
}

fn run_scaling(cfg: &RunConfig) -> Result<RunParts> {
    let p = cfg.require_p()?;
    let d = cfg.d.unwrap_or(2);
    let k = cfg.k.unwrap_or(1);
    let q = ExponentQuery::new(d, k, p)?;
    let family = cfg.resolve_family()?;
    let profile = cfg.resolve_profile()?;
    let lgrid = cfg.lgrid_or_default(d, 16, 256)?;
    let report = ratio_upper_scaling(&q, &family, &profile, &lgrid)?;
    let stem = scaling_file_name(&q, &family, &profile);
    let stem = stem.trim_end_matches(".csv").to_string();

    let mut echo = cfg.clone();
    echo.d = Some(d);
    echo.k = Some(k);
    echo.p = Some(p.to_string());
    echo.family = Some(family_token(&family));
    echo.profile = Some(profile_token(&profile));
    match family {
        SystemFamily::WindowLow { tau } | SystemFamily::WindowHigh { tau } => {
            echo.tau = Some(tau);
        }
        SystemFamily::Random { n_functions, draws, seed } => {
            echo.n_functions = Some(n_functions as u32);
            echo.draws = Some(draws);
            echo.seed = Some(seed);
        }
        _ => {}
    }
    echo.lgrid = echo_ladder(cfg, &lgrid);
    Ok((report, stem, CLAIM_SCALING, echo))
}

fn run_sharpness_s2(cfg: &RunConfig) -> Result<RunParts> {
    let p = cfg.require_p()?;
    let tau = cfg.tau.unwrap_or(0.5);
    let kgrid = cfg.lgrid_or_default(2, 32, 256)?;
    let report = sharpness_s2(&p, tau, &kgrid)?;
    let stem = csv_file_name("sharpness-s2", 2, 1, &p, &format!("tau{tau}"));
    let stem = stem.trim_end_matches(".csv").to_string();

    let mut echo = cfg.clone();
    echo.p = Some(p.to_string());
    echo.tau = Some(tau);
    echo.lgrid = echo_ladder(cfg, &kgrid);
    Ok((report, stem, CLAIM_S2, echo))
}

fn run_sharpness_zonal(cfg: &RunConfig) -> Result<RunParts> {
    let p = cfg.require_p()?;
    let d = cfg.d.unwrap_or(3);
    let k = cfg.k.unwrap_or(1);
    if k == 0 || k > 2 {
        return Err(Error::config(format!(
            "sharpness-zonal supports k in {{1, 2}}, got k = {k}"
        )));
    }
    let beta = match cfg.beta {
        Some(b) => b,
        None => {
            let thr = beta_threshold(k, d)
                .to_f64()
                .ok_or_else(|| Error::numerical("beta threshold not representable"))?;
            thr + 0.05
        }
    };
    let big_c = cfg.c.unwrap_or(8.0);
    let lgrid = cfg.lgrid_or_default(d, 16, 64)?;
    let report = sharpness_zonal(d, k, &p, beta, big_c, &lgrid)?;
    let stem = csv_file_name("sharpness-zonal", d, k, &p, &format!("beta{beta}c{big_c}"));
    let stem = stem.trim_end_matches(".csv").to_string();

    let mut echo = cfg.clone();
    echo.d = Some(d);
    echo.k = Some(k);
    echo.p = Some(p.to_string());
    echo.beta = Some(beta);
    echo.c = Some(big_c);
    echo.lgrid = echo_ladder(cfg, &lgrid);
    Ok((report, stem, CLAIM_ZONAL, echo))
}

fn run_duality(cfg: &RunConfig) -> Result<RunParts> {
    let p = cfg.require_p()?;
    let l = cfg.l.unwrap_or(32);
    let k = cfg.k.unwrap_or(1);
    let n_draws = cfg.n_draws.unwrap_or(100);
    let seed = cfg.seed.unwrap_or(1);
    if let Some(alpha_text) = &cfg.alpha {
        let requested = Exponent::from_str(alpha_text)?;
        let q = ExponentQuery::new(2, k, p)?;
        let table = theorem_alpha_h(&q)?.alpha;
        if requested != table {
            return Err(Error::config(format!(
                "alpha override {requested} is not supported: the duality run uses the table \
                 value alpha = {table} for p = {p}"
            )));
        }
    }
    let report = duality_sampling(l, k, &p, n_draws, seed)?;
    let stem = csv_file_name("duality", 2, k, &p, &format!("l{l}"));
    let stem = stem.trim_end_matches(".csv").to_string();

    let mut echo = cfg.clone();
    echo.l = Some(l);
    echo.k = Some(k);
    echo.p = Some(p.to_string());
    echo.n_draws = Some(n_draws);
    echo.seed = Some(seed);
    Ok((report, stem, CLAIM_DUALITY, echo))
}

fn run_kernel(cfg: &RunConfig) -> Result<RunParts> {
    let d = cfg.d.unwrap_or(2);
    let lgrid = cfg.lgrid_or_default(d, 16, 256)?;
    let report = kernel_decay_check(d, &lgrid)?;
    let stem = format!("kernel-decay_{d}");

    let mut echo = cfg.clone();
    echo.d = Some(d);
    echo.lgrid = echo_ladder(cfg, &lgrid);
    Ok((report, stem, CLAIM_KERNEL, echo))
}

fn run_weyl(cfg: &RunConfig) -> Result<RunParts> {
    let lgrid = cfg.lgrid_or_default(2, 16, 256)?;
    let n_samples = cfg.n_samples.unwrap_or(100);
    let seed = cfg.seed.unwrap_or(1);
    let report = weyl_check(&lgrid, n_samples as usize, seed)?;
    let stem = "weyl".to_string();

    let mut echo = cfg.clone();
    echo.n_samples = Some(n_samples);
    echo.seed = Some(seed);
    echo.lgrid = echo_ladder(cfg, &lgrid);
    Ok((report, stem, CLAIM_WEYL, echo))
}

fn write_artifacts(
    dir: &Path,
    stem: &str,
    report: &ExperimentReport,
    claim: &str,
    echo: &RunConfig,
) -> Result<Verdict> {
    let csv_path = dir.join(format!("{stem}.csv"));
    report.write_csv_file(&csv_path)?;

    let mut summary = String::new();
    writeln!(summary, "{claim}").expect("string write");
    writeln!(summary).expect("string write");
    summary.push_str(&report.summary());
    let summary_path = dir.join(format!("{stem}.summary.txt"));
    fs::write(&summary_path, &summary)?;

    let echo_path = dir.join(format!("{stem}.config.toml"));
    let echo_text = echo.to_toml()?;
    debug_assert_eq!(
        RunConfig::parse_toml(&echo_text).ok().as_ref(),
        Some(echo),
        "config echo must reparse identically"
    );
    fs::write(&echo_path, echo_text)?;

    print!("{summary}");
    println!("csv: {}", csv_path.display());
    println!("summary: {}", summary_path.display());
    println!("config: {}", echo_path.display());
    Ok(report.verdict())
}
