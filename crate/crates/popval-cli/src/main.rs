//! `popval` — frequentist p-values and Bayesian posterior probabilities,
//! side by side.
//!
//! Subcommands: `test` (single-dataset reports), `oc` (exact operating
//! characteristics of two-arm binomial designs), `samplesize`, `simulate`
//! (seeded replication scenarios), and `plot` (deterministic SVG scatters).
//!
//! Exit codes: 0 success, 1 usage error, 2 numeric failure (degenerate data
//! or non-convergence), 3 internal invariant violation.

use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};
use nalgebra::{DMatrix, DVector};

use popval::binary::{
    one_sample_report, two_sample_report, BetaParams, OneArmBinomialData, TwoArmBinomialData,
    TwoSidedBinomial,
};
use popval::harness::{
    parse_scenario_config, render_records_csv, render_summary_csv, run_scenario, summarize,
    ScenarioSpec,
};
use popval::mvn::{iut_decision, mvn_reports, ContrastSet, MvnPrior, MvnSample};
use popval::normal::{known_var_report, t_report, NigParams, PairedNormalData};
use popval::oc::{
    calibrate_eta_with_grid, default_pe_grid, exact_error_rates_with_grid, power_curve_csv,
    power_curve_with_grid, sample_size, DecisionRule, DesignSpec, OutcomeGrid,
};
use popval::plot::{max_vertical_deviation, parse_pairs_csv, scatter_svg};
use popval::quad::{gauss_legendre, DEFAULT_QUAD_ORDER};
use popval::report::TestReport;
use popval::{Error, Result};

#[derive(Parser)]
#[command(
    name = "popval",
    version,
    about = "Frequentist p-values and Bayesian posterior probabilities, side by side",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyse a single dataset: statistic, p-values, posterior probabilities.
    Test {
        #[command(subcommand)]
        kind: TestKind,
    },
    /// Exact operating characteristics of a two-arm binomial design.
    Oc(OcArgs),
    /// Normal-approximation per-arm sample size for a two-arm design.
    Samplesize(SampleSizeArgs),
    /// Run a seeded replication scenario and summarise p/PoP agreement.
    Simulate(SimulateArgs),
    /// Render a CSV of [0,1]x[0,1] pairs as a deterministic SVG scatter.
    Plot(PlotArgs),
}

#[derive(Subcommand)]
enum TestKind {
    /// Two-arm binomial: approximate Z test vs. Beta-posterior PoP.
    Binary2(Binary2Args),
    /// One-arm exact binomial tail test vs. Beta-posterior PoP.
    Binary1(Binary1Args),
    /// Normal mean with known unit variance (flat prior): exact equivalence.
    NormalKnown(NormalKnownArgs),
    /// Paired-normal t test vs. posterior-t PoP (Jeffreys or NIG prior).
    NormalT(NormalTArgs),
    /// Multivariate normal contrasts: Sasabuchi Z tests vs. posterior PoP.
    Mvn(MvnArgs),
}

#[derive(Args)]
struct Binary2Args {
    /// Per-arm sample size.
    #[arg(long)]
    n: u64,
    /// Experimental-arm success count.
    #[arg(long)]
    ye: u64,
    /// Standard-arm success count.
    #[arg(long)]
    ys: u64,
    /// Experimental-arm Beta prior, first shape.
    #[arg(long, default_value_t = 0.2)]
    prior_e_a: f64,
    /// Experimental-arm Beta prior, second shape.
    #[arg(long, default_value_t = 0.8)]
    prior_e_b: f64,
    /// Standard-arm Beta prior, first shape.
    #[arg(long, default_value_t = 0.2)]
    prior_s_a: f64,
    /// Standard-arm Beta prior, second shape.
    #[arg(long, default_value_t = 0.8)]
    prior_s_b: f64,
    /// Gauss-Legendre order for the PoP integral.
    #[arg(long, default_value_t = DEFAULT_QUAD_ORDER)]
    quad_order: usize,
    /// Optional CSV destination for the machine-readable row.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Binary1Args {
    /// Sample size.
    #[arg(long)]
    n: u64,
    /// Success count.
    #[arg(long)]
    ye: u64,
    /// Null response rate.
    #[arg(long, default_value_t = 0.2)]
    p0: f64,
    /// Beta prior, first shape.
    #[arg(long, default_value_t = 1.0)]
    prior_a: f64,
    /// Beta prior, second shape.
    #[arg(long, default_value_t = 1.0)]
    prior_b: f64,
    /// Two-sided exact binomial convention.
    #[arg(long, value_enum, default_value_t = TwoSidedFlag::DoubledTail)]
    two_sided: TwoSidedFlag,
    /// Optional CSV destination for the machine-readable row.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NormalKnownArgs {
    /// Observed mean difference.
    #[arg(long)]
    theta_hat: f64,
    /// Number of paired differences.
    #[arg(long)]
    n: u64,
    /// Optional CSV destination for the machine-readable row.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NormalTArgs {
    /// Comma-separated paired differences (alternative to summary flags).
    #[arg(long)]
    data: Option<String>,
    /// Number of paired differences (summary form).
    #[arg(long)]
    n: Option<u64>,
    /// Mean difference (summary form).
    #[arg(long)]
    theta_hat: Option<f64>,
    /// Sum of squared deviations from the mean (summary form).
    #[arg(long)]
    ssd: Option<f64>,
    /// Prior on (theta, variance).
    #[arg(long, value_enum, default_value_t = PriorFlag::Jeffreys)]
    prior: PriorFlag,
    /// NIG prior location (with --prior nig).
    #[arg(long, default_value_t = 0.0)]
    theta0: f64,
    /// NIG prior precision scale nu0 (with --prior nig).
    #[arg(long, default_value_t = 100.0)]
    nu0: f64,
    /// NIG prior shape (with --prior nig).
    #[arg(long, default_value_t = 0.01)]
    a0: f64,
    /// NIG prior rate (with --prior nig).
    #[arg(long, default_value_t = 0.01)]
    b0: f64,
    /// Optional CSV destination for the machine-readable row.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MvnArgs {
    /// Number of observations behind the sample mean.
    #[arg(long)]
    n: u64,
    /// Sample mean vector, comma-separated (e.g. "0.2,0.1").
    #[arg(long)]
    xbar: String,
    /// Known covariance, rows separated by ';' (e.g. "1,0.3;0.3,1").
    #[arg(long)]
    sigma: String,
    /// Contrast vector, comma-separated; repeatable. Defaults to the unit
    /// contrasts e_1, ..., e_p.
    #[arg(long = "contrast")]
    contrasts: Vec<String>,
    /// Prior mean vector (defaults to the zero vector).
    #[arg(long)]
    mu0: Option<String>,
    /// Prior covariance is sigma0-scale times the identity.
    #[arg(long, default_value_t = 1000.0)]
    sigma0_scale: f64,
    /// Intersection-union test level.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Optional CSV destination for the machine-readable rows.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OcArgs {
    /// One-sided type I error budget.
    #[arg(long)]
    alpha: f64,
    /// Target power at the design alternative.
    #[arg(long)]
    power: f64,
    /// Standard-arm response rate under the null.
    #[arg(long)]
    p_s: f64,
    /// Experimental-arm response rate at the design alternative.
    #[arg(long)]
    p_e: f64,
    /// Per-arm sample size (defaults to the normal-approximation formula).
    #[arg(long)]
    n: Option<u64>,
    /// Bayesian superiority threshold (defaults to 1 - alpha).
    #[arg(long)]
    eta: Option<f64>,
    /// Experimental-arm Beta prior, first shape.
    #[arg(long, default_value_t = 0.2)]
    prior_e_a: f64,
    /// Experimental-arm Beta prior, second shape.
    #[arg(long, default_value_t = 0.8)]
    prior_e_b: f64,
    /// Standard-arm Beta prior, first shape.
    #[arg(long, default_value_t = 0.2)]
    prior_s_a: f64,
    /// Standard-arm Beta prior, second shape.
    #[arg(long, default_value_t = 0.8)]
    prior_s_b: f64,
    /// Gauss-Legendre order for the posterior-probability grid.
    #[arg(long, default_value_t = DEFAULT_QUAD_ORDER)]
    quad_order: usize,
    /// Calibrate eta to this exact Bayesian type I error and report it.
    #[arg(long)]
    calibrate_type1: Option<f64>,
    /// Threshold grid step for --calibrate-type1 (default 1e-4).
    #[arg(long)]
    grid_step: Option<f64>,
    /// Write a power-curve CSV (both rules, shared alternatives) here.
    #[arg(long)]
    curve_out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleSizeArgs {
    /// One-sided type I error budget.
    #[arg(long)]
    alpha: f64,
    /// Target power at the design alternative.
    #[arg(long)]
    power: f64,
    /// Standard-arm response rate under the null.
    #[arg(long)]
    p_s: f64,
    /// Experimental-arm response rate at the design alternative.
    #[arg(long)]
    p_e: f64,
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario config file (key = value lines; see README for the schema).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scenario family name (flag form; see README for the list).
    #[arg(long)]
    family: Option<String>,
    /// Per-replication sample size (flag form).
    #[arg(long)]
    n: Option<u64>,
    /// Number of replications (flag form).
    #[arg(long)]
    reps: Option<u64>,
    /// RNG seed (flag form).
    #[arg(long)]
    seed: Option<u64>,
    /// Extra family-specific config entries, e.g. --set nu0=0.01; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Gauss-Legendre order override.
    #[arg(long)]
    quad_order: Option<usize>,
    /// Worker threads (defaults to one per available core).
    #[arg(long)]
    threads: Option<usize>,
    /// Write the per-replication records CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the summary-statistics CSV here.
    #[arg(long)]
    summary_out: Option<PathBuf>,
    /// Write an SVG scatter of (p_one, pop_one) here.
    #[arg(long)]
    svg_out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Input CSV with a header row naming the columns.
    #[arg(long)]
    input: PathBuf,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
    /// Column for the x axis.
    #[arg(long, default_value = "p_one")]
    x_col: String,
    /// Column for the y axis.
    #[arg(long, default_value = "pop_one")]
    y_col: String,
    /// X-axis label (defaults to the column name).
    #[arg(long)]
    x_label: Option<String>,
    /// Y-axis label (defaults to the column name).
    #[arg(long)]
    y_label: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TwoSidedFlag {
    DoubledTail,
    MinimumLikelihood,
}

impl TwoSidedFlag {
    fn to_lib(self) -> TwoSidedBinomial {
        match self {
            TwoSidedFlag::DoubledTail => TwoSidedBinomial::DoubledTail,
            TwoSidedFlag::MinimumLikelihood => TwoSidedBinomial::MinimumLikelihood,
        }
    }

    fn label(self) -> &'static str {
        match self {
            TwoSidedFlag::DoubledTail => "doubled-tail",
            TwoSidedFlag::MinimumLikelihood => "minimum-likelihood",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PriorFlag {
    Jeffreys,
    NigVague,
    Nig,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        let code = match err {
            Error::Domain(_) | Error::Config(_) | Error::Parse(_) | Error::Io(_) => 1,
            Error::Degenerate(_) | Error::NonConvergence(_) => 2,
            Error::Invariant(_) => 3,
        };
        std::process::exit(code);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Cmd::Test { kind } => match kind {
            TestKind::Binary2(args) => cmd_binary2(args),
            TestKind::Binary1(args) => cmd_binary1(args),
            TestKind::NormalKnown(args) => cmd_normal_known(args),
            TestKind::NormalT(args) => cmd_normal_t(args),
            TestKind::Mvn(args) => cmd_mvn(args),
        },
        Cmd::Oc(args) => cmd_oc(args),
        Cmd::Samplesize(args) => cmd_samplesize(args),
        Cmd::Simulate(args) => cmd_simulate(args),
        Cmd::Plot(args) => cmd_plot(args),
    }
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

/// Six significant digits, plain decimal where reasonable (printf %g style).
fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..=5).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{:.5e}", x)
    }
}

/// The resolved-config metadata block. Every run prints one: version first,
/// then command, seed, quadrature order, and convention switches, then any
/// command-specific entries — enough to reproduce the output exactly.
fn print_meta(command: &str, seed: Option<u64>, quad_order: Option<usize>, extra: &[(String, String)]) {
    println!("# popval {}", env!("CARGO_PKG_VERSION"));
    println!("# command: {command}");
    match seed {
        Some(s) => println!("# seed: {s}"),
        None => println!("# seed: -"),
    }
    match quad_order {
        Some(q) => println!("# quadrature-order: {q}"),
        None => println!("# quadrature-order: - (closed form)"),
    }
    for (k, v) in extra {
        println!("# {k}: {v}");
    }
}

fn report_lines(report: &TestReport, stat_name: &str) {
    if let Some(stat) = report.statistic {
        println!("{stat_name} = {}", sig6(stat));
    }
    println!("p_one   = {}", sig6(report.p_one));
    println!("p_two   = {}", sig6(report.p_two));
    println!("pop_one = {}", sig6(report.pop_one));
    println!("pop_two = {}", sig6(report.pop_two));
    if report.degenerate {
        println!("note: degenerate data (zero-variance statistic); Z fixed at 0 by convention");
    }
}

fn report_csv(report: &TestReport) -> String {
    let stat = report
        .statistic
        .map(|s| format!("{s:.16e}"))
        .unwrap_or_default();
    format!(
        "statistic,p_one,p_two,pop_one,pop_two,degenerate\n{stat},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
        report.p_one, report.p_two, report.pop_one, report.pop_two, report.degenerate as u8
    )
}

fn emit_report(report: &TestReport, stat_name: &str, out: Option<&Path>) -> Result<()> {
    report_lines(report, stat_name);
    let csv = report_csv(report);
    print!("{csv}");
    if let Some(path) = out {
        std::fs::write(path, &csv)?;
        println!("csv written to {}", path.display());
    }
    Ok(())
}

/// Prefix library validation errors with the flag(s) the bad value came from.
fn flagged(flags: &str, err: Error) -> Error {
    match err {
        Error::Domain(m) => Error::Domain(format!("{flags}: {m}")),
        Error::Config(m) => Error::Config(format!("{flags}: {m}")),
        Error::Parse(m) => Error::Parse(format!("{flags}: {m}")),
        other => other,
    }
}

fn parse_f64_list(flag: &str, text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .map_err(|_| Error::Parse(format!("{flag}: cannot parse '{t}' as a number")))
        })
        .collect()
}

fn parse_matrix(flag: &str, text: &str) -> Result<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = text
        .split(';')
        .map(|row| parse_f64_list(flag, row))
        .collect::<Result<_>>()?;
    let nrows = rows.len();
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse(format!(
            "{flag}: rows have unequal lengths (expected {ncols} entries per row)"
        )));
    }
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Ok(DMatrix::from_row_slice(nrows, ncols, &flat))
}

const GAMMA_CONVENTION: (&str, &str) = ("gamma-parameterization", "shape-scale");

fn convention_pairs(two_sided: &str) -> Vec<(String, String)> {
    vec![
        ("two-sided-binomial".to_string(), two_sided.to_string()),
        (GAMMA_CONVENTION.0.to_string(), GAMMA_CONVENTION.1.to_string()),
    ]
}

// ---------------------------------------------------------------------------
// test subcommands
// ---------------------------------------------------------------------------

fn cmd_binary2(args: Binary2Args) -> Result<()> {
    let data = TwoArmBinomialData::new(args.n, args.ye, args.ys)
        .map_err(|e| flagged("--n/--ye/--ys", e))?;
    let prior_e = BetaParams::new(args.prior_e_a, args.prior_e_b)
        .map_err(|e| flagged("--prior-e-a/--prior-e-b", e))?;
    let prior_s = BetaParams::new(args.prior_s_a, args.prior_s_b)
        .map_err(|e| flagged("--prior-s-a/--prior-s-b", e))?;
    let quad = gauss_legendre(args.quad_order).map_err(|e| flagged("--quad-order", e))?;

    let mut extra = convention_pairs("normal z doubling (approximate two-arm test)");
    extra.push(("n".into(), args.n.to_string()));
    extra.push(("y_e".into(), args.ye.to_string()));
    extra.push(("y_s".into(), args.ys.to_string()));
    extra.push((
        "prior-e".into(),
        format!("Beta({}, {})", prior_e.a, prior_e.b),
    ));
    extra.push((
        "prior-s".into(),
        format!("Beta({}, {})", prior_s.a, prior_s.b),
    ));
    print_meta("test binary2", None, Some(args.quad_order), &extra);

    let report = two_sample_report(&data, &prior_e, &prior_s, &quad)?;
    emit_report(&report, "Z", args.out.as_deref())
}

fn cmd_binary1(args: Binary1Args) -> Result<()> {
    let data =
        OneArmBinomialData::new(args.n, args.ye, args.p0).map_err(|e| flagged("--n/--ye/--p0", e))?;
    let prior = BetaParams::new(args.prior_a, args.prior_b)
        .map_err(|e| flagged("--prior-a/--prior-b", e))?;

    let mut extra = convention_pairs(args.two_sided.label());
    extra.push(("n".into(), args.n.to_string()));
    extra.push(("y".into(), args.ye.to_string()));
    extra.push(("p0".into(), args.p0.to_string()));
    extra.push(("prior".into(), format!("Beta({}, {})", prior.a, prior.b)));
    print_meta("test binary1", None, None, &extra);

    let report = one_sample_report(&data, &prior, args.two_sided.to_lib())?;
    emit_report(&report, "statistic", args.out.as_deref())
}

fn cmd_normal_known(args: NormalKnownArgs) -> Result<()> {
    let mut extra = convention_pairs("not applicable (continuous)");
    extra.push(("theta-hat".into(), args.theta_hat.to_string()));
    extra.push(("n".into(), args.n.to_string()));
    extra.push(("prior".into(), "flat on theta, unit variance known".into()));
    print_meta("test normal-known", None, None, &extra);

    let report =
        known_var_report(args.theta_hat, args.n).map_err(|e| flagged("--theta-hat/--n", e))?;
    emit_report(&report, "Z", args.out.as_deref())
}

fn cmd_normal_t(args: NormalTArgs) -> Result<()> {
    let data = match (&args.data, args.n, args.theta_hat, args.ssd) {
        (Some(text), None, None, None) => {
            let values = parse_f64_list("--data", text)?;
            PairedNormalData::from_differences(&values).map_err(|e| flagged("--data", e))?
        }
        (None, Some(n), Some(theta_hat), Some(ssd)) => PairedNormalData::from_summary(
            n, theta_hat, ssd,
        )
        .map_err(|e| flagged("--n/--theta-hat/--ssd", e))?,
        _ => {
            return Err(Error::Config(
                "provide either --data alone, or all of --n, --theta-hat, --ssd".to_string(),
            ))
        }
    };
    let (prior, prior_desc) = match args.prior {
        PriorFlag::Jeffreys => (None, "Jeffreys p(theta, nu) ~ nu^(-3/2)".to_string()),
        PriorFlag::NigVague => {
            let p = NigParams::default_vague();
            (
                Some(p),
                format!("NIG({}, {}, {}, {})", p.theta0, p.nu0, p.alpha, p.beta),
            )
        }
        PriorFlag::Nig => {
            let p = NigParams::new(args.theta0, args.nu0, args.a0, args.b0)
                .map_err(|e| flagged("--theta0/--nu0/--a0/--b0", e))?;
            (
                Some(p),
                format!("NIG({}, {}, {}, {})", p.theta0, p.nu0, p.alpha, p.beta),
            )
        }
    };

    let mut extra = convention_pairs("not applicable (continuous)");
    extra.push(("n".into(), data.n.to_string()));
    extra.push(("theta-hat".into(), sig6(data.theta_hat)));
    extra.push(("ssd".into(), sig6(data.ssd)));
    extra.push(("prior".into(), prior_desc));
    print_meta("test normal-t", None, None, &extra);

    let report = t_report(&data, prior.as_ref())?;
    emit_report(&report, "t", args.out.as_deref())
}

fn cmd_mvn(args: MvnArgs) -> Result<()> {
    let xbar = DVector::from_vec(parse_f64_list("--xbar", &args.xbar)?);
    let dim = xbar.len();
    let sigma = parse_matrix("--sigma", &args.sigma)?;
    let sample =
        MvnSample::new(args.n, xbar, sigma).map_err(|e| flagged("--n/--xbar/--sigma", e))?;

    let contrasts = if args.contrasts.is_empty() {
        let unit = (0..dim)
            .map(|k| DVector::from_fn(dim, |i, _| if i == k { 1.0 } else { 0.0 }))
            .collect();
        ContrastSet::new(unit).map_err(|e| flagged("--contrast", e))?
    } else {
        let parsed = args
            .contrasts
            .iter()
            .map(|c| Ok(DVector::from_vec(parse_f64_list("--contrast", c)?)))
            .collect::<Result<Vec<_>>>()?;
        ContrastSet::new(parsed).map_err(|e| flagged("--contrast", e))?
    };

    let mu0 = match &args.mu0 {
        Some(text) => DVector::from_vec(parse_f64_list("--mu0", text)?),
        None => DVector::zeros(dim),
    };
    if !(args.sigma0_scale > 0.0) {
        return Err(Error::Domain(format!(
            "--sigma0-scale: must be positive, got {}",
            args.sigma0_scale
        )));
    }
    let prior = MvnPrior::new(mu0, DMatrix::identity(dim, dim) * args.sigma0_scale)
        .map_err(|e| flagged("--mu0/--sigma0-scale", e))?;
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(Error::Domain(format!(
            "--alpha: must be in (0, 1), got {}",
            args.alpha
        )));
    }

    let mut extra = convention_pairs("not applicable (continuous)");
    extra.push(("n".into(), args.n.to_string()));
    extra.push(("dim".into(), dim.to_string()));
    extra.push(("contrasts".into(), contrasts.contrasts.len().to_string()));
    extra.push((
        "prior".into(),
        format!("N(mu0, {} * I)", args.sigma0_scale),
    ));
    extra.push(("alpha".into(), args.alpha.to_string()));
    print_meta("test mvn", None, None, &extra);

    let reports = mvn_reports(&sample, &contrasts, &prior)?;
    let mut csv = String::from("contrast,statistic,p_one,p_two,pop_one,pop_two,degenerate\n");
    let mut p_ones = Vec::with_capacity(reports.len());
    for (k, report) in reports.iter().enumerate() {
        let coeffs: Vec<String> = contrasts.contrasts[k].iter().map(|v| sig6(*v)).collect();
        println!("contrast c{} = [{}]", k + 1, coeffs.join(", "));
        report_lines(report, "Z");
        let stat = report
            .statistic
            .map(|s| format!("{s:.16e}"))
            .unwrap_or_default();
        csv.push_str(&format!(
            "c{},{stat},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
            k + 1,
            report.p_one,
            report.p_two,
            report.pop_one,
            report.pop_two,
            report.degenerate as u8
        ));
        p_ones.push(report.p_one);
    }
    let rejects = iut_decision(&p_ones, args.alpha)?;
    println!(
        "intersection-union test rejects at alpha = {}: {rejects}",
        sig6(args.alpha)
    );
    print!("{csv}");
    if let Some(path) = &args.out {
        std::fs::write(path, &csv)?;
        println!("csv written to {}", path.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// oc / samplesize
// ---------------------------------------------------------------------------

fn cmd_oc(args: OcArgs) -> Result<()> {
    let mut design = DesignSpec::new(args.alpha, args.power, args.p_s, args.p_e)
        .map_err(|e| flagged("--alpha/--power/--p-s/--p-e", e))?;
    if let Some(n) = args.n {
        design = design.with_n(n).map_err(|e| flagged("--n", e))?;
    }
    if let Some(eta) = args.eta {
        design = design.with_eta(eta).map_err(|e| flagged("--eta", e))?;
    }
    let prior_e = BetaParams::new(args.prior_e_a, args.prior_e_b)
        .map_err(|e| flagged("--prior-e-a/--prior-e-b", e))?;
    let prior_s = BetaParams::new(args.prior_s_a, args.prior_s_b)
        .map_err(|e| flagged("--prior-s-a/--prior-s-b", e))?;
    design = design.with_priors(prior_e, prior_s);
    let n = design.resolve_n()?;
    let quad = gauss_legendre(args.quad_order).map_err(|e| flagged("--quad-order", e))?;

    let mut extra = convention_pairs("normal z doubling (approximate two-arm test)");
    extra.push(("alpha".into(), args.alpha.to_string()));
    extra.push(("target-power".into(), args.power.to_string()));
    extra.push(("p-s".into(), args.p_s.to_string()));
    extra.push(("p-e".into(), args.p_e.to_string()));
    extra.push(("eta".into(), design.eta.to_string()));
    extra.push((
        "prior-e".into(),
        format!("Beta({}, {})", design.prior_e.a, design.prior_e.b),
    ));
    extra.push((
        "prior-s".into(),
        format!("Beta({}, {})", design.prior_s.a, design.prior_s.b),
    ));
    print_meta("oc", None, Some(args.quad_order), &extra);

    // One grid of cached posterior probabilities serves both decision rules,
    // the error rates, the power curve, and the calibration.
    let grid = OutcomeGrid::build(n, &design.prior_e, &design.prior_s, &quad)?;
    let freq = exact_error_rates_with_grid(&design, DecisionRule::Frequentist, &grid)?;
    let bayes = exact_error_rates_with_grid(&design, DecisionRule::Bayesian, &grid)?;

    println!("n = {n} per arm");
    println!(
        "frequentist (p_one < {}): type1 = {}, type2 = {}, power = {}",
        sig6(design.alpha),
        sig6(freq.type1),
        sig6(freq.type2),
        sig6(freq.power())
    );
    println!(
        "bayesian (PoP > {}): type1 = {}, type2 = {}, power = {}",
        sig6(design.eta),
        sig6(bayes.type1),
        sig6(bayes.type2),
        sig6(bayes.power())
    );
    println!("rule,n,threshold,type1,type2,power");
    println!(
        "frequentist,{n},{:.16e},{:.16e},{:.16e},{:.16e}",
        design.alpha,
        freq.type1,
        freq.type2,
        freq.power()
    );
    println!(
        "bayesian,{n},{:.16e},{:.16e},{:.16e},{:.16e}",
        design.eta,
        bayes.type1,
        bayes.type2,
        bayes.power()
    );

    if let Some(target) = args.calibrate_type1 {
        let cal = calibrate_eta_with_grid(&design, target, args.grid_step, &grid)
            .map_err(|e| flagged("--calibrate-type1/--grid-step", e))?;
        println!(
            "calibrated eta = {} (achieved type1 = {}, grid step = {})",
            sig6(cal.eta),
            sig6(cal.achieved_type1),
            sig6(cal.grid_step)
        );
        println!("eta,achieved_type1,grid_step");
        println!(
            "{:.16e},{:.16e},{:.16e}",
            cal.eta, cal.achieved_type1, cal.grid_step
        );
    }

    if let Some(path) = &args.curve_out {
        let pe_grid = default_pe_grid(&design);
        let freq_curve =
            power_curve_with_grid(&design, DecisionRule::Frequentist, &pe_grid, &grid)?;
        let bayes_curve = power_curve_with_grid(&design, DecisionRule::Bayesian, &pe_grid, &grid)?;
        let csv = power_curve_csv(&[
            (DecisionRule::Frequentist, freq_curve),
            (DecisionRule::Bayesian, bayes_curve),
        ]);
        std::fs::write(path, csv)?;
        println!(
            "power curve ({} alternatives per rule) written to {}",
            pe_grid.len(),
            path.display()
        );
    }
    Ok(())
}

fn cmd_samplesize(args: SampleSizeArgs) -> Result<()> {
    let mut extra = convention_pairs("not applicable");
    extra.push(("alpha".into(), args.alpha.to_string()));
    extra.push(("target-power".into(), args.power.to_string()));
    extra.push(("p-s".into(), args.p_s.to_string()));
    extra.push(("p-e".into(), args.p_e.to_string()));
    print_meta("samplesize", None, None, &extra);

    let n = sample_size(args.alpha, args.power, args.p_s, args.p_e)
        .map_err(|e| flagged("--alpha/--power/--p-s/--p-e", e))?;
    println!("n = {n} per arm");
    println!("n");
    println!("{n}");
    Ok(())
}

// ---------------------------------------------------------------------------
// simulate / plot
// ---------------------------------------------------------------------------

fn scenario_from_args(args: &SimulateArgs) -> Result<ScenarioSpec> {
    let text = match &args.config {
        Some(path) => {
            for (flag, given) in [
                ("--family", args.family.is_some()),
                ("--n", args.n.is_some()),
                ("--reps", args.reps.is_some()),
                ("--seed", args.seed.is_some()),
                ("--set", !args.set.is_empty()),
            ] {
                if given {
                    return Err(Error::Config(format!(
                        "{flag} conflicts with --config; put the value in the config file"
                    )));
                }
            }
            std::fs::read_to_string(path)?
        }
        None => {
            let family = args
                .family
                .as_deref()
                .ok_or_else(|| Error::Config("--family is required without --config".into()))?;
            let n = args
                .n
                .ok_or_else(|| Error::Config("--n is required without --config".into()))?;
            let reps = args
                .reps
                .ok_or_else(|| Error::Config("--reps is required without --config".into()))?;
            let seed = args
                .seed
                .ok_or_else(|| Error::Config("--seed is required without --config".into()))?;
            let mut text = format!("family = {family}\nn = {n}\nreps = {reps}\nseed = {seed}\n");
            for entry in &args.set {
                let (key, value) = entry.split_once('=').ok_or_else(|| {
                    Error::Config(format!("--set: expected KEY=VALUE, got '{entry}'"))
                })?;
                text.push_str(&format!("{} = {}\n", key.trim(), value.trim()));
            }
            text
        }
    };
    let mut spec = parse_scenario_config(&text)?;
    if let Some(order) = args.quad_order {
        spec = spec
            .with_quad_order(order)
            .map_err(|e| flagged("--quad-order", e))?;
    }
    Ok(spec)
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let spec = scenario_from_args(&args)?;

    let two_sided = if spec.family.name() == "binary-one-sample" {
        "doubled-tail (one-arm exact test)"
    } else {
        "normal z doubling where a Z statistic applies"
    };
    let mut extra = convention_pairs(two_sided);
    for (k, v) in spec.metadata() {
        if k != "seed" && k != "quad_order" {
            extra.push((k, v));
        }
    }
    extra.push((
        "threads".into(),
        args.threads
            .map(|t| t.to_string())
            .unwrap_or_else(|| "default".into()),
    ));
    print_meta(
        &format!("simulate {}", spec.family.name()),
        Some(spec.seed.seed),
        Some(spec.quad_order),
        &extra,
    );

    let records = match args.threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Config(format!("--threads: {e}")))?;
            pool.install(|| run_scenario(&spec))?
        }
        None => run_scenario(&spec)?,
    };
    let summary = summarize(&records)?;

    println!(
        "replications = {} ({} records)",
        spec.reps,
        records.len()
    );
    for (side, stats) in [("one-sided", summary.one_sided), ("two-sided", summary.two_sided)] {
        let r = stats
            .pearson_r
            .map(|r| sig6(r))
            .unwrap_or_else(|| "undefined".into());
        println!(
            "{side}: max = {}, mean = {}, median = {}, pearson r = {r}",
            sig6(stats.max_abs_diff),
            sig6(stats.mean_abs_diff),
            sig6(stats.median_abs_diff)
        );
    }

    if let Some(path) = &args.out {
        let csv = render_records_csv(&spec.family, &records);
        std::fs::write(path, &csv)?;
        println!("records csv written to {}", path.display());
    }
    if let Some(path) = &args.summary_out {
        std::fs::write(path, render_summary_csv(&summary))?;
        println!("summary csv written to {}", path.display());
    }
    if let Some(path) = &args.svg_out {
        let points: Vec<(f64, f64)> = records.iter().map(|r| (r.p_one, r.pop_one)).collect();
        let svg = scatter_svg(&points, "frequentist p1", "Bayesian PoP1");
        std::fs::write(path, svg)?;
        println!("svg written to {}", path.display());
    }

    print!("{}", render_summary_csv(&summary));
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> Result<()> {
    let x_label = args.x_label.clone().unwrap_or_else(|| args.x_col.clone());
    let y_label = args.y_label.clone().unwrap_or_else(|| args.y_col.clone());

    let mut extra = convention_pairs("not applicable");
    extra.push(("input".into(), args.input.display().to_string()));
    extra.push(("x-col".into(), args.x_col.clone()));
    extra.push(("y-col".into(), args.y_col.clone()));
    print_meta("plot", None, None, &extra);

    let text = std::fs::read_to_string(&args.input)?;
    let points = parse_pairs_csv(&text, &args.x_col, &args.y_col)
        .map_err(|e| flagged("--input", e))?;
    let svg = scatter_svg(&points, &x_label, &y_label);
    std::fs::write(&args.out, &svg)?;

    println!("points = {}", points.len());
    if !points.is_empty() {
        println!(
            "max vertical deviation from y = x: {}",
            sig6(max_vertical_deviation(&points))
        );
    }
    println!("svg written to {}", args.out.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_formats_six_significant_digits() {
        assert_eq!(sig6(1.690308551362404), "1.69031");
        assert_eq!(sig6(0.5), "0.5");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(0.5885510704046898), "0.588551");
        assert_eq!(sig6(-0.0001234567), "-0.000123457");
        assert_eq!(sig6(123456789.0), "1.23457e8");
        assert_eq!(sig6(123456.0), "123456");
        assert_eq!(sig6(1.5e-9), "1.50000e-9");
    }

    #[test]
    fn float_list_and_matrix_parsing() {
        assert_eq!(parse_f64_list("--x", "0.2, 0.1").unwrap(), vec![0.2, 0.1]);
        assert!(parse_f64_list("--x", "0.2,oops")
            .unwrap_err()
            .to_string()
            .contains("--x"));
        let m = parse_matrix("--sigma", "1,0.3;0.3,1").unwrap();
        assert_eq!(m.nrows(), 2);
        assert_eq!(m[(0, 1)], 0.3);
        assert!(parse_matrix("--sigma", "1,0.3;0.3").is_err());
    }

    #[test]
    fn cli_declares_all_subcommands() {
        use clap::CommandFactory;
        let cmd = Cli::command();
        let names: Vec<_> = cmd.get_subcommands().map(|c| c.get_name()).collect();
        for expected in ["test", "oc", "samplesize", "simulate", "plot"] {
            assert!(names.contains(&expected), "missing subcommand {expected}");
        }
        cmd.debug_assert();
    }
}
