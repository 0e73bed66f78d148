//! Batch front end: compute moment-map values, transitions, and actions,
//! run the verification suites, and emit the worked-example fixtures.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use orbitkit::chart::{ChartPoint, ChartPointJson};
use orbitkit::matrix::Matrix;
use orbitkit::parabolic::{build_parabolic, ParabolicData, WeightLambda};
use orbitkit::sample::{rng_for, sample_chart_point, SampleBounds};
use orbitkit::scalar::GaussianRational;
use orbitkit::twisted::{mu_global, psi_affine, psi_global, transition};
use orbitkit::verify::{
    check_sample, scaling_law_holds, standard_configs, CheckKind, CheckResult,
};
use orbitkit::weyl::{atlas_json, weyl_cosets, WeylCoset};

#[derive(Parser)]
#[command(name = "orbitkit", about = "Exact twisted moment maps on flag varieties")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the moment map at a chart point
    Mu(PointArgs),
    /// Re-express a chart point in another chart
    Transition(TransitionArgs),
    /// Apply a group element to a chart point
    Action(ActionArgs),
    /// Run every verification suite and emit a JSON report
    VerifyAll(VerifyArgs),
    /// Emit the worked-example fixtures
    Examples(ExamplesArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Matrix size; checked against --lambda when both are given
    #[arg(long)]
    n: Option<usize>,
    /// Weight as a comma list of rationals, e.g. "3,1,0" or "1/2,-1/2"
    #[arg(long)]
    lambda: Option<String>,
    /// Write the output here instead of stdout
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Chart point as JSON: {"sigma":[...],"z":{"i,j":...},"xi":{...}}
    #[arg(long)]
    point: String,
    /// Rescale lambda (and xi with it) by this rational before evaluating
    #[arg(long)]
    scale: Option<String>,
}

#[derive(Args)]
struct TransitionArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    point: String,
    /// Target coset as a comma list permutation, e.g. "1,0,2"
    #[arg(long)]
    tau: String,
}

#[derive(Args)]
struct ActionArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    point: String,
    /// Group element as JSON: {"n":...,"entries":[[...]]}
    #[arg(long)]
    g: String,
    /// Target coset; when omitted the first chart containing the image is used
    #[arg(long)]
    tau: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 50)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 means one per core. Defaults to ORBITKIT_JOBS.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = 20)]
    num_bound: i64,
    #[arg(long, default_value_t = 10)]
    den_bound: i64,
    /// Also check the lambda-rescaling law with this factor
    #[arg(long)]
    scale: Option<String>,
    /// JSON file mirroring the flags; explicit flags win
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args)]
struct ExamplesArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// One of: sl2, gl3, supq
    #[arg(long)]
    case: String,
}

#[derive(Deserialize, Default)]
struct FileConfig {
    n: Option<usize>,
    lambda: Option<String>,
    samples: Option<u64>,
    seed: Option<u64>,
    jobs: Option<usize>,
    num_bound: Option<i64>,
    den_bound: Option<i64>,
    scale: Option<String>,
    output: Option<String>,
}

fn parse_rational(text: &str) -> Result<GaussianRational> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: i64 = num.parse().with_context(|| format!("bad rational {t:?}"))?;
    let d: i64 = den.parse().with_context(|| format!("bad rational {t:?}"))?;
    if d == 0 {
        bail!("zero denominator in {t:?}");
    }
    Ok(GaussianRational::from_frac(n, d))
}

fn parse_lambda(text: &str, n: Option<usize>) -> Result<ParabolicData> {
    let values: Vec<GaussianRational> = text
        .split(',')
        .map(parse_rational)
        .collect::<Result<_>>()?;
    if let Some(n) = n {
        if n != values.len() {
            bail!("--n {} does not match lambda of length {}", n, values.len());
        }
    }
    build_parabolic(&WeightLambda::new(values)).map_err(|e| anyhow::anyhow!("bad lambda: {e}"))
}

fn parse_point(p: &ParabolicData, text: &str) -> Result<ChartPoint> {
    let json: ChartPointJson = serde_json::from_str(text).context("bad --point JSON")?;
    ChartPoint::from_json(p, &json).map_err(|e| anyhow::anyhow!("bad point: {e}"))
}

fn parse_perm(text: &str) -> Result<WeylCoset> {
    let perm: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>().context("bad --tau permutation"))
        .collect::<Result<_>>()?;
    let mut seen = vec![false; perm.len()];
    for &k in &perm {
        if k >= perm.len() || seen[k] {
            bail!("--tau is not a permutation of 0..{}", perm.len());
        }
        seen[k] = true;
    }
    Ok(WeylCoset::from_permutation(perm))
}

fn read_arg(text: &str) -> Result<String> {
    // "-" reads stdin, "@path" reads a file, anything else is literal
    if text == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else if let Some(path) = text.strip_prefix('@') {
        Ok(fs::read_to_string(path)?)
    } else {
        Ok(text.to_string())
    }
}

fn emit(output: &Option<String>, value: &serde_json::Value) -> Result<()> {
    let text = format!("{}\n", serde_json::to_string_pretty(value)?);
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {path}"))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn require_lambda(common: &CommonArgs) -> Result<ParabolicData> {
    let lambda = common
        .lambda
        .as_deref()
        .context("--lambda is required for this command")?;
    parse_lambda(lambda, common.n)
}

fn run_mu(args: &PointArgs) -> Result<()> {
    let mut p = require_lambda(&args.common)?;
    let mut cp = parse_point(&p, &read_arg(&args.point)?)?;
    if let Some(scale) = &args.scale {
        let c = parse_rational(scale)?;
        p = p.scaled(&c).map_err(|e| anyhow::anyhow!("bad scale: {e}"))?;
        cp.xi = cp.xi.iter().map(|x| x.clone() * c.clone()).collect();
    }
    let orbit = mu_global(&p, &cp);
    emit(&args.common.output, &serde_json::to_value(&orbit)?)
}

fn run_transition(args: &TransitionArgs) -> Result<()> {
    let p = require_lambda(&args.common)?;
    let cp = parse_point(&p, &read_arg(&args.point)?)?;
    let tau = parse_perm(&args.tau)?;
    let moved =
        transition(&p, &cp, &tau).map_err(|e| anyhow::anyhow!("transition failed: {e}"))?;
    emit(
        &args.common.output,
        &serde_json::to_value(moved.to_json(&p))?,
    )
}

fn run_action(args: &ActionArgs) -> Result<()> {
    let p = require_lambda(&args.common)?;
    let cp = parse_point(&p, &read_arg(&args.point)?)?;
    let g: Matrix<GaussianRational> =
        serde_json::from_str(&read_arg(&args.g)?).context("bad --g JSON")?;
    let moved = match &args.tau {
        Some(tau) => psi_affine(&p, &g, &cp, &parse_perm(tau)?),
        None => psi_global(&p, &weyl_cosets(&p), &g, &cp),
    }
    .map_err(|e| anyhow::anyhow!("action failed: {e}"))?;
    emit(
        &args.common.output,
        &serde_json::to_value(moved.to_json(&p))?,
    )
}

#[derive(Serialize)]
struct CheckSummary {
    check: &'static str,
    pass: usize,
    fail: usize,
    skip: usize,
    results: Vec<CheckResult>,
}

#[derive(Serialize)]
struct ConfigReport {
    name: String,
    lambda: Vec<GaussianRational>,
    atlas: orbitkit::weyl::AtlasJson,
    checks: Vec<CheckSummary>,
}

#[derive(Serialize)]
struct Report {
    schema: &'static str,
    command: &'static str,
    seed: u64,
    samples: u64,
    num_bound: i64,
    den_bound: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    scale: Option<String>,
    configs: Vec<ConfigReport>,
    passed: bool,
}

fn default_jobs() -> usize {
    std::env::var("ORBITKIT_JOBS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}

fn run_verify_all(args: &VerifyArgs) -> Result<bool> {
    let mut file_cfg = FileConfig::default();
    if let Some(path) = &args.config {
        file_cfg = serde_json::from_str(&fs::read_to_string(path)?)
            .with_context(|| format!("bad config file {path}"))?;
    }
    let lambda = args.common.lambda.clone().or(file_cfg.lambda);
    let n = args.common.n.or(file_cfg.n);
    let samples = file_cfg.samples.map_or(args.samples, |s| {
        if args.samples != 50 { args.samples } else { s }
    });
    let seed = file_cfg.seed.map_or(args.seed, |s| {
        if args.seed != 0 { args.seed } else { s }
    });
    let bounds = SampleBounds {
        num_bound: file_cfg.num_bound.map_or(args.num_bound, |b| {
            if args.num_bound != 20 { args.num_bound } else { b }
        }),
        den_bound: file_cfg.den_bound.map_or(args.den_bound, |b| {
            if args.den_bound != 10 { args.den_bound } else { b }
        }),
    };
    if samples < 1 {
        bail!("--samples must be at least 1");
    }
    let scale = args.scale.clone().or(file_cfg.scale);
    let scale_factor = match &scale {
        Some(text) => {
            let c = parse_rational(text)?;
            if c.is_zero() {
                bail!("--scale must be nonzero");
            }
            Some(c)
        }
        None => None,
    };
    let output = args.common.output.clone().or(file_cfg.output);
    let jobs = args.jobs.or(file_cfg.jobs).unwrap_or_else(default_jobs);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("building thread pool")?;

    let configs: Vec<(String, ParabolicData)> = match lambda {
        Some(text) => vec![("custom".to_string(), parse_lambda(&text, n)?)],
        None => standard_configs(),
    };

    let mut report = Report {
        schema: "1",
        command: "verify-all",
        seed,
        samples,
        num_bound: bounds.num_bound,
        den_bound: bounds.den_bound,
        scale: scale.clone(),
        configs: Vec::new(),
        passed: true,
    };

    for (name, p) in configs {
        let atlas = weyl_cosets(&p);
        let mut checks = Vec::new();
        for kind in CheckKind::all() {
            let mut results: Vec<CheckResult> = pool.install(|| {
                (0..samples)
                    .into_par_iter()
                    .map(|idx| check_sample(&p, &atlas, kind, seed, idx, &bounds))
                    .collect()
            });
            results.sort_by_key(|r| r.index);
            checks.push(summarize(kind.name(), results));
        }
        if let Some(c) = &scale_factor {
            let mut results: Vec<CheckResult> = pool.install(|| {
                (0..samples)
                    .into_par_iter()
                    .map(|idx| scaling_check(&p, &atlas, c, seed, idx, &bounds))
                    .collect()
            });
            results.sort_by_key(|r| r.index);
            checks.push(summarize("scaling", results));
        }
        report.passed &= checks.iter().all(|c| c.fail == 0);
        report.configs.push(ConfigReport {
            name,
            lambda: p.lambda().to_vec(),
            atlas: atlas_json(&p, &atlas),
            checks,
        });
    }

    emit(&output, &serde_json::to_value(&report)?)?;
    Ok(report.passed)
}

fn summarize(check: &'static str, results: Vec<CheckResult>) -> CheckSummary {
    let count = |status: &str| results.iter().filter(|r| r.status == status).count();
    CheckSummary {
        check,
        pass: count("pass"),
        fail: count("fail"),
        skip: count("skip"),
        results,
    }
}

fn scaling_check(
    p: &ParabolicData,
    atlas: &[WeylCoset],
    c: &GaussianRational,
    seed: u64,
    index: u64,
    bounds: &SampleBounds,
) -> CheckResult {
    let mut rng = rng_for(seed, (5 << 32) + index);
    let cp = sample_chart_point(&mut rng, p, atlas, bounds);
    let outcome = scaling_law_holds(p, c, &cp);
    let (status, detail) = match outcome {
        Ok(true) => ("pass", None),
        Ok(false) => ("fail", Some("rescaling law violated".to_string())),
        Err(e) => ("fail", Some(e.to_string())),
    };
    CheckResult {
        check: "scaling",
        index,
        status,
        detail,
    }
}

mod examples;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Mu(args) => run_mu(args).map(|()| true),
        Cmd::Transition(args) => run_transition(args).map(|()| true),
        Cmd::Action(args) => run_action(args).map(|()| true),
        Cmd::VerifyAll(args) => run_verify_all(args),
        Cmd::Examples(args) => examples::run(args).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
