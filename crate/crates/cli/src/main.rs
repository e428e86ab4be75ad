//! `greedy` — run greedy expansion traces, randomized bound sweeps, exact
//! best m-term oracles, and the full verification suite.
//!
//! Exit codes: 0 when every asserted inequality passes, 1 when a
//! verification fails (a summary goes to stderr), 2 on usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use greedy_core::report::{json_to_string, reports_to_csv, reports_to_json};
use greedy_core::{
    all_pass, dga_upper_sweep, oga_upper_sweep, run_all, run_dga, run_oga, run_pga, run_wga,
    sigma_m_basis, sigma_m_hilbert_bruteforce, trig_lacunary_demo, wga_upper_sweep, DgaParams,
    DgaSweepConfig, DgaVariant, Dictionary, Element, ExperimentReport, OgaSweepConfig,
    SelectionMode, SpaceSpec, SuiteConfig, WgaSweepConfig,
};

#[derive(Parser)]
#[command(
    name = "greedy",
    version,
    about = "Greedy expansion algorithms with rate-bound verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one greedy trace and emit its per-step records
    Run(RunArgs),
    /// Randomized bound-domination sweep for one algorithm family
    Sweep(SweepArgs),
    /// Run the verification suite and report pass/fail per experiment
    Verify(VerifyArgs),
    /// Exact best m-term approximation error
    Sigma(SigmaArgs),
    /// Lacunary cosine demo: quadrature norms and ratio samples
    #[command(name = "demo-trig")]
    DemoTrig(TrigArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum AlgorithmArg {
    Pga,
    Oga,
    Wga,
    Dga,
    DgaStar,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SpaceArg {
    Hilbert,
    Lq,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    Exact,
    Adversarial,
    Seeded,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FamilyArg {
    Wga,
    Oga,
    Dga,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum VariantArg {
    Rd,
    Star,
}

#[derive(Args, Serialize)]
struct RunArgs {
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    /// Ambient space (defaults to hilbert; lq requires --q)
    #[arg(long, value_enum)]
    space: Option<SpaceArg>,
    /// Norm exponent for an l_q space, 1 < q < inf
    #[arg(long)]
    q: Option<f64>,
    /// Weakness parameter, in (0, 1]
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Shrinkage parameter; (0, 1] for wga, strictly inside (0, 1) for dga
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Override the smoothness-majorant constant
    #[arg(long)]
    gamma: Option<f64>,
    /// Override the smoothness-majorant power, in (1, 2]
    #[arg(long)]
    q_majorant: Option<f64>,
    /// Ambient dimension (needed for --f ones)
    #[arg(long)]
    dim: Option<usize>,
    /// Number of greedy steps
    #[arg(long, short = 'm')]
    m: usize,
    /// Seed for the seeded selection mode (GREEDY_SEED overrides)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Input vector: `ones`, `ones:K`, a comma list, or `@file` with one
    /// float per line
    #[arg(long, default_value = "ones")]
    f: String,
    /// Exact A_1 norm of the input, when known
    #[arg(long)]
    a1: Option<f64>,
    /// JSON dictionary file instead of the standard basis
    #[arg(long)]
    dict_file: Option<PathBuf>,
    #[serde(skip)]
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args, Serialize)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = 0.5)]
    b: f64,
    /// Norm exponent for the dga family, in (1, 2]
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, value_enum, default_value_t = VariantArg::Rd)]
    variant: VariantArg,
    #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 64)]
    m_max: usize,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    #[arg(long)]
    seed: Option<u64>,
    #[serde(skip)]
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// Which suite to run (only `all` is defined)
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; output bytes do not depend on this
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[serde(skip)]
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args, Serialize)]
struct SigmaArgs {
    /// Norm exponent (defaults to the Hilbert exponent 2)
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, short = 'm')]
    m: usize,
    #[arg(long, default_value = "ones")]
    f: String,
    #[arg(long)]
    dim: Option<usize>,
    /// JSON dictionary file for the brute-force oracle
    #[arg(long)]
    dict_file: Option<PathBuf>,
    /// Use exact subset enumeration over a Hilbert dictionary
    #[arg(long)]
    brute: bool,
    #[serde(skip)]
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args, Serialize)]
struct TrigArgs {
    /// Number of kept terms; the input has 2m lacunary cosines
    #[arg(long, short = 'm')]
    m: usize,
    #[arg(long, default_value_t = 4.0)]
    q: f64,
    /// Quadrature grid size (defaults to the minimal resolving grid)
    #[arg(long)]
    quad_points: Option<usize>,
    #[serde(skip)]
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sigma(args) => cmd_sigma(args),
        Command::DemoTrig(args) => cmd_demo_trig(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// GREEDY_SEED overrides any --seed on the command line.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Ok(value) = std::env::var("GREEDY_SEED") {
        return value
            .parse()
            .with_context(|| format!("GREEDY_SEED={value} is not a valid seed"));
    }
    Ok(flag.unwrap_or(42))
}

fn resolve_mode(mode: ModeArg, seed: u64) -> SelectionMode {
    match mode {
        ModeArg::Exact => SelectionMode::Exact,
        ModeArg::Adversarial => SelectionMode::AdversarialMinIndex,
        ModeArg::Seeded => SelectionMode::Seeded(seed),
    }
}

fn build_space(
    space: Option<SpaceArg>,
    q: Option<f64>,
    gamma: Option<f64>,
    q_majorant: Option<f64>,
) -> Result<SpaceSpec> {
    let spec = match (space, q) {
        (Some(SpaceArg::Hilbert), None) | (None, None) => SpaceSpec::hilbert(),
        (Some(SpaceArg::Hilbert), Some(_)) => {
            bail!("--q applies to --space lq, not hilbert")
        }
        (Some(SpaceArg::Lq), None) => bail!("--space lq requires --q"),
        (_, Some(q)) => SpaceSpec::lq(q).with_context(|| format!("--q {q}"))?,
    };
    match (gamma, q_majorant) {
        (None, None) => Ok(spec),
        (g, p) => {
            let (dg, dp) = spec.majorant();
            spec.with_majorant(g.unwrap_or(dg), p.unwrap_or(dp))
                .context("--gamma/--q-majorant")
        }
    }
}

fn build_vector(spec: &str, dim: Option<usize>) -> Result<Vec<f64>> {
    let coeffs = if spec == "ones" {
        let d = dim.context("--f ones needs --dim (or a dictionary file)")?;
        vec![1.0; d]
    } else if let Some(k) = spec.strip_prefix("ones:") {
        let k: usize = k.parse().with_context(|| format!("bad count in --f {spec}"))?;
        let d = dim.unwrap_or(k);
        ensure!(k <= d, "--f ones:{k} does not fit dimension {d}");
        let mut v = vec![0.0; d];
        v[..k].fill(1.0);
        v
    } else if let Some(path) = spec.strip_prefix('@') {
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| l.parse::<f64>().with_context(|| format!("bad float {l:?} in {path}")))
            .collect::<Result<Vec<_>>>()?
    } else {
        spec.split(',')
            .map(str::trim)
            .map(|l| l.parse::<f64>().with_context(|| format!("bad float {l:?} in --f")))
            .collect::<Result<Vec<_>>>()?
    };
    if let Some(d) = dim {
        ensure!(
            coeffs.len() == d,
            "input vector has {} entries but --dim is {d}",
            coeffs.len()
        );
    }
    ensure!(!coeffs.is_empty(), "input vector is empty");
    Ok(coeffs)
}

fn load_dictionary(path: &PathBuf, space: SpaceSpec) -> Result<Dictionary> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).context("dictionary JSON")?;
    Ok(Dictionary::from_json(&value, space)?)
}

fn write_output(path: &Option<PathBuf>, contents: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, contents).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode> {
    let seed = resolve_seed(args.seed)?;
    let space = build_space(args.space, args.q, args.gamma, args.q_majorant)?;
    let mode = resolve_mode(args.mode, seed);

    let (dictionary, coeffs) = match &args.dict_file {
        Some(path) => {
            let d = load_dictionary(path, space)?;
            let coeffs = build_vector(&args.f, Some(d.dim()))?;
            (d, coeffs)
        }
        None => {
            let coeffs = build_vector(&args.f, args.dim)?;
            let d = Dictionary::standard_basis(coeffs.len(), space)?;
            (d, coeffs)
        }
    };
    let f = Element::new(coeffs, space)?;

    ensure!(
        args.t > 0.0 && args.t <= 1.0,
        "--t {} out of range (0, 1]",
        args.t
    );
    let trace = match args.algorithm {
        AlgorithmArg::Pga => {
            ensure!(
                args.t == 1.0 && args.b == 1.0,
                "pga runs with t = 1 and b = 1; use wga for other parameters"
            );
            run_pga(&f, &dictionary, args.m)?
        }
        AlgorithmArg::Oga => run_oga(&f, &dictionary, args.m)?,
        AlgorithmArg::Wga => {
            ensure!(
                args.b > 0.0 && args.b <= 1.0,
                "--b {} out of range (0, 1] for wga",
                args.b
            );
            run_wga(&f, &dictionary, args.m, args.t, args.b, mode, args.a1)?
        }
        AlgorithmArg::Dga | AlgorithmArg::DgaStar => {
            ensure!(
                args.b > 0.0 && args.b < 1.0,
                "--b {} invalid: the dual step-size analysis needs b strictly inside (0, 1)",
                args.b
            );
            let variant = if args.algorithm == AlgorithmArg::Dga {
                DgaVariant::Rd
            } else {
                DgaVariant::Star
            };
            let params = DgaParams::new(args.t, args.b, variant)?;
            run_dga(&f, &dictionary, args.m, params, mode, args.a1)?
        }
    };

    let output = match args.format {
        FormatArg::Csv => trace.to_csv(),
        FormatArg::Json => {
            let wrapped = json!({
                "config": config_echo(&args, seed)?,
                "trace": trace.to_json(),
            });
            json_to_string(&wrapped)
        }
    };
    write_output(&args.out, &output)?;
    Ok(ExitCode::SUCCESS)
}

fn config_echo<T: Serialize>(args: &T, seed: u64) -> Result<serde_json::Value> {
    let mut value = serde_json::to_value(args).context("config echo")?;
    value["resolved_seed"] = json!(seed);
    Ok(value)
}

fn emit_reports(
    reports: &[ExperimentReport],
    config: serde_json::Value,
    format: FormatArg,
    out: &Option<PathBuf>,
) -> Result<bool> {
    let pass = all_pass(reports);
    let output = match format {
        FormatArg::Json => {
            let wrapped = json!({
                "config": config,
                "pass": pass,
                "reports": reports_to_json(reports),
            });
            json_to_string(&wrapped)
        }
        FormatArg::Csv => reports_to_csv(reports),
    };
    write_output(out, &output)?;
    if !pass {
        for report in reports.iter().filter(|r| !r.pass) {
            let failing = report.points.iter().filter(|p| !p.pass).count();
            eprintln!("FAIL {} ({} failing points)", report.id, failing);
        }
    }
    Ok(pass)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode> {
    let seed = resolve_seed(args.seed)?;
    let report = match args.family {
        FamilyArg::Wga => {
            ensure!(
                args.b > 0.0 && args.b <= 1.0,
                "--b {} out of range (0, 1] for the wga family",
                args.b
            );
            wga_upper_sweep(&WgaSweepConfig {
                t: args.t,
                b: args.b,
                dims: args.dims.clone(),
                m_max: args.m_max,
                trials: args.trials,
                mode: resolve_mode(args.mode, seed),
                seed,
            })?
        }
        FamilyArg::Oga => oga_upper_sweep(&OgaSweepConfig {
            dims: args.dims.clone(),
            m_max: args.m_max,
            trials: args.trials,
            seed,
        })?,
        FamilyArg::Dga => {
            let q = args.q.context("--family dga requires --q in (1, 2]")?;
            dga_upper_sweep(&DgaSweepConfig {
                q,
                t: args.t,
                b: args.b,
                variant: match args.variant {
                    VariantArg::Rd => DgaVariant::Rd,
                    VariantArg::Star => DgaVariant::Star,
                },
                dims: args.dims.clone(),
                m_max: args.m_max,
                trials: args.trials,
                seed,
            })?
        }
    };
    let pass = emit_reports(
        std::slice::from_ref(&report),
        config_echo(&args, seed)?,
        args.format,
        &args.out,
    )?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    ensure!(
        args.suite == "all",
        "--suite {} is not defined; only `all` exists",
        args.suite
    );
    ensure!(args.threads >= 1, "--threads must be at least 1");
    let seed = resolve_seed(args.seed)?;
    let reports = run_all(&SuiteConfig {
        seed,
        threads: args.threads,
    })?;
    let pass = emit_reports(&reports, config_echo(&args, seed)?, args.format, &args.out)?;
    if pass {
        eprintln!("verify: all {} experiments passed", reports.len());
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_sigma(args: SigmaArgs) -> Result<ExitCode> {
    let space = match args.q {
        Some(q) => SpaceSpec::lq(q)?,
        None => SpaceSpec::hilbert(),
    };
    let result = if args.brute {
        let dictionary = match &args.dict_file {
            Some(path) => load_dictionary(path, space)?,
            None => {
                let d = args
                    .dim
                    .context("--brute without --dict-file needs --dim")?;
                Dictionary::standard_basis(d, space)?
            }
        };
        let coeffs = build_vector(&args.f, Some(dictionary.dim()))?;
        let f = Element::new(coeffs, space)?;
        sigma_m_hilbert_bruteforce(&f, &dictionary, args.m)?
    } else {
        let coeffs = build_vector(&args.f, args.dim)?;
        let f = Element::new(coeffs, space)?;
        sigma_m_basis(&f, args.m)?
    };
    let output = match args.format {
        FormatArg::Json => {
            let wrapped = json!({
                "config": serde_json::to_value(&args)?,
                "result": serde_json::to_value(&result)?,
            });
            json_to_string(&wrapped)
        }
        FormatArg::Csv => {
            let support = result
                .support
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            format!(
                "m,value,method,support\n{},{},{:?},{}\n",
                result.m,
                greedy_core::report::float_repr(result.value),
                result.method,
                support
            )
        }
    };
    write_output(&args.out, &output)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_demo_trig(args: TrigArgs) -> Result<ExitCode> {
    ensure!(
        args.m >= 1 && args.m <= 6,
        "--m {} out of the desk-scale range [1, 6]",
        args.m
    );
    let quad_points = args.quad_points.unwrap_or(1usize << (2 * args.m + 3));
    let report = trig_lacunary_demo(args.m, args.q, quad_points)?;
    let output = match args.format {
        FormatArg::Json => {
            let wrapped = json!({
                "config": serde_json::to_value(&args)?,
                "report": serde_json::to_value(&report)?,
            });
            json_to_string(&wrapped)
        }
        FormatArg::Csv => {
            let mut s = String::from("alpha,ratio\n");
            for (alpha, ratio) in &report.ratios {
                s.push_str(&format!(
                    "{},{}\n",
                    greedy_core::report::float_repr(*alpha),
                    greedy_core::report::float_repr(*ratio)
                ));
            }
            s
        }
    };
    write_output(&args.out, &output)?;
    Ok(ExitCode::SUCCESS)
}
