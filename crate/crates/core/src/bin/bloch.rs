use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::de::DeserializeOwned;

use bloch_lab::bloch::{bloch_norm_star, bloch_seminorm, AnalyticFunction};
use bloch_lab::disc::{AutomorphismFlow, DiscPoint};
use bloch_lab::harness::{self, verify, SuiteConfig, SuiteSummary, VerificationReport};
use bloch_lab::operators::{BlochOperator, OperatorDescriptor};
use bloch_lab::range_space::RangeSpace;
use bloch_lab::{Error, Result};

#[derive(Parser)]
#[command(name = "bloch", version, about = "Numerical checks for isometries of vector-valued Bloch spaces")]
struct Cli {
    /// Suite configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed override; BLOCH_LAB_SEED takes precedence.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Suite to run with `suite`.
    #[arg(long, global = true, default_value = "all")]
    suite: String,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON-lines output instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Estimate the Bloch seminorm (or the star norm) of a function.
    Norm {
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long = "fn")]
        func: PathBuf,
        #[arg(long)]
        star: bool,
    },
    /// Norm preservation and inverse round trip of an isometry descriptor.
    VerifyIsometry(OpArgs),
    /// Flow and operator group laws of a group descriptor.
    VerifyGroup(OpArgs),
    /// First-order agreement of a group with its generator.
    VerifyGenerator(OpArgs),
    /// Projection identities of a gbp descriptor.
    VerifyGbp(OpArgs),
    /// Sweep the quadratic over roots of unity for an isometry descriptor.
    FalsifyGbp {
        #[command(flatten)]
        op: OpArgs,
        /// Extra λ values as `re,im`; defaults to the 8th roots of unity except 1.
        #[arg(long = "lambda", value_parser = parse_pair, allow_hyphen_values = true)]
        lambdas: Vec<Complex64>,
    },
    /// Run a verification suite (see --suite).
    Suite,
    /// CSV trajectories of a flow.
    Trace {
        #[arg(long)]
        flow: PathBuf,
        /// Initial points as `re,im`.
        #[arg(long = "z", value_parser = parse_pair, allow_hyphen_values = true, required = true)]
        z: Vec<Complex64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
    },
}

#[derive(clap::Args)]
struct OpArgs {
    #[arg(long)]
    space: Option<PathBuf>,
    #[arg(long)]
    op: PathBuf,
    /// Test functions (a JSON array); defaults to the basis and witness corpus.
    #[arg(long = "fn")]
    func: Option<PathBuf>,
}

fn parse_pair(s: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected `re,im`, got `{s}`"))?;
    let p = |x: &str| x.trim().parse::<f64>().map_err(|e| e.to_string());
    Ok(Complex64::new(p(re)?, p(im)?))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn load_config(cli: &Cli) -> Result<SuiteConfig> {
    let mut cfg = match &cli.config {
        Some(p) => SuiteConfig::load(p)?,
        None => SuiteConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let cfg = cfg.with_env_seed()?;
    cfg.validate()?;
    Ok(cfg)
}

fn load_space(path: &Option<PathBuf>, cfg: &SuiteConfig) -> Result<RangeSpace> {
    match path {
        Some(p) => read_json(p),
        None => cfg.range_space(),
    }
}

struct OpInput {
    space: RangeSpace,
    desc: OperatorDescriptor,
    fns: Option<Vec<AnalyticFunction>>,
}

fn load_op(args: &OpArgs, cfg: &SuiteConfig) -> Result<OpInput> {
    let space = load_space(&args.space, cfg)?;
    let desc = read_json(&args.op)?;
    let fns = args.func.as_deref().map(read_json).transpose()?;
    Ok(OpInput { space, desc, fns })
}

impl OpInput {
    fn functions(&self, cfg: &SuiteConfig, star: bool) -> Vec<AnalyticFunction> {
        self.fns.clone().unwrap_or_else(|| verify::default_test_functions(&self.space, cfg, star))
    }
}

fn render(cli: &Cli, cfg: &SuiteConfig, label: &str, reports: &[VerificationReport]) -> Result<String> {
    if cli.json {
        harness::render_jsonl(cfg, label, reports)
    } else {
        let s = SuiteSummary::of(label, reports);
        Ok(format!("{}{} of {} checks passed\n", harness::render_text(reports), s.passed, s.total))
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = load_config(cli)?;
    let (label, reports) = match &cli.cmd {
        Cmd::Norm { space, func, star } => {
            let space = load_space(space, &cfg)?;
            let f: AnalyticFunction = read_json(func)?;
            if f.dim() != space.dim() {
                return Err(Error::DimensionMismatch { expected: space.dim(), found: f.dim() });
            }
            let est = if *star { bloch_norm_star(&space, &f, &cfg.grid) } else { bloch_seminorm(&space, &f, &cfg.grid) };
            emit(cli, &format!("{}\n", serde_json::to_string(&est)?))?;
            return Ok(true);
        }
        Cmd::Trace { flow, z, t0, t1, steps } => {
            let flow: AutomorphismFlow = read_json(flow)?;
            let zs = z.iter().map(|&w| DiscPoint::new(w)).collect::<Result<Vec<_>>>()?;
            let mut buf = Vec::new();
            harness::emit_flow_trace(&flow, &zs, &harness::linspace(*t0, *t1, (*steps).max(2)), &mut buf)?;
            emit(cli, &String::from_utf8_lossy(&buf))?;
            return Ok(true);
        }
        Cmd::Suite => (cli.suite.clone(), harness::run_suite(&cfg, &cli.suite)?),
        Cmd::VerifyIsometry(a) => {
            let inp = load_op(a, &cfg)?;
            let op = BlochOperator::from_descriptor(&inp.space, inp.desc.clone())?;
            if !op.is_isometry() {
                return Err(Error::Unsupported("verify-isometry needs a comp_iso or star_iso descriptor".into()));
            }
            let fns = inp.functions(&cfg, matches!(op, BlochOperator::StarIsometry(_)));
            ("verify-isometry".into(), verify::verify_isometry(&inp.space, &cfg, &op, &fns)?)
        }
        Cmd::VerifyGroup(a) | Cmd::VerifyGenerator(a) => {
            let inp = load_op(a, &cfg)?;
            let g = inp.desc.to_group(&inp.space)?;
            let fns = inp.functions(&cfg, false);
            if matches!(cli.cmd, Cmd::VerifyGroup(_)) {
                ("verify-group".into(), verify::verify_group(&inp.space, &cfg, &g, &fns)?)
            } else {
                ("verify-generator".into(), verify::verify_generator(&inp.space, &cfg, &g, &fns)?)
            }
        }
        Cmd::VerifyGbp(a) => {
            let inp = load_op(a, &cfg)?;
            let BlochOperator::GBProjection(p) = BlochOperator::from_descriptor(&inp.space, inp.desc.clone())? else {
                return Err(Error::Unsupported("verify-gbp needs a gbp descriptor".into()));
            };
            let fns = inp.functions(&cfg, matches!(p.reflection(), BlochOperator::StarIsometry(_)));
            ("verify-gbp".into(), verify::verify_gbp(&inp.space, &cfg, &p, &fns)?)
        }
        Cmd::FalsifyGbp { op, lambdas } => {
            let inp = load_op(op, &cfg)?;
            let t = BlochOperator::from_descriptor(&inp.space, inp.desc.clone())?;
            let fns = inp.functions(&cfg, matches!(t, BlochOperator::StarIsometry(_)));
            let ls = if lambdas.is_empty() { harness::sweep_lambdas() } else { lambdas.clone() };
            ("falsify-gbp".into(), verify::falsify_gbp(&inp.space, &cfg, &t, &ls, &fns)?)
        }
    };
    emit(cli, &render(cli, &cfg, &label, &reports)?)?;
    Ok(reports.iter().all(|r| r.pass))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
