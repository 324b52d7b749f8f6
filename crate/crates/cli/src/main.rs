//! `qnl`: norms, indices, constant estimates, sweeps and audits.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qnl_core::audit::{render_table, run_audit, AuditConfig};
use qnl_core::constants::{estimate, ConstantEstimate, Family, RatioId, SearchConfig, SkewParams};
use qnl_core::{Error, NFunction, PiecewiseFunction, SpaceSpec};
use serde::Deserialize;

use config::RunConfig;
use output::{audit_csv, estimate_table, estimates_csv, sig12, EstimateRecord};

const EXIT_PARSE: u8 = 2;
const EXIT_DIVERGENT: u8 = 3;
const EXIT_SEARCH: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Parser)]
#[command(name = "qnl", version, about = "Quasi-norms of weak Orlicz and weak Lebesgue spaces")]
struct Cli {
    /// TOML run configuration; inline flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quasi-norm of a function literal.
    Norm {
        /// lp:P, weak-lp:P, orlicz:PHI or weak-orlicz:PHI.
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        function: Option<String>,
    },
    /// Orlicz indices and their extremizers.
    Indices {
        /// power:P, powerlog:P or expminus.
        #[arg(long)]
        phi: Option<String>,
    },
    /// Supremum search for one constant.
    Estimate {
        #[arg(long)]
        space: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Estimates over a (p, lambda, mu) grid, one CSV row per point.
    Sweep {
        /// Space kind: lp, weak-lp, orlicz or weak-orlicz (Orlicz kinds use t^p).
        #[arg(long)]
        space: Option<String>,
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        mu: Option<Vec<f64>>,
    },
    /// Audit every claim over the configured grid.
    Audit {
        /// Recompute engine norms with the dense-grid oracle.
        #[arg(long)]
        slow_oracle: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// c1, c2, nj, lyj, lyj-prime, skew-c[:C1:C2] or skew-cp[:PEXP[:C1:C2]].
    #[arg(long)]
    constant: Option<String>,
    /// Exponent of the p-th skew constant (overrides the one in --constant).
    #[arg(long)]
    pexp: Option<f64>,
    /// steps, paper-witnesses or mixed.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

/// A failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Divergent(_) => EXIT_DIVERGENT,
            Error::SearchFailed(_) => EXIT_SEARCH,
            Error::Domain(_) | Error::Unsupported(_) | Error::Parse(_) => EXIT_PARSE,
        };
        Fail(code, e.to_string())
    }
}

fn parse_err(msg: impl Into<String>) -> Fail {
    Fail(EXIT_PARSE, msg.into())
}

fn required<T>(v: Option<T>, what: &str) -> Result<T, Fail> {
    v.ok_or_else(|| parse_err(format!("missing {what}")))
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, Fail> {
    s.parse().map_err(Fail::from)
}

struct Search {
    id: RatioId,
    cfg: SearchConfig,
}

fn search(
    args: SearchArgs,
    constant: Option<String>,
    pexp: Option<f64>,
    family: Option<String>,
    budget: Option<usize>,
    seed: Option<u64>,
) -> Result<Search, Fail> {
    let mut id: RatioId = parse(&required(args.constant.or(constant), "--constant")?)?;
    if let (RatioId::SkewCp { pexp: r, .. }, Some(v)) = (&mut id, args.pexp.or(pexp)) {
        *r = v;
    }
    id.validate()?;
    let mut cfg = SearchConfig::default();
    if let Some(f) = args.family.or(family) {
        cfg.family = f.parse::<Family>()?;
    }
    cfg.budget = args.budget.or(budget).unwrap_or(cfg.budget);
    cfg.seed = args.seed.or(seed).unwrap_or(0);
    cfg.validate()?;
    Ok(Search { id, cfg })
}

fn sweep_space(kind: &str, p: f64) -> Result<SpaceSpec, Fail> {
    match kind.trim() {
        "lp" => Ok(SpaceSpec::lp(p)?),
        "weak-lp" => Ok(SpaceSpec::weak_lp(p)?),
        "orlicz" => Ok(SpaceSpec::orlicz(NFunction::power(p)?)?),
        "weak-orlicz" => Ok(SpaceSpec::weak_orlicz(NFunction::power(p)?)?),
        other => Err(parse_err(format!("unknown sweep space kind '{other}'"))),
    }
}

fn estimates_json(rows: &[ConstantEstimate]) -> String {
    let recs: Vec<EstimateRecord> = rows.iter().map(EstimateRecord::new).collect();
    serde_json::to_string_pretty(&recs).unwrap() + "\n"
}

/// Runs the command and returns its text output and exit code.
fn run(cli: Cli) -> Result<(String, u8), Fail> {
    let rc = match &cli.config {
        Some(p) => RunConfig::load(p).map_err(parse_err)?,
        None => RunConfig::default(),
    };
    let format = cli.format.or(rc.format);
    match cli.cmd {
        Command::Norm { space, function } => {
            let space: SpaceSpec = parse(&required(space.or(rc.norm.space), "--space")?)?;
            let f: PiecewiseFunction = parse(&required(function.or(rc.norm.function), "--function")?)?;
            let v = space.norm(&f)?;
            Ok(match format.unwrap_or(Format::Table) {
                Format::Table => (sig12(v) + "\n", 0),
                Format::Json => {
                    let j = serde_json::json!({ "space": space.to_string(), "function": f.to_string(), "value": v });
                    (serde_json::to_string_pretty(&j).unwrap() + "\n", 0)
                }
                Format::Csv => (format!("space,function,value\n{},\"{}\",{v}\n", space, f), 0),
            })
        }
        Command::Indices { phi } => {
            let phi: NFunction = parse(&required(phi.or(rc.indices.phi), "--phi")?)?;
            let ix = phi.indices()?;
            Ok(match format.unwrap_or(Format::Table) {
                Format::Table => (
                    format!(
                        "phi        {phi}\nalpha_bar  {}\nbeta_bar   {}\nargmin_t   {}\nargmax_t   {}\n",
                        sig12(ix.alpha_bar),
                        sig12(ix.beta_bar),
                        sig12(ix.argmin_t),
                        sig12(ix.argmax_t)
                    ),
                    0,
                ),
                Format::Json => {
                    let j = serde_json::json!({ "phi": phi.to_string(), "indices": ix });
                    (serde_json::to_string_pretty(&j).unwrap() + "\n", 0)
                }
                Format::Csv => (
                    format!("phi,alpha_bar,beta_bar,argmin_t,argmax_t\n{phi},{},{},{},{}\n", ix.alpha_bar, ix.beta_bar, ix.argmin_t, ix.argmax_t),
                    0,
                ),
            })
        }
        Command::Estimate { space, search: args, lambda, mu } => {
            let s = rc.estimate;
            let space: SpaceSpec = parse(&required(space.or(s.space), "--space")?)?;
            let sk = SkewParams::new(lambda.or(s.lambda).unwrap_or(1.0), mu.or(s.mu).unwrap_or(1.0))?;
            let Search { id, cfg } = search(args, s.constant, s.pexp, s.family, s.budget, s.seed)?;
            let e = estimate(&id, &space, &sk, &cfg)?;
            Ok(match format.unwrap_or(Format::Json) {
                Format::Json => (serde_json::to_string_pretty(&EstimateRecord::new(&e)).unwrap() + "\n", 0),
                Format::Csv => (estimates_csv(std::slice::from_ref(&e)), 0),
                Format::Table => (estimate_table(&e), 0),
            })
        }
        Command::Sweep { space, p, search: args, lambda, mu } => {
            let s = rc.sweep;
            let kind = required(space.or(s.space), "--space")?;
            let ps = required(p.or(s.p), "--p")?;
            let lambdas = lambda.or(s.lambda).unwrap_or_else(|| vec![1.0]);
            let mus = mu.or(s.mu).unwrap_or_else(|| vec![1.0]);
            let Search { id, cfg } = search(args, s.constant, s.pexp, s.family, s.budget, s.seed)?;
            let mut grid = Vec::new();
            for &p in &ps {
                let space = sweep_space(&kind, p)?;
                for &l in &lambdas {
                    for &m in &mus {
                        grid.push((space, SkewParams::new(l, m)?));
                    }
                }
            }
            eprintln!("seed={}", cfg.seed);
            let rows = grid.iter().map(|(space, sk)| estimate(&id, space, sk, &cfg)).collect::<Result<Vec<_>, _>>()?;
            Ok(match format.unwrap_or(Format::Csv) {
                Format::Csv | Format::Table => (estimates_csv(&rows), 0),
                Format::Json => (estimates_json(&rows), 0),
            })
        }
        Command::Audit { slow_oracle, seed } => {
            let a = rc.audit;
            let mut cfg = a.config.unwrap_or_else(AuditConfig::default);
            cfg.slow_oracle |= slow_oracle || a.slow_oracle.unwrap_or(false);
            if let Some(s) = seed.or(a.seed) {
                cfg.seed = s;
            }
            cfg.validate()?;
            let report = run_audit(&cfg)?;
            let code = report.exit_code() as u8;
            let s = &report.summary;
            eprintln!(
                "{} items: {} confirmed, {} approx-holds, {} violated ({} conclusions), {} inconsistent, {} error; seed={}",
                s.total, s.confirmed, s.approx_holds, s.violated, s.conclusion_violations, s.inconsistent, s.error, cfg.seed
            );
            Ok(match format.unwrap_or(Format::Json) {
                Format::Json => (serde_json::to_string_pretty(&report).unwrap() + "\n", code),
                Format::Csv => (audit_csv(&report), code),
                Format::Table => (render_table(&report), code),
            })
        }
    }
    .and_then(|(text, code)| {
        match cli.out.or(rc.out) {
            Some(path) => std::fs::write(&path, &text).map_err(|e| Fail(EXIT_IO, format!("cannot write {}: {e}", path.display())))?,
            None => print!("{text}"),
        }
        Ok((String::new(), code))
    })
}

fn init_threads() -> Result<(), Fail> {
    let Ok(v) = std::env::var("QNL_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| parse_err(format!("QNL_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| parse_err(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|_| run(cli)) {
        Ok((_, code)) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
