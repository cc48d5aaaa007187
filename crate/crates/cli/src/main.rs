//! `eapkit`: builds the constructions and checks their claims from the shell.
//!
//! Exit codes: 0 success, 1 a checked claim failed, 2 invalid input.

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use eapkit::certificates::{make_certificate, translate_family_probe};
use eapkit::constructions::{norm_profile, ConstructionFn, IntervalSequence, Kind};
use eapkit::error::{EapError, Result};
use eapkit::fourier::{coeff_decay_series, fourier_coeff, parseval_defect};
use eapkit::means::{mean_series, uniform_mean_probe, Horizons, MeanQuery};
use eapkit::rational::{self, Rational};
use eapkit::report::{run_report, ReportOptions, Status};
use serde_json::json;

use config::{Format, Num, RunConfig};

#[derive(Parser)]
#[command(name = "eapkit", version, about = "Exact checks for weakly almost periodic counterexamples")]
struct Cli {
    /// JSON file with run settings; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// json or csv
    #[arg(long, global = true)]
    format: Option<String>,
    /// write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a schedule and optionally evaluate or profile a function
    Construct(ConstructArgs),
    /// Exact window means along a horizon list
    Means(MeansArgs),
    /// Weak-null certificates for translate families
    Certify(CertifyArgs),
    /// Fourier coefficient decay and Parseval defect
    Fourier(FourierArgs),
    /// Run the whole claim suite
    Report(ReportArgs),
}

#[derive(Args, Default)]
struct ScheduleArgs {
    /// corrected or paper-literal
    #[arg(long)]
    rule: Option<String>,
    /// number of intervals
    #[arg(long = "k", alias = "K")]
    k: Option<i64>,
    /// tent, cutoff, cut-tent or two-sided
    #[arg(long)]
    kind: Option<String>,
    /// half-line or line
    #[arg(long)]
    domain: Option<String>,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// points to evaluate, e.g. 1,21/20,3/2
    #[arg(long, value_delimiter = ',')]
    eval: Vec<String>,
    /// window `a,b` for a norm profile
    #[arg(long)]
    profile: Option<String>,
    /// 1 for the norm, 2 for its square
    #[arg(long, default_value_t = 1)]
    power: u32,
}

#[derive(Args)]
struct MeansArgs {
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// normF, normF_sq or phi
    #[arg(long)]
    quantity: Option<String>,
    /// plus or sym
    #[arg(long)]
    normalization: Option<String>,
    /// beta_even:1..10, beta_odd:1..5 or list:1,5/2
    #[arg(long)]
    horizons: Option<String>,
    /// window start
    #[arg(long)]
    offset: Option<String>,
    /// offsets for the uniform-mean probe
    #[arg(long, value_delimiter = ',')]
    probe_offsets: Vec<String>,
    /// candidate limit for the probe
    #[arg(long)]
    candidate: Option<String>,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// translate counts, e.g. 4,16,64
    #[arg(long = "q", value_delimiter = ',')]
    q: Vec<i64>,
    /// target uniform bound
    #[arg(long)]
    epsilon: Option<String>,
    /// integers[:shift], arithmetic:start,step, random:seed or custom:t1,t2,...
    #[arg(long)]
    generator: Option<String>,
}

#[derive(Args)]
struct FourierArgs {
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// `default` or frequencies such as 0,2pi*1,-2pi*1/2,0.3
    #[arg(long)]
    lambda_grid: Option<String>,
    /// horizons
    #[arg(long = "T", alias = "t", value_delimiter = ',')]
    horizon: Vec<String>,
    /// include every coordinate in JSON output
    #[arg(long)]
    coords: bool,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    rule: Option<String>,
    #[arg(long = "k", alias = "K")]
    k: Option<i64>,
    #[arg(long, value_delimiter = ',')]
    q_list: Vec<i64>,
    #[arg(long)]
    lambda_grid: Option<String>,
    /// seed for the random-spacing generator
    #[arg(long)]
    seed: Option<u64>,
}

enum Failure {
    Input(EapError),
    Io(anyhow::Error),
}

impl From<EapError> for Failure {
    fn from(e: EapError) -> Self {
        Failure::Input(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn text_list(v: &[String]) -> Option<Vec<Num>> {
    (!v.is_empty()).then(|| v.iter().map(|s| Num::Text(s.clone())).collect())
}

fn schedule_flags(s: ScheduleArgs) -> RunConfig {
    RunConfig { rule: s.rule, k: s.k, kind: s.kind, domain: s.domain, ..Default::default() }
}

fn run(cli: Cli) -> std::result::Result<bool, Failure> {
    let file = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    let global = RunConfig { format: cli.format.clone(), output_path: cli.out.clone(), ..Default::default() };
    let (name, flags, extra) = match cli.command {
        Command::Construct(a) => {
            let extra = Extra::Construct { eval: a.eval, profile: a.profile, power: a.power };
            ("construct", schedule_flags(a.schedule), extra)
        }
        Command::Means(a) => {
            let flags = RunConfig {
                quantity: a.quantity,
                normalization: a.normalization,
                horizons: a.horizons,
                offset: a.offset.map(Num::Text),
                ..schedule_flags(a.schedule)
            };
            ("means", flags, Extra::Means { probe_offsets: a.probe_offsets, candidate: a.candidate })
        }
        Command::Certify(a) => {
            let flags = RunConfig {
                q_list: (!a.q.is_empty()).then_some(a.q),
                epsilon: a.epsilon.map(Num::Text),
                generator: a.generator,
                ..schedule_flags(a.schedule)
            };
            ("certify", flags, Extra::None)
        }
        Command::Fourier(a) => {
            let flags = RunConfig {
                lambda_grid: a.lambda_grid,
                horizon: text_list(&a.horizon),
                ..schedule_flags(a.schedule)
            };
            ("fourier", flags, Extra::Fourier { coords: a.coords })
        }
        Command::Report(a) => {
            let flags = RunConfig {
                rule: a.rule,
                k: a.k,
                q_list: (!a.q_list.is_empty()).then_some(a.q_list),
                lambda_grid: a.lambda_grid,
                seed: a.seed,
                ..Default::default()
            };
            ("report", flags, Extra::None)
        }
    };
    let cfg = file.merge(global).merge(flags);
    if let Some(c) = &cfg.command {
        if c != name {
            return Err(EapError::config("command", format!("config file is for `{c}`, not `{name}`")).into());
        }
    }
    let format = cfg.format()?;
    let (body, ok) = match name {
        "construct" => cmd_construct(&cfg, format, extra)?,
        "means" => cmd_means(&cfg, format, extra)?,
        "certify" => cmd_certify(&cfg, format)?,
        "fourier" => cmd_fourier(&cfg, format, extra)?,
        _ => cmd_report(&cfg, format)?,
    };
    match &cfg.output_path {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(body.as_bytes()).context("writing stdout")?,
    }
    Ok(ok)
}

enum Extra {
    None,
    Construct { eval: Vec<String>, profile: Option<String>, power: u32 },
    Means { probe_offsets: Vec<String>, candidate: Option<String> },
    Fourier { coords: bool },
}

fn function(cfg: &RunConfig, default_kind: Kind, k: usize) -> Result<ConstructionFn> {
    let kind = cfg.kind_or(default_kind)?;
    let schedule = if kind.needs_schedule() { Some(Arc::new(IntervalSequence::build(k, cfg.rule()?)?)) } else { None };
    ConstructionFn::new(kind, schedule, cfg.domain()?)
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value") + "\n"
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn parse_list(items: &[String], field: &str) -> Result<Vec<Rational>> {
    items
        .iter()
        .map(|s| rational::parse(s).map_err(|e| EapError::config(field, e.to_string())))
        .collect()
}

fn cmd_construct(cfg: &RunConfig, format: Format, extra: Extra) -> std::result::Result<(String, bool), Failure> {
    let Extra::Construct { eval, profile, power } = extra else { unreachable!() };
    let k = cfg.k_or(12)?;
    let seq = IntervalSequence::build(k, cfg.rule()?)?;
    let violations = seq.violations();
    if format == Format::Csv {
        let rows = (1..=seq.len())
            .map(|n| vec![n.to_string(), seq.alpha(n).to_string(), seq.beta(n).to_string()])
            .collect();
        return Ok((csv_text(&["n", "alpha", "beta"], rows)?, violations.is_empty()));
    }
    let f = function(cfg, Kind::CutTent, k)?;
    let points = parse_list(&eval, "eval")?;
    let evaluations: Vec<_> = points
        .iter()
        .map(|t| json!({ "t": rational::to_pq(t), "value": f.eval(t) }))
        .collect();
    let mut doc = json!({
        "rule": seq.rule(),
        "K": seq.len(),
        "sequence": &seq,
        "violations": violations.iter().map(|v| json!({"index": v.index, "message": v.message})).collect::<Vec<_>>(),
        "kind": f.kind().name(),
    });
    if !evaluations.is_empty() {
        doc["evaluations"] = json!(evaluations);
    }
    if let Some(w) = profile {
        let ends = parse_list(&w.split(',').map(str::to_string).collect::<Vec<_>>(), "profile")?;
        let [a, b] = ends.as_slice() else {
            return Err(EapError::config("profile", "expected `a,b`").into());
        };
        doc["profile"] = json!(norm_profile(&f, power, a, b)?);
    }
    Ok((pretty(&doc), violations.is_empty()))
}

fn horizon_index(h: &Horizons) -> usize {
    match h {
        Horizons::BetaEven { to, .. } => 2 * to,
        Horizons::BetaOdd { to, .. } => 2 * to + 1,
        Horizons::Explicit(_) => 0,
    }
}

fn cmd_means(cfg: &RunConfig, format: Format, extra: Extra) -> std::result::Result<(String, bool), Failure> {
    let Extra::Means { probe_offsets, candidate } = extra else { unreachable!() };
    let horizons = cfg.horizons()?;
    // size the schedule to the requested right ends unless K is given
    let k = if cfg.k.is_some() { cfg.k_or(12)? } else { cfg.k_or(12.max(horizon_index(&horizons)))? };
    let f = function(cfg, Kind::CutTent, k)?;
    let q = MeanQuery::new(f.clone(), cfg.quantity()?, cfg.normalization()?).at_offset(cfg.offset()?);
    if !probe_offsets.is_empty() {
        let offsets = parse_list(&probe_offsets, "probe_offsets")?;
        let candidate = candidate.map(|c| rational::parse(&c)).transpose().map_err(|e| EapError::config("candidate", e.to_string()))?;
        let mut probes = Vec::new();
        for t in horizons.resolve(&f)? {
            probes.push(uniform_mean_probe(&q, &t, &offsets, candidate.clone())?);
        }
        if format == Format::Csv {
            let rows = probes
                .iter()
                .flat_map(|p| {
                    p.rows.iter().map(move |r| {
                        vec![
                            rational::to_pq(&p.horizon),
                            rational::to_pq(&r.horizon),
                            rational::to_pq(&r.mean),
                            r.mean_float.clone(),
                            rational::to_pq(&p.candidate_limit),
                        ]
                    })
                })
                .collect();
            return Ok((csv_text(&["T", "offset", "mean", "mean_float", "candidate_limit"], rows)?, true));
        }
        return Ok((pretty(&json!({ "probes": probes })), true));
    }
    let series = mean_series(&q, &horizons)?;
    if format == Format::Csv {
        let rows = series
            .rows
            .iter()
            .map(|r| vec![rational::to_pq(&r.horizon), rational::to_pq(&r.mean), r.mean_float.clone()])
            .collect();
        return Ok((csv_text(&["T", "mean", "mean_float"], rows)?, true));
    }
    let doc = json!({
        "kind": f.kind().name(),
        "rule": f.schedule().map(|s| s.rule()),
        "K": f.schedule().map(|s| s.len()),
        "quantity": q.quantity,
        "normalization": q.normalization,
        "offset": rational::to_pq(&q.offset),
        "rows": series.rows,
    });
    Ok((pretty(&doc), true))
}

fn cmd_certify(cfg: &RunConfig, format: Format) -> std::result::Result<(String, bool), Failure> {
    let k = cfg.k_or(12)?;
    let f = function(cfg, Kind::CutTent, k)?;
    let q_list = cfg.q_list_or(&[4, 16, 64])?;
    let generator = cfg.generator()?;
    let rows = translate_family_probe(&f, &generator, &q_list)?;
    let mut ok = rows.iter().all(|r| r.holds);
    let mut certificates = Vec::new();
    if let Some(eps) = cfg.epsilon()? {
        for &q in &q_list {
            let c = make_certificate(&f, &generator.times(q)?, &eps)?;
            ok &= c.valid;
            certificates.push(c);
        }
    }
    if format == Format::Csv {
        let table = rows
            .iter()
            .map(|r| {
                vec![
                    r.q.to_string(),
                    rational::to_pq(&r.sup_sq_lower),
                    rational::to_pq(&r.sup_sq_upper),
                    rational::to_decimal(&r.sup_sq_upper, 15),
                    rational::to_pq(&r.inverse_q),
                    r.holds.to_string(),
                ]
            })
            .collect();
        return Ok((csv_text(&["q", "sup_sq_lower", "sup_sq_upper", "sup_sq_upper_float", "inverse_q", "holds"], table)?, ok));
    }
    let doc = json!({
        "kind": f.kind().name(),
        "generator": generator,
        "probe": rows,
        "certificates": certificates,
    });
    Ok((pretty(&doc), ok))
}

fn cmd_fourier(cfg: &RunConfig, format: Format, extra: Extra) -> std::result::Result<(String, bool), Failure> {
    let Extra::Fourier { coords } = extra else { unreachable!() };
    let k = cfg.k_or(12)?;
    let f = function(cfg, Kind::TwoSided, k)?;
    let grid = cfg.lambda_grid_or(RunConfig::default_lambda_grid())?;
    let horizons = cfg.horizon_list()?.unwrap_or_else(|| vec![rational::int(1024)]);
    let mut decay = Vec::new();
    for lambda in &grid {
        decay.extend(coeff_decay_series(&f, lambda, &horizons)?);
    }
    if format == Format::Csv {
        let rows = decay
            .iter()
            .map(|r| vec![r.lambda.to_string(), rational::to_pq(&r.horizon), format!("{:.17e}", r.norm_upper)])
            .collect();
        return Ok((csv_text(&["lambda", "T", "norm_upper"], rows)?, true));
    }
    let parseval = horizons.iter().map(|t| parseval_defect(&f, &grid, t)).collect::<Result<Vec<_>>>()?;
    let mut doc = json!({ "kind": f.kind().name(), "decay": decay, "parseval": parseval });
    if coords {
        let mut all = Vec::new();
        for lambda in &grid {
            for t in &horizons {
                all.push(fourier_coeff(&f, lambda, t)?);
            }
        }
        doc["coefficients"] = json!(all);
    }
    Ok((pretty(&doc), true))
}

fn cmd_report(cfg: &RunConfig, format: Format) -> std::result::Result<(String, bool), Failure> {
    let defaults = ReportOptions::default();
    let opts = ReportOptions {
        rule: cfg.rule()?,
        k: cfg.k_or(defaults.k)?,
        q_list: cfg.q_list_or(&defaults.q_list)?,
        lambda_grid: cfg.lambda_grid_or(defaults.lambda_grid.clone())?,
        seed: cfg.seed.unwrap_or(defaults.seed),
    };
    let report = run_report(&opts)?;
    for c in &report.claims {
        let tag = if c.status == Status::Pass { "PASS" } else { "FAIL" };
        eprintln!("{tag} {:<26} {}", c.id, c.statement);
        if let Some(n) = &c.note {
            eprintln!("     note: {n}");
        }
    }
    eprintln!("{} passed, {} failed", report.passed, report.failed);
    let body = if format == Format::Csv {
        let rows = report
            .claims
            .iter()
            .flat_map(|c| {
                let status = if c.status == Status::Pass { "PASS" } else { "FAIL" };
                let mut rows: Vec<Vec<String>> = c
                    .values
                    .iter()
                    .map(|v| vec![c.id.clone(), status.into(), v.name.clone(), v.exact.clone(), v.decimal.clone()])
                    .collect();
                if rows.is_empty() {
                    rows.push(vec![c.id.clone(), status.into(), String::new(), String::new(), String::new()]);
                }
                rows
            })
            .collect();
        csv_text(&["id", "status", "name", "exact", "decimal"], rows)?
    } else {
        report.to_json()
    };
    Ok((body, report.all_pass()))
}
