//! Command-line front end: single-point certification, exhaustive sweeps,
//! and the operator-identity suite, with JSON/CSV report emission.
//!
//! Exit codes: 0 on success (confirmed or no-claim), 2 if any certificate
//! reports a violation of the sufficiency theorem, 1 on input errors.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use parverma::chevalley::ChevalleyBasis;
use parverma::gfield::Field;
use parverma::induce::{
    certify, has_parallel, run_identity_suite, sweep_certify, Certificate, TheoremStatus,
};
use parverma::pbw::PChar;
use parverma::report::{
    build_report, parse_chi_spec, parse_lambda, render_chi_spec, render_csv, render_identities,
    render_json, RunConfig,
};
use parverma::rootsys::{parabolic, parse_series, ParabolicData, RootSystem, Weight};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "parverma",
    version,
    about = "Certifies simplicity of parabolically induced modules over reduced enveloping algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certify a single weight.
    Certify(RunArgs),
    /// Certify every compatible restricted weight (or an explicit list).
    Sweep(RunArgs),
    /// Run the operator-identity suite for a configuration.
    Identities(RunArgs),
    /// Dump the structure-constant table as CSV for audit.
    Constants(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Root system type, e.g. A2, B2 (or a bare letter with --rank).
    #[arg(long = "type")]
    type_label: String,

    /// Rank, when not part of --type.
    #[arg(long)]
    rank: Option<usize>,

    /// Characteristic (a good prime for the type).
    #[arg(long)]
    p: u64,

    /// Field extension degree m (defaults to 1, upgraded automatically when
    /// chi has nonzero semisimple part).
    #[arg(long = "ext-degree")]
    ext_degree: Option<usize>,

    /// Parabolic subset I as comma-separated 1-based simple-root indices;
    /// empty for the Borel case.
    #[arg(long, default_value = "")]
    levi: String,

    /// p-character: `zero`, `levi:J=1,2`, or explicit `f[a1]=1;h1=2`.
    #[arg(long, default_value = "zero")]
    chi: String,

    /// Weight as comma-separated values on the simple coroots (certify only).
    #[arg(long)]
    lambda: Option<String>,

    /// Explicit sweep list: semicolon-separated weights, e.g. "2,2;0,1"
    /// (sweep only; default is every compatible restricted weight).
    #[arg(long = "sweep")]
    sweep_list: Option<String>,

    /// Seed for the irreducibility test.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Seed for the maximal-submodule chop order.
    #[arg(long = "chop-seed", default_value_t = 0)]
    chop_seed: u64,

    /// Re-run with a second chop seed and report verdict disagreements.
    #[arg(long = "recheck-chop-seed")]
    recheck_chop_seed: Option<u64>,

    /// Worker threads for sweeps (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,

    /// Output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Report format.
    #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
    format: String,

    /// Include wall-clock timings (breaks byte-for-byte determinism).
    #[arg(long, default_value_t = false)]
    timings: bool,

    /// Include reducibility witnesses (row-echelon bases) in JSON reports.
    #[arg(long = "emit-witnesses", default_value_t = false)]
    emit_witnesses: bool,
}

struct Resolved {
    field: Field,
    cb: ChevalleyBasis,
    par: ParabolicData,
    chi: PChar,
    config: RunConfig,
}

fn resolve(args: &RunArgs, sweep: bool) -> Result<Resolved> {
    let (series, rank_in_label) =
        parse_series(&args.type_label).ok_or_else(|| anyhow!("unrecognized type '{}'", args.type_label))?;
    let rank = match (rank_in_label, args.rank) {
        (Some(r), None) => r,
        (None, Some(r)) => r,
        (Some(a), Some(b)) if a == b => a,
        (Some(a), Some(b)) => bail!("--type gives rank {a} but --rank says {b}"),
        (None, None) => bail!("rank missing: use --type A2 or --rank"),
    };
    let rs = RootSystem::build(series, rank)?;

    // probe chi on a prime field to decide the extension degree
    let probe_field = Field::new(args.p, 1)?;
    let probe_chi = parse_chi_spec(&probe_field, &rs, &args.chi)?;
    let needs_extension = !probe_chi.h_vals.iter().all(|v| probe_field.is_zero(v));
    let m = match args.ext_degree {
        Some(m) => m,
        None if needs_extension => args.p as usize,
        None => 1,
    };
    let field = Field::new(args.p, m)?;
    let chi = parse_chi_spec(&field, &rs, &args.chi)?;
    let cb = ChevalleyBasis::build(&rs, &field)?;

    let levi_indices: Vec<usize> = if args.levi.trim().is_empty() {
        Vec::new()
    } else {
        args.levi
            .split(',')
            .map(|s| {
                let idx: usize = s
                    .trim()
                    .parse()
                    .with_context(|| format!("bad levi index '{s}'"))?;
                if idx == 0 || idx > rank {
                    bail!("levi index {idx} out of range 1..={rank}");
                }
                Ok(idx - 1)
            })
            .collect::<Result<_>>()?
    };
    let par = parabolic(&rs, &levi_indices)?;

    let lambda_cfg = match (&args.lambda, &args.sweep_list) {
        (Some(s), _) => Some(
            parse_lambda(&field, rank, s)?
                .iter()
                .map(|v| field.display(v))
                .collect(),
        ),
        (None, Some(list)) => {
            let mut rendered = Vec::new();
            for part in list.split(';') {
                let vals = parse_lambda(&field, rank, part.trim())?;
                let strs: Vec<String> = vals.iter().map(|v| field.display(v)).collect();
                rendered.push(strs.join(","));
            }
            Some(rendered)
        }
        (None, None) => None,
    };
    let config = RunConfig {
        type_label: format!("{}{}", series.letter(), rank),
        p: args.p,
        m,
        levi: par.levi.iter().map(|&i| i + 1).collect(),
        chi: render_chi_spec(&field, &rs, &chi),
        lambda: lambda_cfg,
        sweep,
        seed: args.seed,
        chop_seed: args.chop_seed,
    };
    Ok(Resolved {
        field,
        cb,
        par,
        chi,
        config,
    })
}

fn emit(args: &RunArgs, text: &str) -> Result<()> {
    match &args.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            f.write_all(text.as_bytes())?;
        }
        None => {
            print!("{text}");
        }
    }
    Ok(())
}

fn certificates_report(
    args: &RunArgs,
    resolved: &Resolved,
    certs: &[Certificate],
    wall_ms: Option<u64>,
    disagreements: Vec<Vec<String>>,
) -> Result<String> {
    let mut report = build_report(
        &resolved.field,
        resolved.config.clone(),
        certs,
        args.emit_witnesses && args.format == "json",
        wall_ms,
    )
    .map_err(|e| anyhow!("{e}"))?;
    if !disagreements.is_empty() {
        report.chop_disagreements = Some(disagreements);
    }
    Ok(match args.format.as_str() {
        "csv" => render_csv(&report),
        _ => render_json(&report),
    })
}

fn chop_disagreements(
    resolved: &Resolved,
    base: &[Certificate],
    recheck: &[Certificate],
) -> Vec<Vec<String>> {
    let field = &resolved.field;
    base.iter()
        .zip(recheck.iter())
        .filter(|(a, b)| a.simple != b.simple || a.status != b.status)
        .map(|(a, _)| a.lambda.iter().map(|v| field.display(v)).collect())
        .collect()
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Certify(args) => {
            let resolved = resolve(&args, false)?;
            let lambda_str = args
                .lambda
                .as_deref()
                .ok_or_else(|| anyhow!("certify requires --lambda"))?;
            let values = parse_lambda(&resolved.field, resolved.par.rs.rank, lambda_str)?;
            let lambda = Weight::new(values);
            let started = Instant::now();
            let cert = certify(
                &resolved.cb,
                &resolved.par,
                &resolved.chi,
                &lambda,
                args.seed,
                args.chop_seed,
            )?;
            let mut disagreements = Vec::new();
            if let Some(seed2) = args.recheck_chop_seed {
                let again = certify(
                    &resolved.cb,
                    &resolved.par,
                    &resolved.chi,
                    &lambda,
                    args.seed,
                    seed2,
                )?;
                disagreements =
                    chop_disagreements(&resolved, std::slice::from_ref(&cert), &[again]);
            }
            let wall = args.timings.then(|| started.elapsed().as_millis() as u64);
            let violation = cert.status == TheoremStatus::Violation;
            let text = certificates_report(&args, &resolved, &[cert], wall, disagreements)?;
            emit(&args, &text)?;
            Ok(if violation { 2 } else { 0 })
        }
        Cmd::Sweep(args) => {
            let resolved = resolve(&args, true)?;
            let started = Instant::now();
            let explicit = match &args.sweep_list {
                Some(list) => {
                    let mut weights = Vec::new();
                    for part in list.split(';') {
                        let vals =
                            parse_lambda(&resolved.field, resolved.par.rs.rank, part.trim())?;
                        weights.push(Weight::new(vals));
                    }
                    // deterministic lambda-lexicographic merge order
                    weights.sort_by_key(|w| {
                        w.values
                            .iter()
                            .map(|v| resolved.field.element_index(v))
                            .collect::<Vec<_>>()
                    });
                    weights.dedup();
                    Some(weights)
                }
                None => None,
            };
            let do_sweep = || -> anyhow::Result<Vec<Certificate>> {
                match &explicit {
                    Some(weights) => weights
                        .iter()
                        .map(|lam| {
                            certify(
                                &resolved.cb,
                                &resolved.par,
                                &resolved.chi,
                                lam,
                                args.seed,
                                args.chop_seed,
                            )
                            .map_err(Into::into)
                        })
                        .collect(),
                    None => sweep_certify(
                        &resolved.cb,
                        &resolved.par,
                        &resolved.chi,
                        args.seed,
                        args.chop_seed,
                    )
                    .map_err(Into::into),
                }
            };
            let certs = match args.workers {
                Some(w) if w > 0 && has_parallel() => with_pool(w, do_sweep)??,
                _ => do_sweep()?,
            };
            if certs.is_empty() {
                bail!("no weight is compatible with chi over F_{{{}^{}}}; raise --ext-degree", resolved.config.p, resolved.config.m);
            }
            let mut disagreements = Vec::new();
            if let Some(seed2) = args.recheck_chop_seed {
                let again: Vec<Certificate> = match &explicit {
                    Some(weights) => weights
                        .iter()
                        .map(|lam| {
                            certify(
                                &resolved.cb,
                                &resolved.par,
                                &resolved.chi,
                                lam,
                                args.seed,
                                seed2,
                            )
                        })
                        .collect::<Result<_, _>>()?,
                    None => sweep_certify(
                        &resolved.cb,
                        &resolved.par,
                        &resolved.chi,
                        args.seed,
                        seed2,
                    )?,
                };
                disagreements = chop_disagreements(&resolved, &certs, &again);
            }
            let wall = args.timings.then(|| started.elapsed().as_millis() as u64);
            let violation = certs.iter().any(|c| c.status == TheoremStatus::Violation);
            let text = certificates_report(&args, &resolved, &certs, wall, disagreements)?;
            emit(&args, &text)?;
            Ok(if violation { 2 } else { 0 })
        }
        Cmd::Identities(args) => {
            let resolved = resolve(&args, false)?;
            let items = run_identity_suite(
                &resolved.cb,
                &resolved.par,
                &resolved.chi,
                args.chop_seed,
            );
            let text = render_identities(&items);
            emit(&args, &text)?;
            Ok(if items.iter().all(|i| i.passed) { 0 } else { 1 })
        }
        Cmd::Constants(args) => {
            let resolved = resolve(&args, false)?;
            let text = resolved.cb.dump_structure_constants_csv();
            emit(&args, &text)?;
            Ok(0)
        }
    }
}

fn with_pool<T>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T>
where
    T: Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("cannot build worker pool")?;
    Ok(pool.install(f))
}

fn main() -> ExitCode {
    // clap's own usage errors would exit with code 2, which is reserved for
    // theorem violations; remap them to 1
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { 1 } else { 0 };
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
