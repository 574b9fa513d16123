//! `expsum`: exact counts, exponential sums, bound evaluators, sweeps and
//! verification suites over small prime fields.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use expsum_core::bounds::{self, BoundId, BoundResult, CaseThreshold, DkInputs, Reduction};
use expsum_core::counting::{Engine, Variant};
use expsum_core::harness::{
    run_sweep, verify_suite_seeded, write_csv, write_json, ExperimentConfig, Quantity, ReportRow, WeightSpec, SUITES,
};
use expsum_core::sets::{SetDescriptor, SparsePoly};

#[derive(Parser)]
#[command(name = "expsum", version, about = "Exact exponential sums and energies over prime fields")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Prime modulus; repeat or comma-separate for several.
    #[arg(long = "p", global = true, value_delimiter = ',')]
    primes: Vec<u64>,
    /// Set descriptor, e.g. `interval:1..20`, `random:30,1,zerofree`.
    #[arg(long = "set", global = true)]
    sets: Vec<SetDescriptor>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of tuples a direct sum may evaluate.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Bound ids to compare against (`count` and `sum`).
    #[arg(long = "bound", global = true, value_delimiter = ',')]
    bounds: Vec<BoundId>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Schoolbook,
    Ntt,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Schoolbook => Engine::Schoolbook,
            EngineArg::Ntt => Engine::Ntt,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ThresholdArg {
    Theorem,
    Energy,
}

impl From<ThresholdArg> for CaseThreshold {
    fn from(t: ThresholdArg) -> Self {
        match t {
            ThresholdArg::Theorem => CaseThreshold::Theorem,
            ThresholdArg::Energy => CaseThreshold::Energy,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact counts: D_k, additive energy, N(X, Y, Z), incidences.
    Count {
        #[command(subcommand)]
        what: CountKind,
    },
    /// Exponential sums.
    Sum {
        #[command(subcommand)]
        what: SumKind,
    },
    /// Evaluate one bound at given sizes.
    Bound(BoundArgs),
    /// Run a sweep described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a verification suite (`all` runs every suite).
    Verify {
        #[arg(long)]
        suite: String,
    },
}

#[derive(Subcommand)]
enum CountKind {
    /// D_k^x of one set (k copies) or of k sets.
    Dk {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value = "full")]
        variant: Variant,
        #[arg(long, value_enum, default_value_t = EngineArg::Schoolbook)]
        engine: EngineArg,
    },
    /// Additive energy E+(A).
    Energy,
    /// N(X, Y, Z) from three sets.
    Ncount,
    /// Point-plane incidences of the energy configuration of A, Y, Z.
    Incidences,
}

#[derive(Subcommand)]
enum SumKind {
    /// Weighted multilinear sum over the given sets.
    Multilinear {
        /// `unit` or `random(SEED)`.
        #[arg(long, default_value = "unit")]
        weights: WeightSpec,
        #[arg(long, value_enum, default_value_t = ThresholdArg::Theorem)]
        threshold: ThresholdArg,
    },
    /// sum_x chi(x) e_p(Psi(x)) for a sparse polynomial `a1:k1,a2:k2,...`.
    Mordell {
        #[arg(long = "poly", required = true)]
        polys: Vec<String>,
        #[arg(long, default_value_t = 0)]
        chi: u64,
    },
    /// Weyl sum over a `gap:` set for a dense polynomial `b0,b1,...`.
    WeylGap {
        #[arg(long)]
        poly: String,
    },
    /// Fourier l1 norm of a set.
    Fourier,
}

#[derive(Args)]
struct BoundArgs {
    /// Bound id, e.g. `thm-1.1`, `dk:sharp`, `weil`.
    id: BoundId,
    /// Sizes. Multilinear bounds: |X_i|; dk: |A|; n-count: |X|,|Y|,|Z|;
    /// rudnev: |P|,|Pi|,k.
    #[arg(long = "size", value_delimiter = ',')]
    sizes: Vec<f64>,
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Sparse polynomial for `weil` and `thm-1.3`.
    #[arg(long)]
    poly: Option<String>,
    /// GAP rank for `gap-l1`.
    #[arg(long, default_value_t = 1)]
    rank: u32,
    /// Treat the GAP as improper for `gap-l1`.
    #[arg(long)]
    improper: bool,
    /// Measured E+(A) for energy regimes.
    #[arg(long)]
    energy: Option<f64>,
    /// Measured D_{k-1} for recursion regimes.
    #[arg(long)]
    previous: Option<f64>,
    /// Measured inputs of the reduction lemmas.
    #[arg(long, value_delimiter = ',')]
    measured: Vec<f64>,
    #[arg(long, value_enum, default_value_t = ThresholdArg::Theorem)]
    threshold: ThresholdArg,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_rows(rows: &[ReportRow], format: Format, path: Option<&Path>) -> Result<()> {
    let out = output(path)?;
    match format {
        Format::Csv => write_csv(rows, out)?,
        Format::Json => write_json(rows, out)?,
    }
    Ok(())
}

fn base_config(global: &Global, quantity: Quantity, bounds: Vec<BoundId>) -> Result<ExperimentConfig> {
    if global.primes.is_empty() {
        bail!("--p is required");
    }
    let mut config = ExperimentConfig::new(quantity, global.primes.clone());
    if !global.sets.is_empty() {
        config.set_tuples = vec![global.sets.clone()];
    }
    config.bound_ids = bounds;
    config.seed = global.seed;
    if let Some(budget) = global.budget {
        config.budget = budget;
    }
    Ok(config)
}

fn count_config(global: &Global, what: &CountKind, bounds: Vec<BoundId>) -> Result<ExperimentConfig> {
    let quantity = match what {
        CountKind::Dk { .. } => Quantity::Dk,
        CountKind::Energy => Quantity::Energy,
        CountKind::Ncount => Quantity::NCount,
        CountKind::Incidences => Quantity::Incidences,
    };
    let mut config = base_config(global, quantity, bounds)?;
    if let CountKind::Dk { k, variant, engine } = what {
        config.k = *k;
        config.variant = *variant;
        config.engine = (*engine).into();
    }
    Ok(config)
}

fn sum_config(global: &Global, what: &SumKind, bounds: Vec<BoundId>) -> Result<ExperimentConfig> {
    let quantity = match what {
        SumKind::Multilinear { .. } => Quantity::MultilinearSum,
        SumKind::Mordell { .. } => Quantity::Mordell,
        SumKind::WeylGap { .. } => Quantity::WeylGap,
        SumKind::Fourier => Quantity::FourierL1,
    };
    let mut config = base_config(global, quantity, bounds)?;
    match what {
        SumKind::Multilinear { weights, threshold } => {
            config.weights = *weights;
            config.threshold = (*threshold).into();
        }
        SumKind::Mordell { polys, chi } => {
            config.polys = polys.clone();
            config.chi = *chi;
        }
        SumKind::WeylGap { poly } => config.polys = vec![poly.clone()],
        SumKind::Fourier => {}
    }
    Ok(config)
}

fn need(sizes: &[f64], n: usize, id: BoundId) -> Result<()> {
    if sizes.len() != n {
        bail!("`{id}` needs exactly {n} values in --size, got {}", sizes.len());
    }
    Ok(())
}

fn evaluate_bound(p: f64, args: &BoundArgs) -> Result<BoundResult> {
    let s = &args.sizes;
    let id = args.id;
    let mut sorted = s.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let poly = || -> Result<SparsePoly> {
        let text = args.poly.as_deref().context("this bound needs --poly")?;
        Ok(text.parse()?)
    };
    let result = match id {
        BoundId::Vinogradov => {
            need(s, 2, id)?;
            bounds::vinogradov_bound(p, s[0], s[1])?
        }
        BoundId::Thm11 => bounds::thm_multlin2_bound(p, &sorted, args.threshold.into())?,
        BoundId::Thm12 => bounds::thm_multlin3_bound(p, &sorted)?,
        BoundId::Thm13 => bounds::multinomial_bound(p as u64, &poly()?.exponents())?,
        BoundId::Lemma21 => bounds::reduction_rhs(p, s, &args.measured, Reduction::InnerSum)?,
        BoundId::Lemma25 => bounds::reduction_rhs(p, &sorted, &args.measured, Reduction::DStar)?,
        BoundId::Lemma26 => bounds::reduction_rhs(p, s, &args.measured, Reduction::DTilde)?,
        BoundId::Dk(regime) => {
            need(s, 1, id)?;
            let inputs = DkInputs {
                energy: args.energy,
                previous: args.previous,
            };
            bounds::dk_error_bound(p, s[0], args.k, regime, inputs)?
        }
        BoundId::NCount | BoundId::NCountSubgroup => {
            need(s, 3, id)?;
            bounds::n_bound(p, s[0], s[1], s[2], id == BoundId::NCountSubgroup)?
        }
        BoundId::Lemma34 => bounds::subgroup_multilinear_bound(p, &sorted)?,
        BoundId::Rudnev => {
            need(s, 3, id)?;
            bounds::rudnev_bound(s[0], s[1], s[2], p)?
        }
        BoundId::Weil => bounds::weil_bound(p, &poly()?)?,
        BoundId::GapL1 => bounds::gap_l1_bound(p, args.rank, !args.improper)?,
    };
    Ok(result)
}

/// JSON for one bound, with exact exponents rendered as `a/b`.
fn bound_json(p: u64, id: BoundId, b: &BoundResult) -> Result<serde_json::Value> {
    let mut result = serde_json::to_value(b)?;
    if let Some(e) = &b.exponents {
        result["exponents"] = serde_json::json!({
            "p_exponent": e.p_exponent.to_string(),
            "x_exponent": e.x_exponent.to_string(),
            "deficit": e.deficit.to_string(),
        });
    }
    Ok(serde_json::json!({ "p": p, "bound_id": id.to_string(), "result": result }))
}

fn run_bound(global: &Global, args: &BoundArgs) -> Result<()> {
    if global.primes.is_empty() {
        bail!("--p is required");
    }
    let results: Vec<(u64, BoundResult)> = global
        .primes
        .iter()
        .map(|&p| evaluate_bound(p as f64, args).map(|b| (p, b)))
        .collect::<Result<_>>()?;
    let mut out = output(global.out.as_deref())?;
    match global.format {
        Format::Json => {
            let list: Vec<serde_json::Value> = results
                .iter()
                .map(|(p, b)| bound_json(*p, args.id, b))
                .collect::<Result<_>>()?;
            serde_json::to_writer_pretty(&mut out, &list)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "p,bound_id,bound_value,case_label,hypotheses_ok")?;
            for (p, b) in &results {
                writeln!(out, "{p},{},{},{},{}", args.id, b.value, b.case_label, b.hypotheses_ok())?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn run_verify(global: &Global, suite: &str) -> Result<bool> {
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let reports = names
        .iter()
        .map(|name| verify_suite_seeded(name, global.seed))
        .collect::<expsum_core::Result<Vec<_>>>()?;
    let mut out = output(global.out.as_deref())?;
    match global.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &reports)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "suite,instances,failures,discrepancies,passed")?;
            for r in &reports {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.name,
                    r.instances,
                    r.failures.len(),
                    r.discrepancies.len(),
                    r.passed()
                )?;
            }
        }
    }
    out.flush()?;
    for r in &reports {
        for f in &r.failures {
            eprintln!("{}: counterexample: {f}", r.name);
        }
        for d in &r.discrepancies {
            eprintln!("{}: discrepancy: {d}", r.name);
        }
    }
    Ok(reports.iter().all(|r| r.passed()))
}

fn run(cli: Cli) -> Result<bool> {
    let global = &cli.global;
    match cli.command {
        Command::Count { what } => {
            let config = count_config(global, &what, global.bounds.clone())?;
            emit_rows(&run_sweep(&config)?, global.format, global.out.as_deref())?;
        }
        Command::Sum { what } => {
            let config = sum_config(global, &what, global.bounds.clone())?;
            emit_rows(&run_sweep(&config)?, global.format, global.out.as_deref())?;
        }
        Command::Bound(args) => run_bound(global, &args)?,
        Command::Sweep { config } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("cannot read {}", config.display()))?;
            let mut parsed: ExperimentConfig = text.parse()?;
            if let Some(budget) = global.budget {
                parsed.budget = budget;
            }
            let rows = run_sweep(&parsed)?;
            let path = global.out.clone().or(parsed.output.clone());
            emit_rows(&rows, global.format, path.as_deref())?;
        }
        Command::Verify { suite } => return run_verify(global, &suite),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
