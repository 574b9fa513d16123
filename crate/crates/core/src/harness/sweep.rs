//! Sweep execution and CSV/JSON reporting.

use std::io::Write;
use std::time::Instant;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Quantity, WeightSpec};
use crate::bounds::{self, BoundId, BoundResult, DkInputs, Reduction, Target};
use crate::counting::incidence::{energy_configuration, incidence_count};
use crate::counting::{additive_energy, dk_times, n_count, CountOptions, Method, Variant};
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::sets::{build_set, Provenance, ResidueSet, SparsePoly};
use crate::sums::{fourier_l1, mordell_sum, multilinear_sum, reduction_inner_sum, weyl_gap_sum, DensePoly, Weights};

/// Column order of the CSV report.
pub const CSV_COLUMNS: [&str; 12] = [
    "p",
    "quantity",
    "descriptors",
    "exact_value",
    "main_term",
    "bound_id",
    "bound_value",
    "case_label",
    "ratio",
    "hypotheses_ok",
    "seed",
    "runtime_ms",
];

/// One report line. Numeric cells are pre-rendered so exact integers keep
/// every digit; empty strings mean "not defined".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub p: u64,
    pub quantity: String,
    pub descriptors: String,
    pub exact_value: String,
    pub main_term: String,
    pub bound_id: String,
    pub bound_value: String,
    pub case_label: String,
    pub ratio: String,
    pub hypotheses_ok: String,
    pub seed: u64,
    pub runtime_ms: u64,
}

impl ReportRow {
    pub fn is_skipped(&self) -> bool {
        self.case_label.starts_with("skipped(")
    }

    pub fn ratio_value(&self) -> Option<f64> {
        self.ratio.parse().ok()
    }
}

/// Renders a float in plain decimal (`f64`'s `Display` never uses an
/// exponent).
fn num(x: f64) -> String {
    format!("{x}")
}

/// The measured side of a row group.
struct Measured {
    exact: String,
    exact_f64: f64,
    main_term: Option<f64>,
}

struct Group<'a> {
    ctx: FieldContext,
    config: &'a ExperimentConfig,
    sets: Vec<ResidueSet>,
    descriptors: String,
    poly: Option<&'a str>,
}

fn count_options(config: &ExperimentConfig) -> CountOptions {
    CountOptions {
        method: Method::Convolution(config.engine),
        brute_budget: config.budget,
        ..CountOptions::default()
    }
}

fn weights(config: &ExperimentConfig) -> Weights {
    match config.weights {
        WeightSpec::Unit => Weights::Unit,
        WeightSpec::Random(seed) => Weights::SeededRandom(seed),
    }
}

fn sizes(sets: &[ResidueSet]) -> Vec<f64> {
    sets.iter().map(|s| s.len() as f64).collect()
}

fn sorted_desc(mut xs: Vec<f64>) -> Vec<f64> {
    xs.sort_by(|a, b| b.partial_cmp(a).expect("finite sizes"));
    xs
}

/// The single set behind a `D_k` row, if all sets coincide.
fn common_set(sets: &[ResidueSet]) -> Option<&ResidueSet> {
    sets.windows(2).all(|w| w[0].elements() == w[1].elements()).then(|| &sets[0])
}

fn dk_sets(sets: &[ResidueSet], k: u32) -> Vec<ResidueSet> {
    match common_set(sets) {
        Some(a) => vec![a.clone(); k as usize],
        None => sets.to_vec(),
    }
}

fn gap_rank(set: &ResidueSet) -> Option<(u32, bool)> {
    match set.provenance() {
        Provenance::Gap(spec) => Some((spec.rank() as u32, set.len() as u64 == spec.volume())),
        Provenance::Interval { .. } => Some((1, true)),
        _ => None,
    }
}

impl Group<'_> {
    fn measure(&self) -> Result<Measured> {
        let ctx = &self.ctx;
        let cfg = self.config;
        let plain = |v: f64| Measured {
            exact: num(v),
            exact_f64: v,
            main_term: None,
        };
        match cfg.quantity {
            Quantity::MultilinearSum => {
                let s = multilinear_sum(ctx, &self.sets, &weights(cfg), cfg.budget)?;
                Ok(plain(s.modulus))
            }
            Quantity::Mordell => {
                let poly: SparsePoly = self.poly.expect("mordell row has a poly").parse()?;
                Ok(plain(mordell_sum(ctx, &poly, cfg.chi)?.modulus))
            }
            Quantity::WeylGap => {
                let poly: DensePoly = self.poly.expect("weyl-gap row has a poly").parse()?;
                let spec = match self.sets[0].provenance() {
                    Provenance::Gap(spec) => spec.clone(),
                    _ => unreachable!("validated"),
                };
                Ok(plain(weyl_gap_sum(ctx, &spec, &poly)?.sum.modulus))
            }
            Quantity::Dk => {
                let sets = dk_sets(&self.sets, cfg.k);
                let value = dk_times(ctx, &sets, cfg.variant, &count_options(cfg))?;
                let main = match (cfg.variant, common_set(&self.sets)) {
                    (Variant::Full, Some(a)) => Some((a.len() as f64).powi(4 * cfg.k as i32) / ctx.p() as f64),
                    _ => None,
                };
                Ok(Measured {
                    exact: value.to_string(),
                    exact_f64: value.to_f64(),
                    main_term: main,
                })
            }
            Quantity::Energy => {
                let e = additive_energy(ctx, &self.sets[0])?;
                Ok(Measured {
                    exact: e.to_string(),
                    exact_f64: e.to_f64().unwrap_or(f64::INFINITY),
                    main_term: None,
                })
            }
            Quantity::NCount => {
                let n = n_count(ctx, &self.sets[0], &self.sets[1], &self.sets[2])?;
                Ok(Measured {
                    exact: n.to_string(),
                    exact_f64: n.to_f64().unwrap_or(f64::INFINITY),
                    main_term: None,
                })
            }
            Quantity::Incidences => {
                let (points, planes) = energy_configuration(ctx, &self.sets[0], &self.sets[1], &self.sets[2])?;
                let report = incidence_count(ctx, &points, &planes)?;
                Ok(Measured {
                    exact: report.incidences.to_string(),
                    exact_f64: report.incidences as f64,
                    main_term: None,
                })
            }
            Quantity::FourierL1 => Ok(plain(fourier_l1(ctx, &self.sets[0])?.0)),
        }
    }

    /// Evaluates `id` and returns it with the ratio rule for this pairing.
    fn bound(&self, id: BoundId, measured: &Measured) -> Result<(BoundResult, Option<f64>)> {
        let ctx = &self.ctx;
        let cfg = self.config;
        let p = ctx.p() as f64;
        let s = sizes(&self.sets);
        let n = s.len();
        let exact = measured.exact_f64;
        let simple = |b: BoundResult| {
            let r = (b.value > 0.0 && b.value.is_finite()).then(|| exact / b.value);
            (b, r)
        };
        let powered = |b: BoundResult, power: u32| {
            let r = (b.value > 0.0 && b.value.is_finite()).then(|| exact.powi(power as i32) / b.value);
            (b, r)
        };
        match id {
            BoundId::Vinogradov => {
                if n != 2 {
                    return Err(Error::InvalidArgument("vinogradov needs exactly two sets".into()));
                }
                Ok(simple(bounds::vinogradov_bound(p, s[0], s[1])?))
            }
            BoundId::Thm11 => Ok(simple(bounds::thm_multlin2_bound(p, &sorted_desc(s), cfg.threshold)?)),
            BoundId::Thm12 => Ok(simple(bounds::thm_multlin3_bound(p, &sorted_desc(s))?)),
            BoundId::Lemma34 => Ok(simple(bounds::subgroup_multilinear_bound(p, &sorted_desc(s))?)),
            BoundId::Lemma21 => {
                let inner = reduction_inner_sum(ctx, &self.sets, &count_options(cfg))?;
                let b = bounds::reduction_rhs(p, &s, &[inner], Reduction::InnerSum)?;
                Ok(powered(b, Reduction::InnerSum.power(n)))
            }
            BoundId::Lemma25 => {
                if n < 2 {
                    return Err(Error::InvalidArgument("lemma-2.5 needs at least two sets".into()));
                }
                let mut order: Vec<&ResidueSet> = self.sets.iter().collect();
                order.sort_by_key(|x| std::cmp::Reverse(x.len()));
                let measured_d = order[..n - 1]
                    .iter()
                    .map(|x| {
                        let copies = vec![(*x).clone(); n - 1];
                        dk_times(ctx, &copies, Variant::Star, &count_options(cfg)).map(|v| v.to_f64())
                    })
                    .collect::<Result<Vec<f64>>>()?;
                let sorted: Vec<f64> = order.iter().map(|x| x.len() as f64).collect();
                let b = bounds::reduction_rhs(p, &sorted, &measured_d, Reduction::DStar)?;
                Ok(powered(b, Reduction::DStar.power(n)))
            }
            BoundId::Lemma26 => {
                let measured_d = self
                    .sets
                    .iter()
                    .map(|x| {
                        let copies = vec![x.clone(); n];
                        dk_times(ctx, &copies, Variant::Tilde, &count_options(cfg)).map(|v| v.to_f64().max(0.0))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                let b = bounds::reduction_rhs(p, &s, &measured_d, Reduction::DTilde)?;
                Ok(powered(b, Reduction::DTilde.power(n)))
            }
            BoundId::Thm13 => {
                let poly: SparsePoly = self.poly.expect("mordell row has a poly").parse()?;
                Ok(simple(bounds::multinomial_bound(ctx.p(), &poly.exponents())?))
            }
            BoundId::Weil => {
                let poly: SparsePoly = self.poly.expect("mordell row has a poly").parse()?;
                Ok(simple(bounds::weil_bound(p, &poly)?))
            }
            BoundId::Dk(regime) => {
                let a = common_set(&self.sets)
                    .ok_or_else(|| Error::InvalidArgument("D_k bounds need a single set".into()))?;
                let size = a.len() as f64;
                let mut inputs = DkInputs::default();
                if regime.uses_energy() {
                    inputs.energy = additive_energy(ctx, a)?.to_f64();
                }
                if regime.needs_previous() {
                    if cfg.k < 2 {
                        return Err(Error::InvalidArgument("recursion regimes need k >= 2".into()));
                    }
                    let prev = dk_times(ctx, &vec![a.clone(); cfg.k as usize - 1], Variant::Full, &count_options(cfg))?;
                    inputs.previous = Some(prev.to_f64());
                }
                let b = bounds::dk_error_bound(p, size, cfg.k, regime, inputs)?;
                let undefined = regime.uses_log() && size < 2.0;
                let numerator = match b.target {
                    Target::Error => (exact - b.main_term.unwrap_or(0.0)).abs(),
                    Target::Total => exact,
                };
                let r = (!undefined && b.value > 0.0 && b.value.is_finite()).then(|| numerator / b.value);
                Ok((b, r))
            }
            BoundId::NCount => Ok(simple(bounds::n_bound(p, s[0], s[1], s[2], false)?)),
            BoundId::NCountSubgroup => Ok(simple(bounds::n_bound(p, s[0], s[1], s[2], true)?)),
            BoundId::Rudnev => {
                let (points, planes) = energy_configuration(ctx, &self.sets[0], &self.sets[1], &self.sets[2])?;
                let report = incidence_count(ctx, &points, &planes)?;
                Ok(simple(bounds::rudnev_bound(
                    points.len() as f64,
                    planes.len() as f64,
                    report.max_collinear as f64,
                    p,
                )?))
            }
            BoundId::GapL1 => {
                let (rank, proper) = gap_rank(&self.sets[0])
                    .ok_or_else(|| Error::InvalidArgument("gap-l1 needs a GAP or interval".into()))?;
                Ok(simple(bounds::gap_l1_bound(p, rank, proper)?))
            }
        }
    }
}

fn skipped(base: &ReportRow, bound_id: String, reason: &Error, runtime_ms: u64) -> ReportRow {
    ReportRow {
        bound_id,
        case_label: format!("skipped({reason})"),
        runtime_ms,
        ..base.clone()
    }
}

/// Row groups in config order: prime-major, then descriptor tuple (or
/// polynomial for Mordell sums).
fn group_keys(config: &ExperimentConfig) -> Vec<(u64, usize)> {
    let count = match config.quantity {
        Quantity::Mordell => config.polys.len(),
        _ => config.set_tuples.len(),
    };
    config
        .primes
        .iter()
        .flat_map(|&p| (0..count).map(move |i| (p, i)))
        .collect()
}

fn describe(config: &ExperimentConfig, index: usize) -> String {
    match config.quantity {
        Quantity::Mordell => format!("poly:{}", config.polys[index]),
        _ => {
            let parts: Vec<String> = config.set_tuples[index].iter().map(|d| d.to_string()).collect();
            let joined = parts.join(" | ");
            match config.quantity {
                Quantity::WeylGap => format!("{joined} ; poly:{}", config.polys[0]),
                _ => joined,
            }
        }
    }
}

fn run_group(config: &ExperimentConfig, p: u64, index: usize) -> Vec<ReportRow> {
    let start = Instant::now();
    let seed = match config.weights {
        WeightSpec::Random(seed) => seed,
        WeightSpec::Unit => config.seed,
    };
    let base = ReportRow {
        p,
        quantity: config.quantity.to_string(),
        descriptors: describe(config, index),
        exact_value: String::new(),
        main_term: String::new(),
        bound_id: String::new(),
        bound_value: String::new(),
        case_label: String::new(),
        ratio: String::new(),
        hypotheses_ok: String::new(),
        seed,
        runtime_ms: 0,
    };
    let ids: Vec<Option<BoundId>> = if config.bound_ids.is_empty() {
        vec![None]
    } else {
        config.bound_ids.iter().copied().map(Some).collect()
    };
    let label = |id: Option<BoundId>| id.map(|b| b.to_string()).unwrap_or_default();
    let elapsed = |t: Instant| t.elapsed().as_millis() as u64;

    let prepared = FieldContext::new(p).and_then(|ctx| {
        let sets = match config.quantity {
            Quantity::Mordell => Vec::new(),
            _ => config.set_tuples[index]
                .iter()
                .map(|d| build_set(&ctx, d))
                .collect::<Result<Vec<_>>>()?,
        };
        let poly = match config.quantity {
            Quantity::Mordell => Some(config.polys[index].as_str()),
            Quantity::WeylGap => Some(config.polys[0].as_str()),
            _ => None,
        };
        let group = Group {
            ctx,
            config,
            sets,
            descriptors: base.descriptors.clone(),
            poly,
        };
        let measured = group.measure()?;
        Ok((group, measured))
    });
    let (group, measured) = match prepared {
        Ok(g) => g,
        Err(e) => {
            let ms = elapsed(start);
            return ids.into_iter().map(|id| skipped(&base, label(id), &e, ms)).collect();
        }
    };
    debug_assert_eq!(group.descriptors, base.descriptors);
    let measure_ms = elapsed(start);
    let filled = ReportRow {
        exact_value: measured.exact.clone(),
        main_term: measured.main_term.map(num).unwrap_or_default(),
        ..base
    };
    ids.into_iter()
        .map(|id| {
            let Some(id) = id else {
                return ReportRow {
                    runtime_ms: measure_ms,
                    ..filled.clone()
                };
            };
            let t = Instant::now();
            match group.bound(id, &measured) {
                Ok((b, ratio)) => ReportRow {
                    bound_id: id.to_string(),
                    bound_value: num(b.value),
                    main_term: b
                        .main_term
                        .filter(|_| filled.main_term.is_empty() && matches!(id, BoundId::Dk(_)))
                        .map(num)
                        .unwrap_or_else(|| filled.main_term.clone()),
                    case_label: b.case_label.clone(),
                    ratio: ratio.map(num).unwrap_or_default(),
                    hypotheses_ok: b.hypotheses_ok().to_string(),
                    runtime_ms: measure_ms + elapsed(t),
                    ..filled.clone()
                },
                Err(e) => skipped(&filled, id.to_string(), &e, measure_ms + elapsed(t)),
            }
        })
        .collect()
}

/// Runs every `(prime, tuple, bound)` combination. Rows are computed in
/// parallel and returned in config order; row-level failures become skipped
/// rows.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    config.validate()?;
    let groups = group_keys(config);
    let rows: Vec<Vec<ReportRow>> = groups
        .par_iter()
        .map(|&(p, i)| run_group(config, p, i))
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// Writes rows as RFC 4180 CSV with a header row.
pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    // An explicit header keeps the column contract visible even for zero rows.
    writer.write_record(CSV_COLUMNS)?;
    for row in rows {
        writer.write_record([
            row.p.to_string(),
            row.quantity.clone(),
            row.descriptors.clone(),
            row.exact_value.clone(),
            row.main_term.clone(),
            row.bound_id.clone(),
            row.bound_value.clone(),
            row.case_label.clone(),
            row.ratio.clone(),
            row.hypotheses_ok.clone(),
            row.seed.to_string(),
            row.runtime_ms.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[ReportRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

pub fn write_json<W: Write>(rows: &[ReportRow], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// Drops the `runtime_ms` column so two reports can be compared byte for
/// byte.
pub fn without_runtime(csv_text: &str) -> String {
    csv_text
        .lines()
        .map(|line| line.rsplit_once(',').map_or(line, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}
