//! Implementations of the CLI verbs. Campaigns parallelize over samples with
//! one RNG stream per sample index, so reports are identical for any
//! `--jobs` value.

use crate::io::{self, fmt_f64, Report};
use crate::{
    BenchArgs, CheckKind, CliError, ComputeArgs, GenArgs, GenKind, SampleArgs, VerifyEofArgs,
};
use harmony_core::measures::{
    concurrence_of, disharmony_from_spectrum, disharmony_poly, harmony, harmony_bounds,
    lambda_spectrum, lambda_spectrum_hermitian, measure_report, pure_harmony,
};
use harmony_core::monogamy::pure_monogamy_residual;
use harmony_core::states::{
    bell_diagonal, bell_state, from_pure, ghz_state, nonconvexity_family, partial_trace,
    random_mixed, random_pure, w_state, BellKind, DensityMatrix, RandomSpec,
};
use harmony_core::verify::{eof_decomposition_search, DecompositionSearchConfig};
use harmony_core::{Error, Tolerances};
use rayon::prelude::*;
use std::f64::consts::LN_2;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// The `--tolerance` flag drives the three state-validation thresholds.
fn validation_tolerances(t: f64) -> Tolerances {
    Tolerances { hermiticity: t, trace: t, psd_floor: t, ..Tolerances::default() }
}

fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(j);
    }
    builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))
}

fn property_err(e: Error) -> CliError {
    CliError::Property(e.to_string())
}

// ---------------------------------------------------------------------------
// compute
// ---------------------------------------------------------------------------

const ALL_MEASURES: [&str; 6] = ["harmony", "disharmony", "concurrence", "eof", "purity", "lambda"];

pub fn compute(args: ComputeArgs) -> Result<(), CliError> {
    let tol = validation_tolerances(args.tolerance);
    let (rho, label) = io::read_state(&args.input, &tol)?;
    if rho.n_qubits() != 2 {
        return Err(CliError::Validation(format!(
            "2-qubit measure requires n_qubits=2, state has n_qubits={}",
            rho.n_qubits()
        )));
    }

    let selected: Vec<String> = match &args.measures {
        None => ALL_MEASURES.iter().map(|s| s.to_string()).collect(),
        Some(list) => {
            for m in list {
                if !ALL_MEASURES.contains(&m.as_str()) {
                    return Err(CliError::Usage(format!(
                        "unknown measure `{m}`; choose from {}",
                        ALL_MEASURES.join(", ")
                    )));
                }
            }
            list.clone()
        }
    };

    let report = measure_report(&rho).map_err(|e| CliError::Validation(e.to_string()))?;
    let entropy_scale = if args.base2 { 1.0 / LN_2 } else { 1.0 };

    let mut out = Report::new("compute");
    out.meta("input", args.input.display());
    out.meta("tolerance", fmt_f64(args.tolerance));
    out.meta("log_base", if args.base2 { "bits" } else { "nats" });

    let mut columns: Vec<&str> = vec!["label"];
    let mut cells: Vec<String> = vec![label.unwrap_or_default()];
    for measure in &selected {
        match measure.as_str() {
            "harmony" => {
                columns.extend(["harmony", "harmony_out_of_range"]);
                cells.push(fmt_f64(report.harmony));
                cells.push(report.harmony_out_of_range.to_string());
            }
            "disharmony" => {
                columns.push("disharmony");
                cells.push(fmt_f64(report.disharmony));
            }
            "concurrence" => {
                columns.push("concurrence");
                cells.push(fmt_f64(report.concurrence));
            }
            "eof" => {
                columns.push("eof");
                cells.push(fmt_f64(report.eof * entropy_scale));
            }
            "purity" => {
                columns.push("purity_a");
                cells.push(fmt_f64(report.purity_a));
            }
            "lambda" => {
                columns.extend(["lambda1", "lambda2", "lambda3", "lambda4", "route_discrepancy"]);
                for l in report.lambda.lambdas() {
                    cells.push(fmt_f64(l));
                }
                cells.push(fmt_f64(report.route_discrepancy));
            }
            _ => unreachable!("validated above"),
        }
    }
    out.header(&columns);
    out.row(cells);
    out.write(args.output.as_deref(), now_unix())
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

pub fn sample(args: SampleArgs) -> Result<(), CliError> {
    if args.n < 1 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    match args.check {
        CheckKind::Properties => {
            if args.qubits != 2 {
                return Err(CliError::Usage("--check properties requires --qubits 2".into()));
            }
            properties_campaign(&args)
        }
        CheckKind::Monogamy => {
            if args.qubits != 3 {
                return Err(CliError::Usage("--check monogamy requires --qubits 3".into()));
            }
            monogamy_campaign(&args)
        }
        CheckKind::Corollary => {
            if args.qubits != 3 {
                return Err(CliError::Usage("--check corollary requires --qubits 3".into()));
            }
            corollary_campaign(&args)
        }
    }
}

struct PropRow {
    rank: usize,
    harmony: f64,
    concurrence: f64,
    route_discrepancy: f64,
    spectrum_sum: f64,
    envelope_violation: f64,
    dominance_violation: f64,
    zero_set_mismatch: bool,
    // pure-state law deviations, rank-1 samples only
    pure_h_dev: Option<f64>,
    pure_c_dev: Option<f64>,
    pure_gamma_dev: Option<f64>,
    pure_det_dev: Option<f64>,
}

fn properties_sample(index: u64, args: &SampleArgs) -> Result<PropRow, CliError> {
    let rank = match args.rank {
        Some(r) if (1..=4).contains(&r) => r,
        Some(r) => return Err(CliError::Usage(format!("--rank {r} outside 1..=4"))),
        None => 1 + (index as usize % 4),
    };
    let spec = RandomSpec::new(args.seed, index);
    let (rho, psi) = if rank == 1 {
        let psi = random_pure(2, spec);
        (from_pure(&psi), Some(psi))
    } else {
        (random_mixed(2, rank, spec).map_err(property_err)?, None)
    };

    let d_poly = disharmony_poly(&rho).map_err(property_err)?;
    let lam = lambda_spectrum(&rho).map_err(property_err)?;
    let lam_h = lambda_spectrum_hermitian(&rho).map_err(property_err)?;
    let d_spec = disharmony_from_spectrum(&lam).map_err(property_err)?;
    let d_herm = disharmony_from_spectrum(&lam_h).map_err(property_err)?;
    let route_discrepancy = (d_poly - d_spec)
        .abs()
        .max((d_poly - d_herm).abs())
        .max((d_spec - d_herm).abs());

    let h = (-d_poly).max(0.0);
    let c = concurrence_of(&lam);
    let (lo, hi) = harmony_bounds(c).map_err(property_err)?;
    let envelope_violation = (lo - h).max(h - hi).max(0.0);
    let dominance_violation = (h - c).max(0.0);
    let zero_set_mismatch = (h <= args.tolerance) != (c <= args.tolerance);

    let (mut pure_h_dev, mut pure_c_dev, mut pure_gamma_dev, mut pure_det_dev) =
        (None, None, None, None);
    if let Some(psi) = &psi {
        let h_pure = pure_harmony(psi).map_err(property_err)?;
        pure_h_dev = Some((h - h_pure).abs());
        pure_c_dev = Some((c - h_pure.powf(0.25)).abs());
        let marginal = partial_trace(&rho, &[0]).map_err(property_err)?;
        pure_gamma_dev = Some((marginal.purity() - (1.0 - 0.5 * h_pure.sqrt())).abs());
        let det = marginal.matrix().det().re.max(0.0);
        pure_det_dev = Some((c - (4.0 * det).sqrt()).abs());
    }

    Ok(PropRow {
        rank,
        harmony: h,
        concurrence: c,
        route_discrepancy,
        spectrum_sum: lam.sum(),
        envelope_violation,
        dominance_violation,
        zero_set_mismatch,
        pure_h_dev,
        pure_c_dev,
        pure_gamma_dev,
        pure_det_dev,
    })
}

const PURE_LAW_TOL_H: f64 = 1e-10;
const PURE_LAW_TOL_C: f64 = 1e-8;
const PURE_LAW_TOL_GAMMA: f64 = 1e-10;
const PURE_LAW_TOL_DET: f64 = 1e-8;

fn properties_campaign(args: &SampleArgs) -> Result<(), CliError> {
    let pool = thread_pool(args.jobs)?;
    let rows: Result<Vec<PropRow>, CliError> = pool.install(|| {
        (0..args.n as u64)
            .into_par_iter()
            .map(|i| properties_sample(i, args))
            .collect()
    });
    let rows = rows?;

    let mut out = Report::new("sample --check properties");
    base_sample_metadata(&mut out, args);
    out.meta("pure_law_tolerances", format!(
        "h={PURE_LAW_TOL_H} c={PURE_LAW_TOL_C} gamma={PURE_LAW_TOL_GAMMA} det={PURE_LAW_TOL_DET}"
    ));
    out.header(&[
        "index",
        "rank",
        "harmony",
        "concurrence",
        "route_discrepancy",
        "spectrum_sum",
        "envelope_violation",
        "dominance_violation",
        "zero_set_mismatch",
        "pure_h_dev",
        "pure_c_dev",
        "pure_gamma_dev",
        "pure_det_dev",
    ]);

    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    for (i, row) in rows.iter().enumerate() {
        out.row(vec![
            i.to_string(),
            row.rank.to_string(),
            fmt_f64(row.harmony),
            fmt_f64(row.concurrence),
            fmt_f64(row.route_discrepancy),
            fmt_f64(row.spectrum_sum),
            fmt_f64(row.envelope_violation),
            fmt_f64(row.dominance_violation),
            (row.zero_set_mismatch as u8).to_string(),
            opt(row.pure_h_dev),
            opt(row.pure_c_dev),
            opt(row.pure_gamma_dev),
            opt(row.pure_det_dev),
        ]);
    }

    let fold_max = |f: fn(&PropRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let max_route = fold_max(|r| r.route_discrepancy);
    let max_sum = rows.iter().map(|r| r.spectrum_sum).fold(0.0, f64::max);
    let max_envelope = fold_max(|r| r.envelope_violation);
    let max_dominance = fold_max(|r| r.dominance_violation);
    let mismatches = rows.iter().filter(|r| r.zero_set_mismatch).count();
    let max_opt = |f: fn(&PropRow) -> Option<f64>| {
        rows.iter().filter_map(f).fold(0.0, f64::max)
    };
    let max_pure_h = max_opt(|r| r.pure_h_dev);
    let max_pure_c = max_opt(|r| r.pure_c_dev);
    let max_pure_gamma = max_opt(|r| r.pure_gamma_dev);
    let max_pure_det = max_opt(|r| r.pure_det_dev);

    out.summary("samples", rows.len());
    out.summary("max_route_discrepancy", fmt_f64(max_route));
    out.summary("max_spectrum_sum", fmt_f64(max_sum));
    out.summary("max_envelope_violation", fmt_f64(max_envelope));
    out.summary("max_dominance_violation", fmt_f64(max_dominance));
    out.summary("zero_set_mismatches", mismatches);
    out.summary("max_pure_h_dev", fmt_f64(max_pure_h));
    out.summary("max_pure_c_dev", fmt_f64(max_pure_c));
    out.summary("max_pure_gamma_dev", fmt_f64(max_pure_gamma));
    out.summary("max_pure_det_dev", fmt_f64(max_pure_det));
    out.write(args.output.as_deref(), now_unix())?;

    let t = args.tolerance;
    if max_route > t
        || max_sum > 1.0 + t
        || max_envelope > t
        || max_dominance > t
        || mismatches > 0
        || max_pure_h > PURE_LAW_TOL_H
        || max_pure_c > PURE_LAW_TOL_C
        || max_pure_gamma > PURE_LAW_TOL_GAMMA
        || max_pure_det > PURE_LAW_TOL_DET
    {
        return Err(CliError::Property(format!(
            "property violation: route {max_route:e}, Σλ {max_sum}, envelope {max_envelope:e}, \
             dominance {max_dominance:e}, zero-set mismatches {mismatches}, \
             pure laws ({max_pure_h:e}, {max_pure_c:e}, {max_pure_gamma:e}, {max_pure_det:e})"
        )));
    }
    Ok(())
}

/// The two-nonzero-eigenvalue claim for 2-qubit marginals of 3-qubit pure
/// states is checked against this bound.
const MARGINAL_LAMBDA34_TOL: f64 = 1e-8;

struct MonoRow {
    residuals: [f64; 3],
    lambda34_max: f64,
    chain_violation: f64,
}

fn monogamy_sample(index: u64, args: &SampleArgs) -> Result<MonoRow, CliError> {
    let psi = random_pure(3, RandomSpec::new(args.seed, index));
    let rho = from_pure(&psi);
    let mut residuals = [0.0; 3];
    for (pivot, slot) in residuals.iter_mut().enumerate() {
        *slot = pure_monogamy_residual(&rho, pivot).map_err(property_err)?;
    }
    let mut lambda34_max = 0.0f64;
    let mut chain_violation = 0.0f64;
    for keep in [[0usize, 1], [0, 2], [1, 2]] {
        let marginal = partial_trace(&rho, &keep).map_err(property_err)?;
        let lam = lambda_spectrum(&marginal).map_err(property_err)?;
        let [_, _, l3, l4] = lam.lambdas();
        lambda34_max = lambda34_max.max(l3).max(l4);
        // proof-chain step: H ≤ [tr(ρρ̃)]² with tr(ρρ̃) = Σλᵢ²
        let h = harmony(&marginal).map_err(property_err)?;
        let tr: f64 = lam.lambdas().iter().map(|l| l * l).sum();
        chain_violation = chain_violation.max(h - tr * tr);
    }
    Ok(MonoRow { residuals, lambda34_max, chain_violation })
}

fn monogamy_campaign(args: &SampleArgs) -> Result<(), CliError> {
    let pool = thread_pool(args.jobs)?;
    let rows: Result<Vec<MonoRow>, CliError> = pool.install(|| {
        (0..args.n as u64)
            .into_par_iter()
            .map(|i| monogamy_sample(i, args))
            .collect()
    });
    let rows = rows?;

    let mut out = Report::new("sample --check monogamy");
    base_sample_metadata(&mut out, args);
    out.meta("marginal_lambda34_tolerance", fmt_f64(MARGINAL_LAMBDA34_TOL));
    out.header(&[
        "index",
        "residual_pivot0",
        "residual_pivot1",
        "residual_pivot2",
        "marginal_lambda34_max",
        "chain_violation",
    ]);
    for (i, row) in rows.iter().enumerate() {
        out.row(vec![
            i.to_string(),
            fmt_f64(row.residuals[0]),
            fmt_f64(row.residuals[1]),
            fmt_f64(row.residuals[2]),
            fmt_f64(row.lambda34_max),
            fmt_f64(row.chain_violation),
        ]);
    }

    let min_residual = rows
        .iter()
        .flat_map(|r| r.residuals)
        .fold(f64::INFINITY, f64::min);
    let max_lambda34 = rows.iter().map(|r| r.lambda34_max).fold(0.0, f64::max);
    let max_chain = rows.iter().map(|r| r.chain_violation).fold(0.0, f64::max);
    out.summary("samples", rows.len());
    out.summary("min_residual", fmt_f64(min_residual));
    out.summary("max_marginal_lambda34", fmt_f64(max_lambda34));
    out.summary("max_chain_violation", fmt_f64(max_chain));
    out.write(args.output.as_deref(), now_unix())?;

    if min_residual < -args.tolerance
        || max_lambda34 > MARGINAL_LAMBDA34_TOL
        || max_chain > args.tolerance
    {
        return Err(CliError::Property(format!(
            "monogamy violation: min residual {min_residual:e}, marginal λ3/λ4 {max_lambda34:e}, \
             chain {max_chain:e}"
        )));
    }
    Ok(())
}

struct CorollaryRow {
    rank: usize,
    lhs: [f64; 3],
}

fn corollary_sample(index: u64, args: &SampleArgs) -> Result<CorollaryRow, CliError> {
    let rank = match args.rank {
        Some(r) if (1..=8).contains(&r) => r,
        Some(r) => return Err(CliError::Usage(format!("--rank {r} outside 1..=8"))),
        None => 1 + (index as usize % 8),
    };
    let rho = random_mixed(3, rank, RandomSpec::new(args.seed, index)).map_err(property_err)?;
    let mut lhs = [0.0; 3];
    for (pivot, slot) in lhs.iter_mut().enumerate() {
        *slot = harmony_core::monogamy::mixed_corollary_check(&rho, pivot).map_err(property_err)?;
    }
    Ok(CorollaryRow { rank, lhs })
}

fn corollary_campaign(args: &SampleArgs) -> Result<(), CliError> {
    let pool = thread_pool(args.jobs)?;
    let rows: Result<Vec<CorollaryRow>, CliError> = pool.install(|| {
        (0..args.n as u64)
            .into_par_iter()
            .map(|i| corollary_sample(i, args))
            .collect()
    });
    let rows = rows?;

    let mut out = Report::new("sample --check corollary");
    base_sample_metadata(&mut out, args);
    out.header(&["index", "rank", "lhs_pivot0", "lhs_pivot1", "lhs_pivot2"]);
    for (i, row) in rows.iter().enumerate() {
        out.row(vec![
            i.to_string(),
            row.rank.to_string(),
            fmt_f64(row.lhs[0]),
            fmt_f64(row.lhs[1]),
            fmt_f64(row.lhs[2]),
        ]);
    }

    let max_lhs = rows
        .iter()
        .flat_map(|r| r.lhs)
        .fold(0.0f64, f64::max);
    out.summary("samples", rows.len());
    out.summary("max_corollary_lhs", fmt_f64(max_lhs));
    out.write(args.output.as_deref(), now_unix())?;

    if max_lhs > 1.0 + args.tolerance {
        return Err(CliError::Property(format!(
            "corollary violation: H²_XY + H²_XZ = {max_lhs} exceeds 1"
        )));
    }
    Ok(())
}

fn base_sample_metadata(out: &mut Report, args: &SampleArgs) {
    out.meta("qubits", args.qubits);
    out.meta("n", args.n);
    if let Some(rank) = args.rank {
        out.meta("rank", rank);
    } else {
        out.meta("rank", "cycling");
    }
    out.meta("seed", args.seed);
    out.meta("rng", "chacha8 (stream = sample index)");
    out.meta("tolerance", fmt_f64(args.tolerance));
}

// ---------------------------------------------------------------------------
// verify-eof
// ---------------------------------------------------------------------------

const EOF_GAP_TOL: f64 = 1e-3;
const EOF_UNDERCUT_TOL: f64 = 1e-6;

pub fn verify_eof(args: VerifyEofArgs) -> Result<(), CliError> {
    if args.trials < 1 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if args.k < 1 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    if args.restarts < 1 {
        return Err(CliError::Usage("--restarts must be at least 1".into()));
    }
    let cfg_base = DecompositionSearchConfig {
        k_states: args.k,
        restarts: args.restarts,
        ..DecompositionSearchConfig::default()
    };

    let states: Vec<(DensityMatrix, String)> = match &args.input {
        Some(path) => {
            let tol = validation_tolerances(args.tolerance);
            let (rho, label) = io::read_state(path, &tol)?;
            if rho.n_qubits() != 2 {
                return Err(CliError::Validation(format!(
                    "2-qubit measure requires n_qubits=2, state has n_qubits={}",
                    rho.n_qubits()
                )));
            }
            vec![(rho, label.unwrap_or_else(|| path.display().to_string()))]
        }
        None => (0..args.trials as u64)
            .map(|i| {
                let rank = 1 + (i as usize % 4);
                let rho = random_mixed(2, rank, RandomSpec::new(args.seed, i))
                    .map_err(|e| CliError::Property(e.to_string()))?;
                Ok((rho, format!("random rank {rank}")))
            })
            .collect::<Result<_, CliError>>()?,
    };

    struct Trial {
        label: String,
        closed_form: f64,
        searched: f64,
        gap: f64,
        route_discrepancy: f64,
        restart_spread: f64,
    }

    let trials: Result<Vec<Trial>, CliError> = states
        .par_iter()
        .enumerate()
        .map(|(i, (rho, label))| {
            let cfg = DecompositionSearchConfig {
                seed: args.seed.wrapping_add(0x5eed).wrapping_add(i as u64),
                ..cfg_base
            };
            let report = eof_decomposition_search(rho, &cfg).map_err(|e| match e {
                Error::ConfigError { .. } => CliError::Usage(e.to_string()),
                other => CliError::Property(other.to_string()),
            })?;
            let spread = report.per_restart.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
                - report.per_restart.iter().fold(f64::INFINITY, |a, &b| a.min(b));
            Ok(Trial {
                label: label.clone(),
                closed_form: report.closed_form_eof,
                searched: report.searched_eof,
                gap: report.gap,
                route_discrepancy: report
                    .route_discrepancies
                    .iter()
                    .fold(0.0f64, |a, &b| a.max(b)),
                restart_spread: spread,
            })
        })
        .collect();
    let trials = trials?;

    let mut out = Report::new("verify-eof");
    out.meta("trials", trials.len());
    out.meta("k", args.k);
    out.meta("restarts", args.restarts);
    out.meta("seed", args.seed);
    out.meta("rng", "chacha8");
    out.meta(
        "search",
        format!(
            "max_iters={} step_init={} step_decay={} decay_interval={}",
            cfg_base.max_iters, cfg_base.step_init, cfg_base.step_decay, cfg_base.decay_interval
        ),
    );
    out.meta("gap_tolerance", fmt_f64(EOF_GAP_TOL));
    out.meta("undercut_tolerance", fmt_f64(EOF_UNDERCUT_TOL));
    out.header(&[
        "trial",
        "label",
        "closed_form_eof",
        "searched_eof",
        "gap",
        "route_discrepancy",
        "restart_spread",
    ]);
    for (i, t) in trials.iter().enumerate() {
        out.row(vec![
            i.to_string(),
            t.label.clone(),
            fmt_f64(t.closed_form),
            fmt_f64(t.searched),
            fmt_f64(t.gap),
            fmt_f64(t.route_discrepancy),
            fmt_f64(t.restart_spread),
        ]);
    }

    let max_gap = trials.iter().map(|t| t.gap).fold(f64::NEG_INFINITY, f64::max);
    let min_gap = trials.iter().map(|t| t.gap).fold(f64::INFINITY, f64::min);
    out.summary("max_gap", fmt_f64(max_gap));
    out.summary("min_gap", fmt_f64(min_gap));
    out.write(args.output.as_deref(), now_unix())?;

    if max_gap > EOF_GAP_TOL || min_gap < -EOF_UNDERCUT_TOL {
        return Err(CliError::Property(format!(
            "EoF verification failed: gap range [{min_gap:e}, {max_gap:e}] outside \
             [-{EOF_UNDERCUT_TOL:e}, {EOF_GAP_TOL:e}]"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

pub fn bench(args: BenchArgs) -> Result<(), CliError> {
    if args.n < 1 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if args.repetitions < 3 {
        return Err(CliError::Usage("--repetitions must be at least 3".into()));
    }
    let report = harmony_bench::run_bench(args.n, RandomSpec::new(args.seed, 0), args.repetitions);

    let mut out = Report::new("bench");
    out.meta("batch_size", report.batch_size);
    out.meta("repetitions", report.repetitions);
    out.meta("seed", report.seed);
    out.meta("rng", "chacha8");
    out.meta(
        "correctness_max_discrepancy",
        fmt_f64(report.correctness_max_discrepancy),
    );
    out.meta(
        "poly_faster_than_eigenvalue",
        report.poly_faster_than_eigenvalue,
    );
    out.header(&["statistic", "polynomial_ns", "eigenvalue_ns", "hermitian_r_ns"]);
    out.row(vec![
        "mean".into(),
        fmt_f64(report.poly.mean_ns),
        fmt_f64(report.eigenvalue.mean_ns),
        fmt_f64(report.hermitian_r.mean_ns),
    ]);
    out.row(vec![
        "median".into(),
        fmt_f64(report.poly.median_ns),
        fmt_f64(report.eigenvalue.median_ns),
        fmt_f64(report.hermitian_r.median_ns),
    ]);
    out.row(vec![
        "p95".into(),
        fmt_f64(report.poly.p95_ns),
        fmt_f64(report.eigenvalue.p95_ns),
        fmt_f64(report.hermitian_r.p95_ns),
    ]);
    out.write(args.output.as_deref(), now_unix())?;

    if report.correctness_max_discrepancy > 1e-9 {
        return Err(CliError::Property(format!(
            "benchmark invalid: routes disagree by {:e}",
            report.correctness_max_discrepancy
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

fn derive_path(base: &Path, suffix: &str) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("state");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("json");
    base.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

pub fn gen(args: GenArgs) -> Result<(), CliError> {
    match args.kind {
        GenKind::Bell { kind } => {
            let bell = match kind.to_ascii_lowercase().as_str() {
                "phi+" => BellKind::PhiPlus,
                "phi-" => BellKind::PhiMinus,
                "psi+" => BellKind::PsiPlus,
                "psi-" => BellKind::PsiMinus,
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown Bell state `{other}`; expected phi+, phi-, psi+ or psi-"
                    )))
                }
            };
            let rho = from_pure(&bell_state(bell));
            io::write_state(&args.output, &rho, Some(format!("bell {kind}")))?;
            println!("{}", args.output.display());
        }
        GenKind::Ghz => {
            let rho = from_pure(&ghz_state());
            io::write_state(&args.output, &rho, Some("ghz".into()))?;
            println!("{}", args.output.display());
        }
        GenKind::W => {
            let rho = from_pure(&w_state());
            io::write_state(&args.output, &rho, Some("w".into()))?;
            println!("{}", args.output.display());
        }
        GenKind::BellDiagonal { p } => {
            let weights = [p[0], p[1], p[2], p[3]];
            let rho = bell_diagonal(weights).map_err(|e| CliError::Usage(e.to_string()))?;
            io::write_state(&args.output, &rho, Some(format!("bell-diagonal {weights:?}")))?;
            println!("{}", args.output.display());
        }
        GenKind::Nonconvexity { x } => {
            let (plus, minus, mixture) =
                nonconvexity_family(x).map_err(|e| CliError::Usage(e.to_string()))?;
            for (rho, suffix) in [(plus, "plus"), (minus, "minus"), (mixture, "mixture")] {
                let path = derive_path(&args.output, suffix);
                io::write_state(&path, &rho, Some(format!("nonconvexity x={x} {suffix}")))?;
                println!("{}", path.display());
            }
        }
        GenKind::Random { qubits, rank, seed } => {
            if !(1..=3).contains(&qubits) {
                return Err(CliError::Usage(format!("--qubits {qubits} outside 1..=3")));
            }
            let rho = random_mixed(qubits, rank, RandomSpec::new(seed, 0))
                .map_err(|e| CliError::Usage(e.to_string()))?;
            io::write_state(
                &args.output,
                &rho,
                Some(format!("random qubits={qubits} rank={rank} seed={seed}")),
            )?;
            println!("{}", args.output.display());
        }
    }
    Ok(())
}
