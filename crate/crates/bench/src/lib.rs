//! Wall-clock comparison of the three disharmony routes on identical batches
//! of random states: the degree-4 polynomial, the general-eigenvalue
//! λ-spectrum, and the Hermitian R-spectrum. Timing claims are report-only;
//! the one hard invariant is that the routes agree on the values they time.

use harmony_core::measures::{
    disharmony_from_spectrum, disharmony_poly, lambda_spectrum, lambda_spectrum_hermitian,
};
use harmony_core::states::{random_mixed, DensityMatrix, RandomSpec};
use std::hint::black_box;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

/// Per-state wall-time statistics of one route, in nanoseconds, across
/// repetitions of the whole batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteStats {
    pub mean_ns: f64,
    pub median_ns: f64,
    pub p95_ns: f64,
}

impl RouteStats {
    fn from_samples(mut per_state_ns: Vec<f64>) -> Self {
        per_state_ns.sort_by(f64::total_cmp);
        let n = per_state_ns.len();
        let mean = per_state_ns.iter().sum::<f64>() / n as f64;
        let median = if n % 2 == 1 {
            per_state_ns[n / 2]
        } else {
            (per_state_ns[n / 2 - 1] + per_state_ns[n / 2]) / 2.0
        };
        let p95 = per_state_ns[((n as f64 * 0.95).ceil() as usize).clamp(1, n) - 1];
        Self { mean_ns: mean, median_ns: median, p95_ns: p95 }
    }
}

/// One benchmark run: identical batch, three routes, repetition statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub batch_size: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub unix_time_s: u64,
    pub poly: RouteStats,
    pub eigenvalue: RouteStats,
    pub hermitian_r: RouteStats,
    /// Max pairwise disharmony disagreement on the checked sample; the
    /// benchmark is invalid when this exceeds 1e-9.
    pub correctness_max_discrepancy: f64,
    /// The expected outcome: the polynomial route beats the eigenvalue route.
    pub poly_faster_than_eigenvalue: bool,
}

/// Deterministic benchmark batch: ranks cycle 1..=4 over substreams of `spec`.
pub fn generate_batch(batch_size: usize, spec: RandomSpec) -> Vec<DensityMatrix> {
    (0..batch_size)
        .map(|i| {
            let rank = 1 + (i % 4);
            random_mixed(2, rank, spec.substream(i as u64))
                .expect("induced-measure sampling is total for ranks 1..=4")
        })
        .collect()
}

fn time_route(batch: &[DensityMatrix], repetitions: usize, route: impl Fn(&DensityMatrix) -> f64) -> RouteStats {
    let mut samples = Vec::with_capacity(repetitions);
    // one warm-up repetition, discarded
    for rep in 0..=repetitions {
        let start = Instant::now();
        for rho in batch {
            black_box(route(black_box(rho)));
        }
        let per_state = start.elapsed().as_nanos() as f64 / batch.len() as f64;
        if rep > 0 {
            samples.push(per_state);
        }
    }
    RouteStats::from_samples(samples)
}

fn poly_route(rho: &DensityMatrix) -> f64 {
    disharmony_poly(rho).expect("valid 2-qubit state")
}

fn eigenvalue_route(rho: &DensityMatrix) -> f64 {
    disharmony_from_spectrum(&lambda_spectrum(rho).expect("valid 2-qubit state"))
        .expect("valid spectrum")
}

fn hermitian_route(rho: &DensityMatrix) -> f64 {
    disharmony_from_spectrum(&lambda_spectrum_hermitian(rho).expect("valid 2-qubit state"))
        .expect("valid spectrum")
}

/// Times the three routes over the same pre-generated batch (generation is
/// excluded from timing) and cross-checks their values on a 1% sample.
pub fn run_bench(batch_size: usize, spec: RandomSpec, repetitions: usize) -> BenchReport {
    assert!(batch_size >= 1, "batch_size must be at least 1");
    assert!(repetitions >= 3, "repetitions must be at least 3");
    let batch = generate_batch(batch_size, spec);

    let poly = time_route(&batch, repetitions, poly_route);
    let eigenvalue = time_route(&batch, repetitions, eigenvalue_route);
    let hermitian_r = time_route(&batch, repetitions, hermitian_route);

    // route agreement on every 100th state, at least one
    let stride = (batch_size / 100).max(1);
    let mut max_disc = 0.0f64;
    for rho in batch.iter().step_by(stride) {
        let a = poly_route(rho);
        let b = eigenvalue_route(rho);
        let c = hermitian_route(rho);
        max_disc = max_disc
            .max((a - b).abs())
            .max((a - c).abs())
            .max((b - c).abs());
    }

    BenchReport {
        batch_size,
        repetitions,
        seed: spec.seed,
        unix_time_s: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        poly,
        eigenvalue,
        hermitian_r,
        correctness_max_discrepancy: max_disc,
        poly_faster_than_eigenvalue: poly.mean_ns < eigenvalue.mean_ns,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_is_structurally_complete() {
        let report = run_bench(64, RandomSpec::new(42, 0), 3);
        assert_eq!(report.batch_size, 64);
        assert_eq!(report.repetitions, 3);
        assert!(report.poly.mean_ns > 0.0);
        assert!(report.eigenvalue.median_ns > 0.0);
        assert!(report.hermitian_r.p95_ns >= report.hermitian_r.median_ns);
    }

    #[test]
    fn routes_agree_on_the_batch() {
        let report = run_bench(128, RandomSpec::new(7, 0), 3);
        assert!(
            report.correctness_max_discrepancy <= 1e-9,
            "routes disagree: {}",
            report.correctness_max_discrepancy
        );
    }

    #[test]
    fn correctness_value_is_deterministic_across_runs() {
        let a = run_bench(64, RandomSpec::new(99, 3), 3);
        let b = run_bench(64, RandomSpec::new(99, 3), 3);
        assert_eq!(a.correctness_max_discrepancy, b.correctness_max_discrepancy);
    }
}
