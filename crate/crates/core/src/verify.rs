//! Independent oracles: a decomposition-minimization search for the
//! entanglement of formation (checked against the closed form), three-route
//! disharmony cross-checks, the non-monotonicity family, and local-unitary
//! invariance sweeps.

use crate::error::{Error, Result};
use crate::measures::{
    binary_entropy, disharmony_from_spectrum, disharmony_poly, entanglement_of_formation,
    harmony, lambda_spectrum, lambda_spectrum_hermitian,
};
use crate::monogamy::{random_left_unitary, RANK_THRESHOLD};
use crate::qmat::{herm_eig, ComplexMatrix};
use crate::states::{complex_normal, nonconvexity_family, DensityMatrix, RandomSpec};
use crate::tolerance::Tolerances;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Knobs of the decomposition search. All of these are optimizer choices,
/// not physics, so reports carry them verbatim.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionSearchConfig {
    /// Decomposition size K; must be at least the rank of the target and may
    /// exceed the Hilbert-space dimension.
    pub k_states: usize,
    pub restarts: usize,
    pub max_iters: usize,
    /// Initial rotation angle of the two-row moves.
    pub step_init: f64,
    /// Geometric decay factor applied every `decay_interval` iterations.
    pub step_decay: f64,
    pub decay_interval: usize,
    /// Reconstruction guard: every accepted decomposition must rebuild ρ
    /// entrywise within this bound.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for DecompositionSearchConfig {
    fn default() -> Self {
        Self {
            k_states: 8,
            restarts: 20,
            max_iters: 4000,
            step_init: std::f64::consts::FRAC_PI_8,
            step_decay: 0.95,
            decay_interval: 20,
            tolerance: 1e-9,
            seed: 0,
        }
    }
}

/// Outcome of one closed-form-vs-search comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    /// Wootters closed form, in nats.
    pub closed_form_eof: f64,
    /// Best decomposition average found; an upper bound on the true minimum.
    pub searched_eof: f64,
    /// searched − closed_form, expected in [−1e-6, tolerance of the search].
    pub gap: f64,
    /// Pairwise disharmony discrepancies (poly vs λ, poly vs R, λ vs R).
    pub route_discrepancies: [f64; 3],
    /// Final objective of each restart.
    pub per_restart: Vec<f64>,
    pub config: DecompositionSearchConfig,
}

/// Average-entropy objective of one decomposition row: for the unnormalized
/// member φ̃, returns pₖ·E_v(φₖ) via the 2×2 marginal.
fn row_objective(phi: &[Complex64; 4]) -> f64 {
    let m00 = phi[0].norm_sqr() + phi[1].norm_sqr();
    let m11 = phi[2].norm_sqr() + phi[3].norm_sqr();
    let m01 = phi[0] * phi[2].conj() + phi[1] * phi[3].conj();
    let p = m00 + m11;
    if p <= f64::MIN_POSITIVE {
        return 0.0;
    }
    let det = (m00 * m11 - m01.norm_sqr()).max(0.0);
    // Normalized marginal eigenvalues ½(1 ± √(1 − 4 det/p²)).
    let disc = (1.0 - 4.0 * det / (p * p)).max(0.0).sqrt();
    let mu = ((1.0 + disc) / 2.0).min(1.0);
    p * binary_entropy(mu).expect("marginal eigenvalue is a probability")
}

struct SearchState {
    /// Rows are the unnormalized members φ̃ₖ = Σⱼ Vₖⱼ √μⱼ |eⱼ⟩.
    members: Vec<[Complex64; 4]>,
    terms: Vec<f64>,
    total: f64,
}

impl SearchState {
    fn from_left_unitary(v: &[Vec<Complex64>], scaled_eigvecs: &[[Complex64; 4]]) -> Self {
        let members: Vec<[Complex64; 4]> = v
            .iter()
            .map(|row| {
                let mut phi = [Complex64::new(0.0, 0.0); 4];
                for (j, col) in scaled_eigvecs.iter().enumerate() {
                    for (slot, &entry) in phi.iter_mut().zip(col.iter()) {
                        *slot += entry * row[j];
                    }
                }
                phi
            })
            .collect();
        let terms: Vec<f64> = members.iter().map(row_objective).collect();
        let total = terms.iter().sum();
        Self { members, terms, total }
    }

    /// Reconstruction Σₖ |φ̃ₖ⟩⟨φ̃ₖ| compared entrywise to ρ.
    fn reconstruction_error(&self, rho: &ComplexMatrix) -> f64 {
        let mut rebuilt = ComplexMatrix::zeros(4);
        for phi in &self.members {
            for i in 0..4 {
                for j in 0..4 {
                    rebuilt[(i, j)] += phi[i] * phi[j].conj();
                }
            }
        }
        rebuilt.max_abs_diff(rho)
    }
}

/// Local search over pure-state decompositions minimizing the average
/// subsystem entropy Σ pₖ E_v(φₖ).
///
/// Decompositions are parameterized by K×r matrices V with orthonormal
/// columns acting on the scaled eigenvectors √μⱼ|eⱼ⟩; the search applies
/// random two-row rotations with a geometrically decaying step and accepts
/// strict improvements, restarting from fresh random V.
pub fn eof_decomposition_search(
    rho: &DensityMatrix,
    cfg: &DecompositionSearchConfig,
) -> Result<VerificationReport> {
    if rho.n_qubits() != 2 {
        return Err(Error::WrongQubitCount { expected: 2, got: rho.n_qubits() });
    }
    validate_config(cfg)?;

    let tol = Tolerances::default();
    let eig = herm_eig(rho.matrix(), &tol)?;
    let kept: Vec<(f64, usize)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu > RANK_THRESHOLD)
        .map(|(j, &mu)| (mu, j))
        .collect();
    let rank = kept.len();
    if cfg.k_states < rank {
        return Err(Error::ConfigError {
            reason: format!(
                "k_states = {} is smaller than the state rank {rank}; K ≥ rank is required",
                cfg.k_states
            ),
        });
    }

    let scaled: Vec<[Complex64; 4]> = kept
        .iter()
        .map(|&(mu, j)| {
            let root = mu.sqrt();
            let mut col = [Complex64::new(0.0, 0.0); 4];
            for (i, slot) in col.iter_mut().enumerate() {
                *slot = eig.eigenvectors[(i, j)] * root;
            }
            col
        })
        .collect();

    let mut per_restart = Vec::with_capacity(cfg.restarts);
    let mut best = f64::INFINITY;
    for restart in 0..cfg.restarts {
        let spec = RandomSpec::new(cfg.seed, restart as u64);
        let value = run_restart(cfg, &scaled, rho.matrix(), spec)?;
        per_restart.push(value);
        best = best.min(value);
    }

    let closed_form = entanglement_of_formation(rho)?;
    let discrepancies = crosscheck_disharmony_route_values(rho)?;
    Ok(VerificationReport {
        closed_form_eof: closed_form,
        searched_eof: best,
        gap: best - closed_form,
        route_discrepancies: discrepancies,
        per_restart,
        config: *cfg,
    })
}

fn validate_config(cfg: &DecompositionSearchConfig) -> Result<()> {
    if cfg.restarts < 1 || cfg.max_iters < 1 || cfg.decay_interval < 1 {
        return Err(Error::ConfigError {
            reason: "restarts, max_iters and decay_interval must be at least 1".into(),
        });
    }
    let step_ok = cfg.step_init.is_finite() && cfg.step_init > 0.0;
    let decay_ok = cfg.step_decay > 0.0 && cfg.step_decay < 1.0;
    if !step_ok || !decay_ok {
        return Err(Error::ConfigError {
            reason: "step_init must be positive and step_decay in (0, 1)".into(),
        });
    }
    Ok(())
}

fn run_restart(
    cfg: &DecompositionSearchConfig,
    scaled: &[[Complex64; 4]],
    rho: &ComplexMatrix,
    spec: RandomSpec,
) -> Result<f64> {
    let rank = scaled.len();
    let k = cfg.k_states;
    let mut rng = spec.rng();
    let v = if rank == 1 {
        // Any unit column yields the same decomposition up to phases.
        let mut col = vec![vec![Complex64::new(0.0, 0.0)]; k];
        col[0][0] = Complex64::new(1.0, 0.0);
        col
    } else {
        random_left_unitary(&mut rng, k, rank)
    };
    let mut state = SearchState::from_left_unitary(&v, scaled);
    check_reconstruction(&state, rho, cfg.tolerance)?;

    if rank == 1 || k < 2 {
        return Ok(state.total);
    }

    let mut step = cfg.step_init;
    for iter in 0..cfg.max_iters {
        if iter > 0 && iter % cfg.decay_interval == 0 {
            step *= cfg.step_decay;
        }
        let k1 = rng.random_range(0..k);
        let mut k2 = rng.random_range(0..k - 1);
        if k2 >= k1 {
            k2 += 1;
        }
        let theta = step * (rng.random::<f64>() * 2.0 - 1.0);
        let phase_angle = rng.random::<f64>() * std::f64::consts::TAU;
        let (c, s) = (theta.cos(), theta.sin());
        let phase = Complex64::from_polar(1.0, phase_angle);

        // Two-row rotation: rows (k1, k2) of V mix through a 2×2 unitary,
        // which acts identically on the member vectors.
        let a = state.members[k1];
        let b = state.members[k2];
        let mut new_a = [Complex64::new(0.0, 0.0); 4];
        let mut new_b = [Complex64::new(0.0, 0.0); 4];
        for i in 0..4 {
            new_a[i] = a[i] * c - b[i] * s * phase;
            new_b[i] = a[i] * s * phase.conj() + b[i] * c;
        }
        let t_a = row_objective(&new_a);
        let t_b = row_objective(&new_b);
        let delta = t_a + t_b - state.terms[k1] - state.terms[k2];
        if delta < 0.0 {
            state.members[k1] = new_a;
            state.members[k2] = new_b;
            state.terms[k1] = t_a;
            state.terms[k2] = t_b;
            state.total += delta;
            if (iter + 1) % 250 == 0 {
                check_reconstruction(&state, rho, cfg.tolerance)?;
            }
        }
    }
    check_reconstruction(&state, rho, cfg.tolerance)?;
    // Guard against drift in the incrementally tracked objective.
    state.total = state.terms.iter().sum();
    Ok(state.total)
}

fn check_reconstruction(state: &SearchState, rho: &ComplexMatrix, tolerance: f64) -> Result<()> {
    let err = state.reconstruction_error(rho);
    if err > tolerance {
        return Err(Error::ConfigError {
            reason: format!("decomposition drifted off ρ: reconstruction error {err:.3e}"),
        });
    }
    Ok(())
}

/// Disharmony by all three routes; returns the maximum pairwise discrepancy.
pub fn crosscheck_disharmony_routes(rho: &DensityMatrix) -> Result<f64> {
    let d = crosscheck_disharmony_route_values(rho)?;
    Ok(d[0].max(d[1]).max(d[2]))
}

fn crosscheck_disharmony_route_values(rho: &DensityMatrix) -> Result<[f64; 3]> {
    let d_poly = disharmony_poly(rho)?;
    let d_spec = disharmony_from_spectrum(&lambda_spectrum(rho)?)?;
    let d_herm = disharmony_from_spectrum(&lambda_spectrum_hermitian(rho)?)?;
    Ok([
        (d_poly - d_spec).abs(),
        (d_poly - d_herm).abs(),
        (d_spec - d_herm).abs(),
    ])
}

/// One row of the non-monotonicity table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonmonotonicityRow {
    pub x: f64,
    /// H of the even mixture, equal to 1 − x².
    pub h_mixture: f64,
    /// H of each pure component, equal to (1 − x²)².
    pub h_pure: f64,
    /// H(ρ) − ½H(ρ₊) − ½H(ρ₋), nonnegative and positive inside (0, 1).
    pub convexity_gap: f64,
}

/// Rebuilds the non-convexity family at each x and reports the measured
/// harmonies and the convexity gap.
pub fn reproduce_nonmonotonicity(xs: &[f64]) -> Result<Vec<NonmonotonicityRow>> {
    xs.iter()
        .map(|&x| {
            let (plus, minus, mixture) = nonconvexity_family(x)?;
            let h_mixture = harmony(&mixture)?;
            let h_plus = harmony(&plus)?;
            let h_minus = harmony(&minus)?;
            Ok(NonmonotonicityRow {
                x,
                h_mixture,
                h_pure: (h_plus + h_minus) / 2.0,
                convexity_gap: h_mixture - 0.5 * h_plus - 0.5 * h_minus,
            })
        })
        .collect()
}

/// Haar-random unitary of the given dimension (Ginibre then QR with the
/// phase fix that makes the distribution uniform).
pub fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let cols = random_left_unitary(rng, dim, dim);
    ComplexMatrix::from_fn(dim, |i, j| cols[i][j])
}

/// Samples (state, U_A, U_B) triples and returns the maximum harmony drift
/// |H((U_A⊗U_B) ρ (U_A⊗U_B)†) − H(ρ)| observed.
pub fn local_unitary_sweep(n: usize, spec: RandomSpec) -> Result<f64> {
    let mut max_dev: f64 = 0.0;
    for i in 0..n {
        let sample = spec.substream(i as u64);
        let rank = 1 + (i % 4);
        let rho = crate::states::random_mixed(2, rank, sample)?;
        let mut rng = sample.substream(1 << 32).rng();
        let u_a = random_unitary(2, &mut rng);
        let u_b = random_unitary(2, &mut rng);
        let u = u_a.kron(&u_b)?;
        let rotated_mat = &(&u * rho.matrix()) * &u.adjoint();
        let rotated = DensityMatrix::new(2, rotated_mat)?;
        let dev = (harmony(&rotated)? - harmony(&rho)?).abs();
        max_dev = max_dev.max(dev);
    }
    Ok(max_dev)
}

/// Random full-rank 2-qubit states conjugated by explicitly sampled local
/// unitaries, exposed for tests that need the pieces separately.
pub fn random_local_unitary_pair(spec: RandomSpec) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let mut rng = spec.rng();
    Ok((random_unitary(2, &mut rng), random_unitary(2, &mut rng)))
}

/// Convenience used by tests: a Haar random state vector entry generator.
pub fn haar_amplitudes(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}
