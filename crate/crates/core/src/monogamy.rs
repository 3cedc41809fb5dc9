//! Monogamy of harmony on 3-qubit registers: marginal harmonies, the
//! pure-state inequality H_XY + H_XZ ≤ H_X(YZ), the mixed-state corollary
//! H²_XY + H²_XZ ≤ 1, and sampled upper bounds on the decomposition minimum
//! of √H_X(YZ).

use crate::error::{Error, Result};
use crate::measures::harmony;
use crate::qmat::herm_eig;
use crate::states::{complex_normal, partial_trace, DensityMatrix, RandomSpec};
use crate::tolerance::Tolerances;
use num_complex::Complex64;

/// Eigenvalues below this weight do not count towards the rank of a state.
pub(crate) const RANK_THRESHOLD: f64 = 1e-10;

/// Monogamy quantities of one 3-qubit state for one pivot.
#[derive(Debug, Clone, PartialEq)]
pub struct MonogamyReport {
    pub pivot: usize,
    pub h_xy: f64,
    pub h_xz: f64,
    /// H_X(YZ); only meaningful for pure inputs.
    pub h_x_yz: Option<f64>,
    /// H_X(YZ) − H_XY − H_XZ for pure inputs.
    pub residual_pure: Option<f64>,
    /// H²_XY + H²_XZ, bounded by 1.
    pub corollary_lhs: f64,
    /// Sampled upper bound on the decomposition minimum of √H_X(YZ).
    pub decomposition_bound: Option<f64>,
    pub seed: Option<RandomSpec>,
}

fn ensure_three_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.n_qubits() != 3 {
        return Err(Error::WrongQubitCount { expected: 3, got: rho.n_qubits() });
    }
    Ok(())
}

fn ensure_pivot(pivot: usize) -> Result<()> {
    if pivot > 2 {
        return Err(Error::OutOfRange { value: pivot as f64, lo: 0.0, hi: 2.0 });
    }
    Ok(())
}

/// The other two qubit indices in ascending order.
fn partners(pivot: usize) -> (usize, usize) {
    match pivot {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Harmonies of the two 2-qubit marginals containing the pivot qubit X:
/// (H_XY, H_XZ).
pub fn marginal_harmonies(rho: &DensityMatrix, pivot: usize) -> Result<(f64, f64)> {
    ensure_three_qubit(rho)?;
    ensure_pivot(pivot)?;
    let (y, z) = partners(pivot);
    let mut xy = vec![pivot, y];
    xy.sort_unstable();
    let mut xz = vec![pivot, z];
    xz.sort_unstable();
    let h_xy = harmony(&partial_trace(rho, &xy)?)?;
    let h_xz = harmony(&partial_trace(rho, &xz)?)?;
    Ok((h_xy, h_xz))
}

fn ensure_pure(rho: &DensityMatrix, tol: &Tolerances) -> Result<()> {
    let purity = rho.purity();
    if purity < 1.0 - tol.purity_pure {
        return Err(Error::NotPure { purity, tolerance: tol.purity_pure });
    }
    Ok(())
}

/// H_X(YZ) = (4 det ρ_X)² for a pure 3-qubit state: the pair (Y, Z) spans an
/// effectively two-dimensional space, so the bipartition behaves like two
/// qubits.
pub fn harmony_x_yz(rho: &DensityMatrix, pivot: usize) -> Result<f64> {
    ensure_three_qubit(rho)?;
    ensure_pivot(pivot)?;
    ensure_pure(rho, &Tolerances::default())?;
    let marginal = partial_trace(rho, &[pivot])?;
    let det = marginal.matrix().det().re;
    Ok((4.0 * det).powi(2))
}

/// H_X(YZ) − H_XY − H_XZ, nonnegative for every pure 3-qubit state.
pub fn pure_monogamy_residual(rho: &DensityMatrix, pivot: usize) -> Result<f64> {
    let h_bipartite = harmony_x_yz(rho, pivot)?;
    let (h_xy, h_xz) = marginal_harmonies(rho, pivot)?;
    Ok(h_bipartite - h_xy - h_xz)
}

/// H²_XY + H²_XZ; at most 1 for any 3-qubit state, pure or mixed.
pub fn mixed_corollary_check(rho: &DensityMatrix, pivot: usize) -> Result<f64> {
    let (h_xy, h_xz) = marginal_harmonies(rho, pivot)?;
    Ok(h_xy * h_xy + h_xz * h_xz)
}

/// √H_X(YZ) = 4 det ρ_X of one pure 3-qubit state given by amplitudes.
#[allow(clippy::needless_range_loop)]
fn sqrt_h_x_yz_of_vector(amps: &[Complex64; 8], pivot: usize) -> f64 {
    // 2×2 marginal of the pivot qubit: ρ_X[a][b] = Σ_rest ψ[a·rest] ψ*[b·rest].
    let shift = 2 - pivot; // qubit 0 is the most significant of three bits
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (idx, amp) in amps.iter().enumerate() {
        let a = (idx >> shift) & 1;
        for b in 0..2 {
            let jdx = (idx & !(1 << shift)) | (b << shift);
            m[a][b] += amp * amps[jdx].conj();
        }
    }
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re;
    4.0 * det
}

/// Samples `n_decompositions` random pure-state decompositions of ρ and
/// returns the smallest Σ pₖ √H_X(YZ),k seen — an upper bound on the true
/// decomposition minimum.
///
/// Decompositions come from the eigendecomposition ρ = Σ μⱼ|eⱼ⟩⟨eⱼ| mixed by
/// Haar-random K×r matrices with orthonormal columns; draws are sequential in
/// the stream, so enlarging `n_decompositions` with the same spec refines the
/// bound monotonically.
pub fn decomposition_min_upper_bound(
    rho: &DensityMatrix,
    pivot: usize,
    n_decompositions: usize,
    spec: RandomSpec,
) -> Result<f64> {
    ensure_three_qubit(rho)?;
    ensure_pivot(pivot)?;
    if n_decompositions < 1 {
        return Err(Error::ConfigError {
            reason: "n_decompositions must be at least 1".into(),
        });
    }
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
    let k_states = 2 * rho.dim();

    // Scaled eigenvector columns √μⱼ |eⱼ⟩.
    let scaled: Vec<[Complex64; 8]> = kept
        .iter()
        .map(|&(mu, j)| {
            let root = mu.sqrt();
            let mut col = [Complex64::new(0.0, 0.0); 8];
            for (i, slot) in col.iter_mut().enumerate() {
                *slot = eig.eigenvectors[(i, j)] * root;
            }
            col
        })
        .collect();

    let mut rng = spec.rng();
    let mut best = f64::INFINITY;
    for _ in 0..n_decompositions {
        let v = random_left_unitary(&mut rng, k_states, rank);
        let mut total = 0.0;
        for row in &v {
            // Unnormalized member |φ̃ₖ⟩ = Σⱼ Vₖⱼ √μⱼ |eⱼ⟩ with pₖ = ⟨φ̃ₖ|φ̃ₖ⟩;
            // pₖ·√H of the normalized state is 4·det of the unnormalized
            // marginal divided by pₖ, so track the vector directly.
            let mut phi = [Complex64::new(0.0, 0.0); 8];
            for (j, col) in scaled.iter().enumerate() {
                let w = row[j];
                for (slot, &entry) in phi.iter_mut().zip(col.iter()) {
                    *slot += entry * w;
                }
            }
            let p: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
            if p <= f64::MIN_POSITIVE {
                continue;
            }
            let inv = 1.0 / p.sqrt();
            for slot in &mut phi {
                *slot *= inv;
            }
            total += p * sqrt_h_x_yz_of_vector(&phi, pivot).max(0.0);
        }
        best = best.min(total);
    }
    Ok(best)
}

/// Haar-random K×r complex matrix with orthonormal columns, as row vectors.
#[allow(clippy::needless_range_loop)] // cols[prev] and cols[j] are borrowed together
pub(crate) fn random_left_unitary(
    rng: &mut rand_chacha::ChaCha8Rng,
    k: usize,
    r: usize,
) -> Vec<Vec<Complex64>> {
    let mut cols: Vec<Vec<Complex64>> = (0..r)
        .map(|_| (0..k).map(|_| complex_normal(rng)).collect())
        .collect();
    // Modified Gram-Schmidt; k×r Gaussian matrices are almost surely full rank.
    for j in 0..r {
        for prev in 0..j {
            let dot: Complex64 = cols[prev]
                .iter()
                .zip(cols[j].iter())
                .map(|(p, c)| p.conj() * c)
                .sum();
            for i in 0..k {
                let correction = cols[prev][i] * dot;
                cols[j][i] -= correction;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    (0..k)
        .map(|i| (0..r).map(|j| cols[j][i]).collect())
        .collect()
}

/// Full per-pivot report; the decomposition bound is included when
/// `decomposition_samples > 0`.
pub fn monogamy_report(
    rho: &DensityMatrix,
    pivot: usize,
    decomposition_samples: usize,
    spec: Option<RandomSpec>,
) -> Result<MonogamyReport> {
    let (h_xy, h_xz) = marginal_harmonies(rho, pivot)?;
    let pure = rho.purity() >= 1.0 - Tolerances::default().purity_pure;
    let h_x_yz = if pure { Some(harmony_x_yz(rho, pivot)?) } else { None };
    let residual_pure = h_x_yz.map(|h| h - h_xy - h_xz);
    let decomposition_bound = if decomposition_samples > 0 {
        let s = spec.unwrap_or(RandomSpec::new(0, 0));
        Some(decomposition_min_upper_bound(rho, pivot, decomposition_samples, s)?)
    } else {
        None
    };
    Ok(MonogamyReport {
        pivot,
        h_xy,
        h_xz,
        h_x_yz,
        residual_pure,
        corollary_lhs: h_xy * h_xy + h_xz * h_xz,
        decomposition_bound,
        seed: spec,
    })
}
