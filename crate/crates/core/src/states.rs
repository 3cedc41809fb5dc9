//! Construction, validation, sampling and reduction of 1-, 2- and 3-qubit
//! states. Basis convention throughout: computational product basis
//! {|0…0⟩, …, |1…1⟩} with the leftmost (index-0) qubit most significant.

use crate::error::{Error, Result};
use crate::qmat::{herm_eig, ComplexMatrix};
use crate::tolerance::Tolerances;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Unit-norm amplitude vector over a register of 1..=3 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Validates the register size, vector length, finiteness and
    /// normalization (‖ψ‖₂ = 1 within the norm tolerance).
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::new_with(n_qubits, amplitudes, &Tolerances::default())
    }

    pub fn new_with(n_qubits: usize, amplitudes: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        if !(1..=3).contains(&n_qubits) {
            return Err(Error::WrongQubitCount { expected: 3, got: n_qubits });
        }
        assert_eq!(amplitudes.len(), 1 << n_qubits, "amplitude vector length mismatch");
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NotNormalized { norm: f64::NAN, tolerance: tol.norm });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol.norm {
            return Err(Error::NotNormalized { norm, tolerance: tol.norm });
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Normalizes an arbitrary nonzero vector and wraps it.
    pub fn from_unnormalized(n_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm, tolerance: Tolerances::default().norm });
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(n_qubits, amplitudes)
    }

    /// Computational basis state |index⟩.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        assert!(index < (1 << n_qubits));
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

/// The four maximally entangled 2-qubit states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];
}

/// (|00⟩ ± |11⟩)/√2 and (|01⟩ ± |10⟩)/√2.
pub fn bell_state(kind: BellKind) -> PureState {
    let z = Complex64::new(0.0, 0.0);
    let p = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let m = Complex64::new(-FRAC_1_SQRT_2, 0.0);
    let amplitudes = match kind {
        BellKind::PhiPlus => vec![p, z, z, p],
        BellKind::PhiMinus => vec![p, z, z, m],
        BellKind::PsiPlus => vec![z, p, p, z],
        BellKind::PsiMinus => vec![z, p, m, z],
    };
    PureState { n_qubits: 2, amplitudes }
}

/// GHZ state (|000⟩ + |111⟩)/√2.
pub fn ghz_state() -> PureState {
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 8];
    amplitudes[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amplitudes[7] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    PureState { n_qubits: 3, amplitudes }
}

/// W state (|001⟩ + |010⟩ + |100⟩)/√3.
pub fn w_state() -> PureState {
    let a = Complex64::new(1.0 / 3.0f64.sqrt(), 0.0);
    let z = Complex64::new(0.0, 0.0);
    PureState { n_qubits: 3, amplitudes: vec![z, a, a, z, a, z, z, z] }
}

/// Validated density operator: Hermitian, PSD and unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(n_qubits: usize, mat: ComplexMatrix) -> Result<Self> {
        Self::new_with(n_qubits, mat, &Tolerances::default())
    }

    pub fn new_with(n_qubits: usize, mat: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !(1..=3).contains(&n_qubits) {
            return Err(Error::WrongQubitCount { expected: 3, got: n_qubits });
        }
        assert_eq!(mat.dim(), 1 << n_qubits, "matrix dimension mismatch");

        let scale = mat.frobenius_norm().max(1.0);
        if !scale.is_finite() {
            return Err(Error::NotHermitian { deviation: f64::NAN, tolerance: tol.hermiticity });
        }
        let deviation = mat.hermiticity_deviation();
        if deviation > tol.hermiticity * scale {
            return Err(Error::NotHermitian { deviation, tolerance: tol.hermiticity });
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > tol.trace || trace.im.abs() > tol.trace {
            return Err(Error::TraceNotOne { trace: trace.re, tolerance: tol.trace });
        }
        let eig = herm_eig(&mat, tol)?;
        if let Some(&min) = eig.eigenvalues.last() {
            if min < -tol.psd_floor {
                return Err(Error::NotPsd { min_eigenvalue: min, floor: tol.psd_floor });
            }
        }
        Ok(Self { n_qubits, mat })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// tr ρ².
    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    /// Number of eigenvalues above the rank threshold.
    pub fn rank(&self, threshold: f64) -> usize {
        let eig = herm_eig(&self.mat, &Tolerances::default())
            .expect("validated density matrix is Hermitian");
        eig.eigenvalues.iter().filter(|&&l| l > threshold).count()
    }
}

/// |ψ⟩⟨ψ| as a validated density matrix.
pub fn from_pure(psi: &PureState) -> DensityMatrix {
    let mat = ComplexMatrix::outer(psi.amplitudes());
    DensityMatrix::new(psi.n_qubits(), mat).expect("projector of a unit vector is a valid state")
}

/// Mixture Σ pᵢ |Bellᵢ⟩⟨Bellᵢ| in the order (Φ⁺, Φ⁻, Ψ⁺, Ψ⁻).
pub fn bell_diagonal(p: [f64; 4]) -> Result<DensityMatrix> {
    let sum: f64 = p.iter().sum();
    if p.iter().any(|&x| x < 0.0 || !x.is_finite()) || (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidDistribution { sum });
    }
    let mut mat = ComplexMatrix::zeros(4);
    for (kind, &weight) in BellKind::ALL.iter().zip(p.iter()) {
        let proj = ComplexMatrix::outer(bell_state(*kind).amplitudes());
        mat = &mat + &proj.scaled_re(weight);
    }
    DensityMatrix::new(2, mat)
}

/// The one-parameter family witnessing non-convexity of harmony: two pure
/// states ρ₊, ρ₋ supported on {|00⟩, |11⟩} and their even mixture.
///
/// ρ± = (1±x)/2 |00⟩⟨00| + √(1−x²)/2 (|00⟩⟨11| + |11⟩⟨00|) + (1∓x)/2 |11⟩⟨11|.
pub fn nonconvexity_family(x: f64) -> Result<(DensityMatrix, DensityMatrix, DensityMatrix)> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange { value: x, lo: 0.0, hi: 1.0 });
    }
    let s = (1.0 - x * x).sqrt() / 2.0;
    let corner = |d00: f64, d11: f64| {
        let mut m = ComplexMatrix::zeros(4);
        m[(0, 0)] = Complex64::new(d00, 0.0);
        m[(3, 3)] = Complex64::new(d11, 0.0);
        m[(0, 3)] = Complex64::new(s, 0.0);
        m[(3, 0)] = Complex64::new(s, 0.0);
        m
    };
    let plus = DensityMatrix::new(2, corner((1.0 + x) / 2.0, (1.0 - x) / 2.0))?;
    let minus = DensityMatrix::new(2, corner((1.0 - x) / 2.0, (1.0 + x) / 2.0))?;
    let mixture = DensityMatrix::new(2, corner(0.5, 0.5))?;
    Ok((plus, minus, mixture))
}

/// Seed material for reproducible sampling. The same spec always reproduces
/// the identical state; disjoint streams are statistically independent, so
/// campaigns parallelize by assigning one stream per sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RandomSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Same seed, shifted stream index.
    pub fn substream(&self, offset: u64) -> Self {
        Self { seed: self.seed, stream: self.stream.wrapping_add(offset) }
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

pub(crate) fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-distributed pure state: complex standard-normal vector, normalized.
pub fn random_pure(n_qubits: usize, spec: RandomSpec) -> PureState {
    assert!((1..=3).contains(&n_qubits), "register size out of range");
    let mut rng = spec.rng();
    let dim = 1 << n_qubits;
    let raw: Vec<Complex64> = (0..dim).map(|_| complex_normal(&mut rng)).collect();
    PureState::from_unnormalized(n_qubits, raw)
        .expect("normal vector is nonzero with probability one")
}

/// Induced-measure mixed state: the reduction of a Haar pure state on
/// system ⊗ rank-dimensional ancilla. Valid by construction; rank 1 gives a
/// pure projector.
pub fn random_mixed(n_qubits: usize, rank: usize, spec: RandomSpec) -> Result<DensityMatrix> {
    assert!((1..=3).contains(&n_qubits), "register size out of range");
    let dim = 1usize << n_qubits;
    if rank < 1 || rank > dim {
        return Err(Error::InvalidRank { rank, max: dim });
    }
    let mut rng = spec.rng();
    let mut m: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..rank).map(|_| complex_normal(&mut rng)).collect())
        .collect();
    let norm = m
        .iter()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    for row in &mut m {
        for z in row {
            *z /= norm;
        }
    }
    // ρ = M M† is the ancilla-traced projector of the purification.
    let mat = ComplexMatrix::from_fn(dim, |i, j| {
        (0..rank).map(|a| m[i][a] * m[j][a].conj()).sum()
    });
    DensityMatrix::new(n_qubits, mat)
}

/// Reduced state over the kept qubits (ascending order preserved).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() || kept.len() != keep.len() || kept.len() >= n || kept.iter().any(|&q| q >= n) {
        return Err(Error::InvalidSubset { n_qubits: n });
    }
    let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();

    // Qubit q occupies bit n−1−q (leftmost qubit most significant).
    let bit = |q: usize| n - 1 - q;
    let compose = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut b = 0usize;
        for (pos, &q) in kept.iter().enumerate() {
            if kept_idx >> (kept.len() - 1 - pos) & 1 == 1 {
                b |= 1 << bit(q);
            }
        }
        for (pos, &q) in traced.iter().enumerate() {
            if traced_idx >> (traced.len() - 1 - pos) & 1 == 1 {
                b |= 1 << bit(q);
            }
        }
        b
    };

    let out_dim = 1usize << kept.len();
    let env_dim = 1usize << traced.len();
    let mat = ComplexMatrix::from_fn(out_dim, |r, c| {
        (0..env_dim)
            .map(|t| rho.matrix()[(compose(r, t), compose(c, t))])
            .sum()
    });
    DensityMatrix::new(kept.len(), mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn projector_of_basis_state() {
        let rho = from_pure(&PureState::basis(2, 0));
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, 1.0);
        assert_abs_diff_eq!(rho.matrix()[(3, 3)].re, 0.0);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn bell_projector_has_quarter_corners() {
        let rho = from_pure(&bell_state(BellKind::PhiPlus));
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert_abs_diff_eq!(rho.matrix()[(i, j)].re, 0.5, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(rho.matrix()[(1, 1)].re, 0.0);
        // idempotent within 1e-10
        let sq = rho.matrix() * rho.matrix();
        assert!(sq.max_abs_diff(rho.matrix()) < 1e-10);
    }

    #[test]
    fn projector_trace_is_one() {
        let psi = random_pure(2, RandomSpec::new(7, 0));
        let rho = from_pure(&psi);
        assert_abs_diff_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn bell_states_have_standard_amplitudes() {
        let inv = FRAC_1_SQRT_2;
        let cases = [
            (BellKind::PhiPlus, [inv, 0.0, 0.0, inv]),
            (BellKind::PhiMinus, [inv, 0.0, 0.0, -inv]),
            (BellKind::PsiPlus, [0.0, inv, inv, 0.0]),
            (BellKind::PsiMinus, [0.0, inv, -inv, 0.0]),
        ];
        for (kind, want) in cases {
            let psi = bell_state(kind);
            for (amp, expect) in psi.amplitudes().iter().zip(want.iter()) {
                assert_eq!(amp.re, *expect, "{kind:?}");
                assert_eq!(amp.im, 0.0);
            }
        }
    }

    #[test]
    fn bell_diagonal_extremes() {
        let pure = bell_diagonal([1.0, 0.0, 0.0, 0.0]).unwrap();
        let bell = from_pure(&bell_state(BellKind::PhiPlus));
        assert!(pure.matrix().max_abs_diff(bell.matrix()) < 1e-15);

        let uniform = bell_diagonal([0.25; 4]).unwrap();
        let maximally_mixed = ComplexMatrix::identity(4).scaled_re(0.25);
        assert!(uniform.matrix().max_abs_diff(&maximally_mixed) < 1e-15);
    }

    #[test]
    fn bell_diagonal_rejects_bad_distribution() {
        assert!(matches!(
            bell_diagonal([0.5, 0.5, 0.5, -0.5]),
            Err(Error::InvalidDistribution { .. })
        ));
        assert!(matches!(
            bell_diagonal([0.5, 0.2, 0.2, 0.2]),
            Err(Error::InvalidDistribution { .. })
        ));
    }

    #[test]
    fn nonconvexity_boundaries() {
        let (plus, minus, mixture) = nonconvexity_family(1.0).unwrap();
        assert_abs_diff_eq!(plus.matrix()[(0, 0)].re, 1.0);
        assert_abs_diff_eq!(minus.matrix()[(3, 3)].re, 1.0);
        assert_abs_diff_eq!(mixture.matrix()[(0, 0)].re, 0.5);
        assert_abs_diff_eq!(mixture.matrix()[(0, 3)].re, 0.0);

        let (plus0, minus0, _) = nonconvexity_family(0.0).unwrap();
        let bell = from_pure(&bell_state(BellKind::PhiPlus));
        assert!(plus0.matrix().max_abs_diff(bell.matrix()) < 1e-15);
        assert!(minus0.matrix().max_abs_diff(bell.matrix()) < 1e-15);

        assert!(matches!(nonconvexity_family(1.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn nonconvexity_components_are_pure() {
        let (plus, minus, _) = nonconvexity_family(0.6).unwrap();
        assert_abs_diff_eq!(plus.purity(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(minus.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn random_pure_is_deterministic_and_normalized() {
        let a = random_pure(2, RandomSpec::new(42, 3));
        let b = random_pure(2, RandomSpec::new(42, 3));
        assert_eq!(a, b);
        let norm: f64 = a.amplitudes().iter().map(|z| z.norm_sqr()).sum();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-10);
        let c = random_pure(2, RandomSpec::new(42, 4));
        assert_ne!(a, c);
    }

    #[test]
    fn random_mixed_rank_one_is_pure() {
        let rho = random_mixed(2, 1, RandomSpec::new(5, 0)).unwrap();
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn random_mixed_rejects_bad_rank() {
        assert!(matches!(
            random_mixed(2, 5, RandomSpec::new(5, 0)),
            Err(Error::InvalidRank { .. })
        ));
    }

    #[test]
    fn haar_marginal_purity_moment() {
        // E[tr ρ_A²] over Haar 2-qubit pure states is (2+2)/(2·2+1) = 4/5;
        // confirmed here by direct sampling.
        let n = 10_000;
        let mut sum = 0.0;
        for i in 0..n {
            let rho = from_pure(&random_pure(2, RandomSpec::new(1234, i)));
            let marginal = partial_trace(&rho, &[0]).unwrap();
            sum += marginal.purity();
        }
        let mean = sum / n as f64;
        assert_abs_diff_eq!(mean, 0.8, epsilon = 0.01);
    }

    #[test]
    fn induced_measure_purity_moment() {
        // E[tr ρ²] for the rank-4 induced measure on dimension 4 is
        // (4+4)/(4·4+1) = 8/17.
        let n = 10_000;
        let mut sum = 0.0;
        for i in 0..n {
            let rho = random_mixed(2, 4, RandomSpec::new(99, i)).unwrap();
            sum += rho.purity();
        }
        let mean = sum / n as f64;
        assert_abs_diff_eq!(mean, 8.0 / 17.0, epsilon = 0.01);
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let rho = from_pure(&bell_state(BellKind::PhiPlus));
        let a = partial_trace(&rho, &[0]).unwrap();
        assert!(a.matrix().max_abs_diff(&ComplexMatrix::identity(2).scaled_re(0.5)) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_state() {
        // |0⟩⟨0| ⊗ |1⟩⟨1|: tracing out the first qubit leaves |1⟩⟨1|.
        let rho = from_pure(&PureState::basis(2, 1));
        let b = partial_trace(&rho, &[1]).unwrap();
        assert_abs_diff_eq!(b.matrix()[(1, 1)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.matrix()[(0, 0)].re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn partial_trace_of_ghz_single_qubit() {
        let rho = from_pure(&ghz_state());
        for q in 0..3 {
            let m = partial_trace(&rho, &[q]).unwrap();
            assert!(m.matrix().max_abs_diff(&ComplexMatrix::identity(2).scaled_re(0.5)) < 1e-12);
        }
    }

    #[test]
    fn partial_trace_rejects_bad_subsets() {
        let rho = from_pure(&ghz_state());
        assert!(matches!(partial_trace(&rho, &[]), Err(Error::InvalidSubset { .. })));
        assert!(matches!(partial_trace(&rho, &[0, 1, 2]), Err(Error::InvalidSubset { .. })));
        assert!(matches!(partial_trace(&rho, &[3]), Err(Error::InvalidSubset { .. })));
    }

    #[test]
    fn density_matrix_rejects_invalid_input() {
        let mut bad = ComplexMatrix::identity(4).scaled_re(0.25);
        bad[(0, 1)] = Complex64::new(0.3, 0.0);
        assert!(matches!(DensityMatrix::new(2, bad), Err(Error::NotHermitian { .. })));

        let off_trace = ComplexMatrix::identity(4).scaled_re(0.3);
        assert!(matches!(DensityMatrix::new(2, off_trace), Err(Error::TraceNotOne { .. })));

        let indefinite = ComplexMatrix::from_real_diag(&[0.7, 0.5, -0.1, -0.1]);
        assert!(matches!(DensityMatrix::new(2, indefinite), Err(Error::NotPsd { .. })));
    }
}
