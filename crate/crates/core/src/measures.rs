//! Closed-form 2-qubit entanglement measures: the spin flip, disharmony and
//! harmony, the λ-spectrum, concurrence, entanglement of formation, purity,
//! von Neumann entropy, pure-state shortcuts and the H(C) envelope.
//!
//! Disharmony has three independent evaluation routes that must agree:
//! the degree-4 polynomial in ρ, the general eigenvalues of ρρ̃, and the
//! Hermitian R = √(√ρ ρ̃ √ρ) spectrum. The polynomial route is the default;
//! the spectrum routes are the verification paths.

use crate::error::{Error, Result};
use crate::qmat::{gen_eigvals_of_product, herm_eig, sqrt_sandwich_eigvals, ComplexMatrix};
use crate::states::{partial_trace, DensityMatrix, PureState};
use crate::tolerance::Tolerances;
use num_complex::Complex64;

/// The four nonnegative λᵢ of the Wootters spectrum in decreasing order.
///
/// Their sum lies in [0, 1] (up to tolerance) for any valid 2-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSpectrum {
    lambdas: [f64; 4],
}

impl LambdaSpectrum {
    /// Sorts into decreasing order; rejects negative, non-finite or
    /// sum-violating values.
    pub fn new(mut lambdas: [f64; 4]) -> Result<Self> {
        if lambdas.iter().any(|l| !l.is_finite() || *l < 0.0) {
            return Err(Error::InvalidSpectrum {
                reason: format!("λ values must be finite and nonnegative, got {lambdas:?}"),
            });
        }
        let sum: f64 = lambdas.iter().sum();
        if sum > 1.0 + 1e-9 {
            return Err(Error::InvalidSpectrum {
                reason: format!("Σλᵢ = {sum} exceeds 1"),
            });
        }
        lambdas.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { lambdas })
    }

    pub fn lambdas(&self) -> [f64; 4] {
        self.lambdas
    }

    pub fn sum(&self) -> f64 {
        self.lambdas.iter().sum()
    }
}

/// All measures of a 2-qubit state in one record.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub harmony: f64,
    pub disharmony: f64,
    pub concurrence: f64,
    /// Entanglement of formation in nats (maximum ln 2).
    pub eof: f64,
    /// Purity of the first-qubit marginal.
    pub purity_a: f64,
    pub lambda: LambdaSpectrum,
    /// Max pairwise disagreement among the three disharmony routes.
    pub route_discrepancy: f64,
    /// Set when harmony exceeds 1 by at most tolerance; the value is
    /// reported as computed rather than clipped.
    pub harmony_out_of_range: bool,
}

fn ensure_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.n_qubits() != 2 {
        return Err(Error::WrongQubitCount { expected: 2, got: rho.n_qubits() });
    }
    Ok(())
}

/// Spin-flipped density operator ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y).
///
/// σ_y⊗σ_y is a signed permutation in the product basis, so this is exact:
/// ρ̃[i][j] = s_i s_j conj(ρ[3−i][3−j]) with s = (−1, 1, 1, −1).
pub fn spin_flip(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    ensure_two_qubit(rho)?;
    Ok(spin_flip_raw(rho.matrix()))
}

pub(crate) fn spin_flip_raw(m: &ComplexMatrix) -> ComplexMatrix {
    debug_assert_eq!(m.dim(), 4);
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    ComplexMatrix::from_fn(4, |i, j| m[(3 - i, 3 - j)].conj() * (SIGN[i] * SIGN[j]))
}

/// Disharmony D = −2 tr[(ρρ̃)²] + [tr(ρρ̃)]² + 8 det ρ, a degree-4
/// polynomial in the entries of ρ.
pub fn disharmony_poly(rho: &DensityMatrix) -> Result<f64> {
    disharmony_poly_with(rho, &Tolerances::default())
}

pub fn disharmony_poly_with(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    ensure_two_qubit(rho)?;
    let flipped = spin_flip_raw(rho.matrix());
    let b = rho.matrix().mul_compensated(&flipped);
    let b2 = b.mul_compensated(&b);
    let d = b2.trace() * (-2.0) + b.trace() * b.trace() + rho.matrix().det() * 8.0;
    if d.im.abs() > tol.imag_residue {
        return Err(Error::ImaginaryResidue { residue: d.im.abs(), tolerance: tol.imag_residue });
    }
    Ok(d.re)
}

/// Harmony H = max{0, −D(ρ)}.
pub fn harmony(rho: &DensityMatrix) -> Result<f64> {
    Ok((-disharmony_poly(rho)?).max(0.0))
}

/// λ-spectrum through the general (non-Hermitian) eigenvalues of ρρ̃.
///
/// Imaginary parts within tolerance are discarded and small negative real
/// parts clamped to zero; larger violations contradict the nonnegativity of
/// the spectrum of ρρ̃ and are reported as errors rather than repaired.
pub fn lambda_spectrum(rho: &DensityMatrix) -> Result<LambdaSpectrum> {
    lambda_spectrum_with(rho, &Tolerances::default())
}

pub fn lambda_spectrum_with(rho: &DensityMatrix, tol: &Tolerances) -> Result<LambdaSpectrum> {
    ensure_two_qubit(rho)?;
    let flipped = spin_flip_raw(rho.matrix());
    let eigs = gen_eigvals_of_product(rho.matrix(), &flipped)?;
    let mut lambdas = [0.0f64; 4];
    for (slot, e) in lambdas.iter_mut().zip(eigs.iter()) {
        if e.im.abs() > tol.spectrum_imag || e.re < -tol.spectrum_neg {
            return Err(Error::SpectrumViolation {
                value: format!("{e}"),
                tolerance: tol.spectrum_imag,
            });
        }
        *slot = e.re.max(0.0).sqrt();
    }
    LambdaSpectrum::new(lambdas)
}

/// λ-spectrum through the Hermitian route: eigenvalues of
/// R = √(√ρ ρ̃ √ρ), computed by the double-double sandwich chain.
pub fn lambda_spectrum_hermitian(rho: &DensityMatrix) -> Result<LambdaSpectrum> {
    lambda_spectrum_hermitian_with(rho, &Tolerances::default())
}

pub fn lambda_spectrum_hermitian_with(
    rho: &DensityMatrix,
    tol: &Tolerances,
) -> Result<LambdaSpectrum> {
    ensure_two_qubit(rho)?;
    let flipped = spin_flip_raw(rho.matrix());
    let lambdas = sqrt_sandwich_eigvals(rho.matrix(), &flipped, tol)?;
    LambdaSpectrum::new(lambdas)
}

/// Concurrence C = max{0, λ₁ − λ₂ − λ₃ − λ₄}, clamped into [0, 1].
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    Ok(concurrence_of(&lambda_spectrum(rho)?))
}

/// Concurrence of an already-computed spectrum.
pub fn concurrence_of(lam: &LambdaSpectrum) -> f64 {
    let [l1, l2, l3, l4] = lam.lambdas();
    (l1 - l2 - l3 - l4).clamp(0.0, 1.0)
}

/// Binary entropy h(x) = −x ln x − (1−x) ln(1−x) in nats, with the
/// 0·ln 0 := 0 convention making the endpoints exactly zero.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange { value: x, lo: 0.0, hi: 1.0 });
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.ln() - (1.0 - x) * (1.0 - x).ln())
}

/// Entanglement of formation E = h((1 + √(1 − C²))/2) in nats.
///
/// Monotonically increasing in the concurrence; 0 iff C = 0 and ln 2 iff
/// C = 1.
pub fn entanglement_of_formation(rho: &DensityMatrix) -> Result<f64> {
    eof_from_concurrence(concurrence(rho)?)
}

pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::OutOfRange { value: c, lo: 0.0, hi: 1.0 });
    }
    binary_entropy((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0)
}

/// Purity γ(ρ) = tr ρ² ∈ [1/dim, 1].
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// Von Neumann entropy −Σ μᵢ ln μᵢ in nats over the Hermitian eigenvalues.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let eig = herm_eig(rho.matrix(), &Tolerances::default())
        .expect("validated density matrix is Hermitian");
    eig.eigenvalues
        .iter()
        .filter(|&&mu| mu > 0.0)
        .map(|&mu| -mu * mu.ln())
        .sum()
}

/// Spin-flipped amplitudes of a 2-qubit pure state: the basis map
/// |00⟩ ↦ −|11⟩, |11⟩ ↦ −|00⟩, |01⟩ ↦ |10⟩, |10⟩ ↦ |01⟩ applied to ψ*.
fn spin_flip_amplitudes(amps: &[Complex64]) -> [Complex64; 4] {
    [
        -amps[3].conj(),
        amps[2].conj(),
        amps[1].conj(),
        -amps[0].conj(),
    ]
}

/// Pure-state harmony |⟨ψ̃|ψ⟩|⁴, the fourth power of the concurrence.
pub fn pure_harmony(psi: &PureState) -> Result<f64> {
    if psi.n_qubits() != 2 {
        return Err(Error::WrongQubitCount { expected: 2, got: psi.n_qubits() });
    }
    let amps = psi.amplitudes();
    let flipped = spin_flip_amplitudes(amps);
    let overlap: Complex64 = flipped
        .iter()
        .zip(amps.iter())
        .map(|(f, a)| f.conj() * a)
        .sum();
    let sq = overlap.norm_sqr();
    Ok(sq * sq)
}

/// Envelope of harmony at fixed concurrence:
/// H_min(C) = C⁴ and H_max(C) = C(2+C)³/27.
pub fn harmony_bounds(c: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::OutOfRange { value: c, lo: 0.0, hi: 1.0 });
    }
    let lo = c.powi(4);
    let hi = c * (2.0 + c).powi(3) / 27.0;
    Ok((lo, hi))
}

/// Disharmony from a λ-spectrum: the symmetric four-factor product
/// (−λ₁+λ₂+λ₃+λ₄)(λ₁−λ₂+λ₃+λ₄)(λ₁+λ₂−λ₃+λ₄)(λ₁+λ₂+λ₃−λ₄),
/// which is independent of the ordering of the λᵢ.
///
/// When the concurrence is positive the equivalent factorization
/// −C(C+2λ₃+2λ₄)(C+2λ₄+2λ₂)(C+2λ₂+2λ₃) is evaluated as a cross-check.
pub fn disharmony_from_spectrum(lam: &LambdaSpectrum) -> Result<f64> {
    let [l1, l2, l3, l4] = lam.lambdas();
    let d = (-l1 + l2 + l3 + l4)
        * (l1 - l2 + l3 + l4)
        * (l1 + l2 - l3 + l4)
        * (l1 + l2 + l3 - l4);
    let c = l1 - l2 - l3 - l4;
    if c >= 0.0 {
        let by_c = c
            * (c + 2.0 * l3 + 2.0 * l4)
            * (c + 2.0 * l4 + 2.0 * l2)
            * (c + 2.0 * l2 + 2.0 * l3);
        if (-d - by_c).abs() > 1e-10 {
            return Err(Error::InvalidSpectrum {
                reason: format!(
                    "factorized forms disagree: product {d}, concurrence form {}",
                    -by_c
                ),
            });
        }
    }
    Ok(d)
}

/// Evaluates every measure plus the three-route disharmony discrepancy.
pub fn measure_report(rho: &DensityMatrix) -> Result<MeasureReport> {
    ensure_two_qubit(rho)?;
    let d_poly = disharmony_poly(rho)?;
    let lambda = lambda_spectrum(rho)?;
    let lambda_r = lambda_spectrum_hermitian(rho)?;
    let d_spec = disharmony_from_spectrum(&lambda)?;
    let d_herm = disharmony_from_spectrum(&lambda_r)?;
    let route_discrepancy = (d_poly - d_spec)
        .abs()
        .max((d_poly - d_herm).abs())
        .max((d_spec - d_herm).abs());

    let harmony = (-d_poly).max(0.0);
    let c = concurrence_of(&lambda);
    let marginal = partial_trace(rho, &[0])?;
    Ok(MeasureReport {
        harmony,
        disharmony: d_poly,
        concurrence: c,
        eof: eof_from_concurrence(c)?,
        purity_a: marginal.purity(),
        lambda,
        route_discrepancy,
        harmony_out_of_range: harmony > 1.0,
    })
}
