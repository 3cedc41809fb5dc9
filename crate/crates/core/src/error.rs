use thiserror::Error;

/// Errors surfaced by state construction, linear algebra and measure evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: ‖m − m†‖_F = {deviation:.3e} exceeds {tolerance:.1e} relative")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {min_eigenvalue:.3e} below floor {floor:.1e}")]
    NotPsd { min_eigenvalue: f64, floor: f64 },

    #[error("trace is {trace:.12} instead of 1 (tolerance {tolerance:.1e})")]
    TraceNotOne { trace: f64, tolerance: f64 },

    #[error("state vector norm is {norm:.12} instead of 1 (tolerance {tolerance:.1e})")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("QR iteration did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("Kronecker product dimension {dim} exceeds the supported maximum of 8")]
    DimensionOverflow { dim: usize },

    #[error("unsupported matrix dimension {dim}; supported dimensions are 2, 4 and 8")]
    UnsupportedDimension { dim: usize },

    #[error("operation requires an n_qubits={expected} state, got n_qubits={got}")]
    WrongQubitCount { expected: usize, got: usize },

    #[error("probabilities must be nonnegative and sum to 1: sum = {sum:.12}")]
    InvalidDistribution { sum: f64 },

    #[error("value {value} outside the admissible range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("rank {rank} outside 1..={max}")]
    InvalidRank { rank: usize, max: usize },

    #[error("kept-qubit subset must be a nonempty proper subset of 0..{n_qubits}")]
    InvalidSubset { n_qubits: usize },

    #[error("disharmony polynomial left an imaginary residue {residue:.3e} above {tolerance:.1e}")]
    ImaginaryResidue { residue: f64, tolerance: f64 },

    #[error("eigenvalue of ρρ̃ violates the nonnegative-real spectrum: {value} (tolerance {tolerance:.1e})")]
    SpectrumViolation { value: String, tolerance: f64 },

    #[error("invalid λ-spectrum: {reason}")]
    InvalidSpectrum { reason: String },

    #[error("state is not pure: tr ρ² = {purity:.12} below 1 − {tolerance:.1e}")]
    NotPure { purity: f64, tolerance: f64 },

    #[error("invalid search configuration: {reason}")]
    ConfigError { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
