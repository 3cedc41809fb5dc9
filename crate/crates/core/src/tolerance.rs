/// Numerical tolerances shared by validation and measure evaluation.
///
/// Every threshold used by the crate lives here so a caller can tighten or
/// relax the whole pipeline in one place. The defaults are the contract the
/// test suite pins down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative Frobenius bound for Hermiticity checks.
    pub hermiticity: f64,
    /// Eigenvalues of a density matrix may undershoot zero by this much and
    /// are clamped; anything lower is rejected.
    pub psd_floor: f64,
    /// Relative bound for tr ρ = 1.
    pub trace: f64,
    /// Absolute bound for ‖ψ‖₂ = 1.
    pub norm: f64,
    /// Relative reconstruction bound for eigendecompositions and matrix
    /// square roots.
    pub reconstruction: f64,
    /// Largest tolerated imaginary part of an eigenvalue of ρρ̃.
    pub spectrum_imag: f64,
    /// Eigenvalues of ρρ̃ in [−spectrum_neg, 0) are clamped to 0; lower is an error.
    pub spectrum_neg: f64,
    /// Largest tolerated imaginary residue in the disharmony polynomial.
    pub imag_residue: f64,
    /// A state counts as pure when tr ρ² ≥ 1 − purity_pure.
    pub purity_pure: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-9,
            psd_floor: 1e-9,
            trace: 1e-9,
            norm: 1e-10,
            reconstruction: 1e-8,
            spectrum_imag: 1e-8,
            spectrum_neg: 1e-8,
            imag_residue: 1e-9,
            purity_pure: 1e-9,
        }
    }
}

impl Tolerances {
    /// Tolerances with every validation threshold scaled by `factor`.
    pub fn scaled(factor: f64) -> Self {
        let d = Self::default();
        Self {
            hermiticity: d.hermiticity * factor,
            psd_floor: d.psd_floor * factor,
            trace: d.trace * factor,
            norm: d.norm * factor,
            reconstruction: d.reconstruction * factor,
            spectrum_imag: d.spectrum_imag * factor,
            spectrum_neg: d.spectrum_neg * factor,
            imag_residue: d.imag_residue * factor,
            purity_pure: d.purity_pure * factor,
        }
    }
}
