//! Entanglement numerics for 2- and 3-qubit density matrices: harmony and
//! disharmony, the Wootters λ-spectrum, concurrence, entanglement of
//! formation, monogamy inequalities, and the independent verification
//! oracles that cross-check each closed form.
//!
//! The crate is organized along the computation pipeline:
//!
//! - [`qmat`]: dense complex matrices of dimension 2/4/8 with LU
//!   determinants, Hermitian (Jacobi) and general (Hessenberg + shifted QR)
//!   eigensolvers, and PSD square roots;
//! - [`states`]: pure states, validated density matrices, Bell and GHZ/W
//!   constructions, seeded Haar / induced-measure sampling, partial trace;
//! - [`measures`]: the closed-form measures and their envelope bounds;
//! - [`monogamy`]: 3-qubit marginal harmonies and monogamy inequalities;
//! - [`verify`]: decomposition-search and Monte Carlo oracles.
//!
//! Everything is a pure function of immutable inputs; sampling is
//! reproducible from explicit (seed, stream) pairs and parallelizes by
//! assigning disjoint streams.

pub mod error;
pub mod measures;
pub mod monogamy;
pub mod qmat;
pub mod states;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use measures::{LambdaSpectrum, MeasureReport};
pub use monogamy::MonogamyReport;
pub use qmat::ComplexMatrix;
pub use states::{BellKind, DensityMatrix, PureState, RandomSpec};
pub use tolerance::Tolerances;
pub use verify::{DecompositionSearchConfig, VerificationReport};

pub use num_complex::Complex64;
