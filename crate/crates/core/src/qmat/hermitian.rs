//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! PSD matrix square root built on top of it. Jacobi is unbeatable for the
//! dimensions here (≤ 8): simple, unconditionally convergent and accurate to
//! a few ulps.

use super::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;
use num_complex::Complex64;

const MAX_SWEEPS: usize = 60;

/// Eigenvalues in decreasing order with matching orthonormal eigenvector
/// columns: m = V Λ V†.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Rejects inputs whose Hermiticity deviation exceeds
/// `tol.hermiticity · max(1, ‖m‖_F)`.
pub fn herm_eig(m: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    let scale = m.frobenius_norm().max(1.0);
    let deviation = m.hermiticity_deviation();
    if deviation > tol.hermiticity * scale {
        return Err(Error::NotHermitian { deviation, tolerance: tol.hermiticity });
    }

    let n = m.dim();
    // Work on the exactly Hermitian part; the deviation is within tolerance.
    let mut a = ComplexMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);

    let off_target = f64::EPSILON * a.frobenius_norm().max(f64::MIN_POSITIVE);
    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += 2.0 * a[(i, j)].norm_sqr();
            }
        }
        if off.sqrt() <= off_target {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { eigenvalues, eigenvectors })
}

/// One Jacobi rotation annihilating a[p][q] (and a[q][p]).
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // a'[p][q] ∝ r·cos2θ + cosθ·sinθ·(a_qq − a_pp) vanishes at this θ.
    let theta = 0.5 * (2.0 * r).atan2(app - aqq);
    let c = theta.cos();
    let s = theta.sin();
    let phase = apq / r;

    let n = a.dim();
    // A ← J†AJ with the (p,q) block of J = [[c, −s·phase], [s·conj(phase), c]].
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * c + aiq * s * phase.conj();
        a[(i, q)] = aip * (-s) * phase + aiq * c;
    }
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = apj * c + aqj * s * phase;
        a[(q, j)] = apj * (-s) * phase.conj() + aqj * c;
    }
    // Restore the exact Hermitian pattern the rotation targets.
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * c + viq * s * phase.conj();
        v[(i, q)] = vip * (-s) * phase + viq * c;
    }
}

/// Hermitian PSD square root S with S·S ≈ m.
///
/// Eigenvalues in [−tol.psd_floor, 0) are clamped to zero; anything below the
/// floor is rejected as not PSD.
pub fn psd_sqrt(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = herm_eig(m, tol)?;
    let mut roots = Vec::with_capacity(eig.eigenvalues.len());
    for &lambda in &eig.eigenvalues {
        if lambda < -tol.psd_floor {
            return Err(Error::NotPsd { min_eigenvalue: lambda, floor: tol.psd_floor });
        }
        roots.push(lambda.max(0.0).sqrt());
    }
    let n = m.dim();
    let v = &eig.eigenvectors;
    let mut s = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = ZERO;
            for (k, &root) in roots.iter().enumerate() {
                acc += v[(i, k)] * root * v[(j, k)].conj();
            }
            s[(i, j)] = acc;
        }
    }
    // Symmetrize away the assembly rounding.
    Ok(ComplexMatrix::from_fn(n, |i, j| (s[(i, j)] + s[(j, i)].conj()) * 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruction_error(m: &ComplexMatrix, eig: &HermitianEigen) -> f64 {
        let lambda = ComplexMatrix::from_real_diag(&eig.eigenvalues);
        let rebuilt = &(&eig.eigenvectors * &lambda) * &eig.eigenvectors.adjoint();
        (&rebuilt - m).frobenius_norm()
    }

    #[test]
    fn identity_eigenvalues() {
        let id = ComplexMatrix::identity(2);
        let eig = herm_eig(&id, &Tolerances::default()).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn diagonal_eigenvalues_sorted_with_standard_basis() {
        let m = ComplexMatrix::from_real_diag(&[1.0 / 3.0, 2.0 / 3.0]);
        let eig = herm_eig(&m, &Tolerances::default()).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eig.eigenvalues[1], 1.0 / 3.0, epsilon = 1e-15);
        // columns are the swapped standard basis
        assert_abs_diff_eq!(eig.eigenvectors[(1, 0)].norm(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.eigenvectors[(0, 1)].norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn bell_projector_spectrum_is_rank_one() {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [c(inv, 0.0), ZERO, ZERO, c(inv, 0.0)];
        let m = ComplexMatrix::outer(&bell);
        let eig = herm_eig(&m, &Tolerances::default()).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], 1.0, epsilon = 1e-14);
        for &l in &eig.eigenvalues[1..] {
            assert_abs_diff_eq!(l, 0.0, epsilon = 1e-14);
        }
        assert!(reconstruction_error(&m, &eig) <= 1e-9);
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.4, 0.0), c(0.1, 0.2), c(0.0, -0.1), c(0.05, 0.0)],
            vec![c(0.1, -0.2), c(0.3, 0.0), c(0.02, 0.03), ZERO],
            vec![c(0.0, 0.1), c(0.02, -0.03), c(0.2, 0.0), c(0.0, 0.07)],
            vec![c(0.05, 0.0), ZERO, c(0.0, -0.07), c(0.1, 0.0)],
        ]);
        let eig = herm_eig(&m, &Tolerances::default()).unwrap();
        assert!(reconstruction_error(&m, &eig) <= 1e-9 * m.frobenius_norm().max(1.0));
        // orthonormal columns
        let vtv = &eig.eigenvectors.adjoint() * &eig.eigenvectors;
        assert!(vtv.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-13);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(
            herm_eig(&m, &Tolerances::default()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn sqrt_of_identity() {
        let id = ComplexMatrix::identity(4);
        let s = psd_sqrt(&id, &Tolerances::default()).unwrap();
        assert!(s.max_abs_diff(&id) < 1e-14);
    }

    #[test]
    fn sqrt_of_diagonal() {
        let m = ComplexMatrix::from_real_diag(&[4.0, 9.0]);
        let s = psd_sqrt(&m, &Tolerances::default()).unwrap();
        let want = ComplexMatrix::from_real_diag(&[2.0, 3.0]);
        assert!(s.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn sqrt_of_projector_is_itself() {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [c(inv, 0.0), ZERO, ZERO, c(inv, 0.0)];
        let m = ComplexMatrix::outer(&bell);
        let s = psd_sqrt(&m, &Tolerances::default()).unwrap();
        assert!(s.max_abs_diff(&m) < 1e-13);
    }

    #[test]
    fn sqrt_rejects_indefinite_input() {
        let m = ComplexMatrix::from_real_diag(&[1.0, -0.5]);
        assert!(matches!(
            psd_sqrt(&m, &Tolerances::default()),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn identity_times_scalar_has_flat_spectrum() {
        let m = ComplexMatrix::identity(4).scaled_re(1.0 / 16.0);
        let eig = herm_eig(&m, &Tolerances::default()).unwrap();
        for &l in &eig.eigenvalues {
            assert_abs_diff_eq!(l, 1.0 / 16.0, epsilon = 1e-15);
        }
    }
}
