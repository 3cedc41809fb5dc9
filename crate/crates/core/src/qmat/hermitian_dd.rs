//! Double-double 4×4 Hermitian Jacobi, used by the R = √(√ρ ρ̃ √ρ) spectrum
//! route. Like the QR pipeline, this route takes square roots of eigenvalues
//! that can sit at the rounding floor: states with a true λ₄ near 1e−8 put
//! the matching eigenvalue of R² near 1e−16, where f64 Jacobi noise costs
//! several 1e−9 in the disharmony. Double-double keeps the whole chain well
//! inside the 1e−9 route-agreement budget.

// index loops mirror the (p,q)-symmetric matrix updates
#![allow(clippy::needless_range_loop)]

use super::dd::{Cdd, Dd};
use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

const N: usize = 4;
const MAX_SWEEPS: usize = 40;

type Mat = [[Cdd; N]; N];

fn from_matrix(m: &ComplexMatrix) -> Mat {
    let mut out = [[Cdd::ZERO; N]; N];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = Cdd::from_c64(m[(i, j)]);
        }
    }
    out
}

fn hermitize(a: &mut Mat) {
    let half = Dd::from_f64(0.5);
    for i in 0..N {
        a[i][i].im = Dd::ZERO;
        for j in (i + 1)..N {
            let avg = a[i][j].add(a[j][i].conj()).mul_real(half);
            a[i][j] = avg;
            a[j][i] = avg.conj();
        }
    }
}

fn off_norm_sqr(a: &Mat) -> f64 {
    let mut off = 0.0;
    for i in 0..N {
        for j in (i + 1)..N {
            off += 2.0 * a[i][j].norm_sqr().to_f64();
        }
    }
    off
}

fn frobenius_sqr(a: &Mat) -> f64 {
    let mut sum = 0.0;
    for row in a {
        for z in row {
            sum += z.norm_sqr().to_f64();
        }
    }
    sum
}

/// Eigenvalues (decreasing) and eigenvector columns of a Hermitian matrix.
fn jacobi(mut a: Mat) -> ([Dd; N], Mat) {
    hermitize(&mut a);
    let mut v = [[Cdd::ZERO; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = Cdd::new(Dd::ONE, Dd::ZERO);
    }

    // target: off-diagonal mass at the double-double noise floor
    let target = frobenius_sqr(&a) * 1e-60 + f64::MIN_POSITIVE;
    for _sweep in 0..MAX_SWEEPS {
        if off_norm_sqr(&a) <= target {
            break;
        }
        for p in 0..N - 1 {
            for q in (p + 1)..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[j][j].re.to_f64().total_cmp(&a[i][i].re.to_f64()));
    let mut eigs = [Dd::ZERO; N];
    let mut vecs = [[Cdd::ZERO; N]; N];
    for (slot, &src) in order.iter().enumerate() {
        eigs[slot] = a[src][src].re;
        for i in 0..N {
            vecs[i][slot] = v[i][src];
        }
    }
    (eigs, vecs)
}

fn rotate(a: &mut Mat, v: &mut Mat, p: usize, q: usize) {
    let apq = a[p][q];
    let r2 = apq.norm_sqr();
    if r2.hi == 0.0 {
        return;
    }
    let r = r2.sqrt();
    let app = a[p][p].re;
    let aqq = a[q][q].re;

    // t = tan θ from cot 2θ = (a_pp − a_qq)/(2r), |θ| ≤ π/4.
    let tau = app.sub(aqq).div(r.mul_f64(2.0));
    let root = tau.mul(tau).add(Dd::ONE).sqrt();
    let t_mag = Dd::ONE.div(tau.abs().add(root));
    let t = if tau.hi < 0.0 || (tau.hi == 0.0 && tau.lo < 0.0) { t_mag.neg() } else { t_mag };
    let c = Dd::ONE.div(t.mul(t).add(Dd::ONE).sqrt());
    let s = t.mul(c);
    let phase = apq.div_real(r);

    // A ← J†AJ with the (p,q) block of J = [[c, −s·phase], [s·conj(phase), c]].
    for i in 0..N {
        let aip = a[i][p];
        let aiq = a[i][q];
        a[i][p] = aip.mul_real(c).add(aiq.mul(phase.conj()).mul_real(s));
        a[i][q] = aiq.mul_real(c).sub(aip.mul(phase).mul_real(s));
    }
    for j in 0..N {
        let apj = a[p][j];
        let aqj = a[q][j];
        a[p][j] = apj.mul_real(c).add(aqj.mul(phase).mul_real(s));
        a[q][j] = aqj.mul_real(c).sub(apj.mul(phase.conj()).mul_real(s));
    }
    a[p][q] = Cdd::ZERO;
    a[q][p] = Cdd::ZERO;
    a[p][p].im = Dd::ZERO;
    a[q][q].im = Dd::ZERO;

    for i in 0..N {
        let vip = v[i][p];
        let viq = v[i][q];
        v[i][p] = vip.mul_real(c).add(viq.mul(phase.conj()).mul_real(s));
        v[i][q] = viq.mul_real(c).sub(vip.mul(phase).mul_real(s));
    }
}

/// V f(Λ) V† for a spectral decomposition and clamped square-root weights.
fn assemble_sqrt(eigs: &[Dd; N], vecs: &Mat) -> Mat {
    let mut roots = [Dd::ZERO; N];
    for (slot, &mu) in roots.iter_mut().zip(eigs.iter()) {
        *slot = if mu.hi > 0.0 || (mu.hi == 0.0 && mu.lo > 0.0) { mu.sqrt() } else { Dd::ZERO };
    }
    let mut out = [[Cdd::ZERO; N]; N];
    for i in 0..N {
        for j in 0..N {
            let mut acc = Cdd::ZERO;
            for (k, &root) in roots.iter().enumerate() {
                acc = acc.add(vecs[i][k].mul(vecs[j][k].conj()).mul_real(root));
            }
            out[i][j] = acc;
        }
    }
    out
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut out = [[Cdd::ZERO; N]; N];
    for i in 0..N {
        for j in 0..N {
            let mut acc = Cdd::ZERO;
            for (k, brow) in b.iter().enumerate() {
                acc = acc.add(a[i][k].mul(brow[j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Eigenvalues, in decreasing order, of R = √(√a · b · √a) for Hermitian
/// PSD 4×4 inputs, computed end-to-end in double-double arithmetic.
///
/// `a` must be PSD within the tolerance floor; eigenvalues of intermediate
/// matrices in [−floor, 0) are clamped to zero exactly as in [`psd_sqrt`].
///
/// [`psd_sqrt`]: super::psd_sqrt
pub fn sqrt_sandwich_eigvals(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<[f64; 4]> {
    assert_eq!(a.dim(), N);
    assert_eq!(b.dim(), N);

    let (eigs_a, vecs_a) = jacobi(from_matrix(a));
    let min = eigs_a[N - 1].to_f64();
    if min < -tol.psd_floor {
        return Err(Error::NotPsd { min_eigenvalue: min, floor: tol.psd_floor });
    }
    let sqrt_a = assemble_sqrt(&eigs_a, &vecs_a);

    let m = mat_mul(&mat_mul(&sqrt_a, &from_matrix(b)), &sqrt_a);
    let (eigs_m, vecs_m) = jacobi(m);
    let min_m = eigs_m[N - 1].to_f64();
    if min_m < -tol.psd_floor {
        return Err(Error::NotPsd { min_eigenvalue: min_m, floor: tol.psd_floor });
    }
    let r = assemble_sqrt(&eigs_m, &vecs_m);

    let (eigs_r, _) = jacobi(r);
    let mut out = [0.0; 4];
    for (slot, &mu) in out.iter_mut().zip(eigs_r.iter()) {
        *slot = mu.to_f64().max(0.0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    #[test]
    fn diagonal_sandwich_takes_square_roots() {
        let a = ComplexMatrix::from_real_diag(&[1.0, 1.0, 1.0, 1.0]);
        let b = ComplexMatrix::from_real_diag(&[0.16, 0.09, 0.04, 0.01]);
        let lam = sqrt_sandwich_eigvals(&a, &b, &Tolerances::default()).unwrap();
        assert_abs_diff_eq!(lam[0], 0.4, epsilon = 1e-28);
        assert_abs_diff_eq!(lam[1], 0.3, epsilon = 1e-28);
        assert_abs_diff_eq!(lam[2], 0.2, epsilon = 1e-28);
        assert_abs_diff_eq!(lam[3], 0.1, epsilon = 1e-28);
    }

    #[test]
    fn complex_hermitian_sandwich_matches_f64_route() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let g = ComplexMatrix::from_fn(4, |i, j| c(0.812f64.powi((i + 2 * j) as i32) - 0.5, 0.3 * (i as f64 - j as f64)));
        let a0 = &g.adjoint() * &g;
        let a = a0.scaled_re(1.0 / a0.trace().re);
        let b0 = ComplexMatrix::from_fn(4, |i, j| c(((i * j + 1) as f64).sin(), ((i + 3 * j) as f64).cos()));
        let b1 = &b0.adjoint() * &b0;
        let b = b1.scaled_re(1.0 / b1.trace().re);

        let dd = sqrt_sandwich_eigvals(&a, &b, &Tolerances::default()).unwrap();

        let tol = Tolerances::default();
        let sa = super::super::psd_sqrt(&a, &tol).unwrap();
        let m = &(&sa * &b) * &sa;
        let r = super::super::psd_sqrt(&m, &tol).unwrap();
        let f64_route = super::super::herm_eig(&r, &tol).unwrap().eigenvalues;

        for (x, y) in dd.iter().zip(f64_route.iter()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-7);
        }
    }

    #[test]
    fn rejects_indefinite_outer_factor() {
        let a = ComplexMatrix::from_real_diag(&[1.0, 1.0, 1.0, -0.5]);
        let b = ComplexMatrix::identity(4);
        assert!(matches!(
            sqrt_sandwich_eigvals(&a, &b, &Tolerances::default()),
            Err(Error::NotPsd { .. })
        ));
    }
}
