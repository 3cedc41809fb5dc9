//! General (non-Hermitian) complex eigenvalues: Householder reduction to
//! Hessenberg form followed by Wilkinson-shifted QR iteration with relative
//! deflation.
//!
//! The whole pipeline runs in double-double arithmetic. The measures built
//! on top take square roots of eigenvalues of ρρ̃ that vanish exactly for
//! rank-deficient states, so the iteration noise floor has to sit far below
//! f64 machine epsilon for those square roots to stay within their error
//! budget; see the [`dd`](super::dd) module note. Relative deflation keeps
//! the graded trailing blocks that rank-deficient products produce at their
//! own scale instead of flushing them to ε·‖m‖.

use super::dd::{Cdd, Dd};
use super::ComplexMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// QR iteration budget per matrix, as a multiple of the dimension.
const ITER_CAP_PER_DIM: usize = 100;
/// Exceptional-shift cadence when a subdiagonal refuses to die.
const EXCEPTIONAL_EVERY: usize = 10;

/// All `dim` eigenvalues with multiplicity, unordered.
pub fn gen_eigvals(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = m.dim();
    let mut h = Grid::from_matrix(m);
    hessenberg(&mut h);
    let eigs = qr_eigenvalues(&mut h)?;
    debug_assert_eq!(eigs.len(), n);
    Ok(eigs.into_iter().map(Cdd::to_c64).collect())
}

/// Eigenvalues of the product a·b with the product itself formed in
/// double-double, so that the rank structure of the factors survives into
/// the iteration.
pub fn gen_eigvals_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Vec<Complex64>> {
    assert_eq!(a.dim(), b.dim());
    let n = a.dim();
    let mut prod = Grid::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Cdd::ZERO;
            for k in 0..n {
                acc = acc.add(Cdd::from_c64(a[(i, k)]).mul(Cdd::from_c64(b[(k, j)])));
            }
            *prod.at_mut(i, j) = acc;
        }
    }
    hessenberg(&mut prod);
    Ok(qr_eigenvalues(&mut prod)?.iter().map(|z| z.to_c64()).collect())
}

/// Row-major square grid of double-double complex numbers.
struct Grid {
    n: usize,
    data: Vec<Cdd>,
}

impl Grid {
    fn zeros(n: usize) -> Self {
        Self { n, data: vec![Cdd::ZERO; n * n] }
    }

    fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let mut g = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                *g.at_mut(i, j) = Cdd::from_c64(m[(i, j)]);
            }
        }
        g
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Cdd {
        self.data[i * self.n + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut Cdd {
        &mut self.data[i * self.n + j]
    }
}

/// In-place unitary similarity reduction to upper Hessenberg form.
fn hessenberg(a: &mut Grid) {
    let n = a.n;
    for k in 0..n.saturating_sub(2) {
        let mut norm_sq = Dd::ZERO;
        for i in (k + 1)..n {
            norm_sq = norm_sq.add(a.at(i, k).norm_sqr());
        }
        if norm_sq.hi == 0.0 {
            continue;
        }
        let norm = norm_sq.sqrt();
        let x0 = a.at(k + 1, k);
        let x0n = x0.abs();
        let phase = if x0n.hi == 0.0 {
            Cdd::new(Dd::ONE, Dd::ZERO)
        } else {
            x0.div_real(x0n)
        };
        let alpha = phase.mul_real(norm).neg();

        // Householder vector v = x − α e₁ with β = 2 / ‖v‖².
        let mut v: Vec<Cdd> = ((k + 1)..n).map(|i| a.at(i, k)).collect();
        v[0] = v[0].sub(alpha);
        let mut vsq = Dd::ZERO;
        for z in &v {
            vsq = vsq.add(z.norm_sqr());
        }
        if vsq.hi == 0.0 {
            continue;
        }
        let beta = Dd::from_f64(2.0).div(vsq);

        // Rows k+1..n: A ← PA with P = I − β v v†.
        for j in 0..n {
            let mut dot = Cdd::ZERO;
            for i in (k + 1)..n {
                dot = dot.add(v[i - k - 1].conj().mul(a.at(i, j)));
            }
            let dot = dot.mul_real(beta);
            for i in (k + 1)..n {
                let upd = v[i - k - 1].mul(dot);
                *a.at_mut(i, j) = a.at(i, j).sub(upd);
            }
        }
        // Columns k+1..n: A ← AP.
        for i in 0..n {
            let mut dot = Cdd::ZERO;
            for j in (k + 1)..n {
                dot = dot.add(a.at(i, j).mul(v[j - k - 1]));
            }
            let dot = dot.mul_real(beta);
            for j in (k + 1)..n {
                let upd = dot.mul(v[j - k - 1].conj());
                *a.at_mut(i, j) = a.at(i, j).sub(upd);
            }
        }
        // The eliminated column holds exactly the reflected value.
        *a.at_mut(k + 1, k) = alpha;
        for i in (k + 2)..n {
            *a.at_mut(i, k) = Cdd::ZERO;
        }
    }
}

/// Shifted QR on a Hessenberg grid; consumes it and returns eigenvalues.
fn qr_eigenvalues(h: &mut Grid) -> Result<Vec<Cdd>> {
    let n = h.n;
    let cap = ITER_CAP_PER_DIM * n;
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut total_iters = 0usize;
    let mut iters_this_block = 0usize;

    loop {
        // Deflate all converged trailing eigenvalues.
        loop {
            if hi == 0 {
                eigs.push(h.at(0, 0));
                return Ok(eigs);
            }
            if negligible(h, hi) {
                eigs.push(h.at(hi, hi));
                hi -= 1;
                iters_this_block = 0;
            } else {
                break;
            }
        }

        // Active block [lo..=hi].
        let mut lo = hi;
        while lo > 0 && !negligible(h, lo) {
            lo -= 1;
        }

        if lo == hi - 1 {
            let (e1, e2) = eig2(h.at(lo, lo), h.at(lo, hi), h.at(hi, lo), h.at(hi, hi));
            eigs.push(e1);
            eigs.push(e2);
            if lo == 0 {
                return Ok(eigs);
            }
            hi = lo - 1;
            iters_this_block = 0;
            continue;
        }

        if total_iters >= cap {
            return Err(Error::NonConvergence { iterations: cap });
        }
        total_iters += 1;
        iters_this_block += 1;

        let shift = if iters_this_block.is_multiple_of(EXCEPTIONAL_EVERY) {
            // Exceptional shift to break rare symmetric stalls.
            let kick = h.at(hi, hi - 1).abs().mul_f64(0.75);
            h.at(hi, hi).add(Cdd::new(kick, Dd::ZERO))
        } else {
            wilkinson_shift(h, hi)
        };
        qr_step(h, lo, hi, shift);
    }
}

/// Relative smallness test for subdiagonal entry (i, i−1); comparisons in
/// f64 are plenty for a deflation decision.
fn negligible(h: &Grid, i: usize) -> bool {
    let sub = h.at(i, i - 1).norm_sqr().to_f64().sqrt();
    if sub == 0.0 {
        return true;
    }
    let mut local =
        h.at(i - 1, i - 1).norm_sqr().to_f64().sqrt() + h.at(i, i).norm_sqr().to_f64().sqrt();
    if local == 0.0 {
        local = h.at(i - 1, i).norm_sqr().to_f64().sqrt().max(f64::MIN_POSITIVE);
    }
    sub <= f64::EPSILON * local
}

/// Eigenvalue of the trailing 2×2 closest to the corner entry.
fn wilkinson_shift(h: &Grid, hi: usize) -> Cdd {
    let (e1, e2) = eig2(
        h.at(hi - 1, hi - 1),
        h.at(hi - 1, hi),
        h.at(hi, hi - 1),
        h.at(hi, hi),
    );
    let corner = h.at(hi, hi);
    let d1 = e1.sub(corner).norm_sqr().to_f64();
    let d2 = e2.sub(corner).norm_sqr().to_f64();
    if d1 <= d2 {
        e1
    } else {
        e2
    }
}

/// Eigenvalues of [[a, b], [c, d]]; the smaller root comes from the
/// determinant to dodge cancellation.
fn eig2(a: Cdd, b: Cdd, c: Cdd, d: Cdd) -> (Cdd, Cdd) {
    let tr = a.add(d);
    let det = a.mul(d).sub(b.mul(c));
    let diff = a.sub(d);
    let disc = diff.mul(diff).add(b.mul(c).mul_real(Dd::from_f64(4.0))).sqrt();
    let half = Dd::from_f64(0.5);
    let r1 = tr.add(disc).mul_real(half);
    let r2 = tr.sub(disc).mul_real(half);
    let (big, other) = if r1.norm_sqr().to_f64() >= r2.norm_sqr().to_f64() {
        (r1, r2)
    } else {
        (r2, r1)
    };
    if big.norm_sqr().hi == 0.0 {
        return (r1, other);
    }
    (big, det.div(big))
}

/// One explicit shifted QR sweep on the active block [lo..=hi].
fn qr_step(h: &mut Grid, lo: usize, hi: usize, shift: Cdd) {
    for i in lo..=hi {
        *h.at_mut(i, i) = h.at(i, i).sub(shift);
    }

    // Q†(H − μI) = R by a chain of Givens rotations.
    let mut rotations = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let (c, s) = givens(h.at(i, i), h.at(i + 1, i));
        for j in i..=hi {
            let x = h.at(i, j);
            let y = h.at(i + 1, j);
            *h.at_mut(i, j) = x.mul_real(c).add(y.mul(s));
            *h.at_mut(i + 1, j) = y.mul_real(c).sub(x.mul(s.conj()));
        }
        *h.at_mut(i + 1, i) = Cdd::ZERO;
        rotations.push((c, s));
    }

    // H ← RQ + μI.
    for (idx, &(c, s)) in rotations.iter().enumerate() {
        let col = lo + idx;
        let last = (col + 1).min(hi);
        for r in lo..=last {
            let x = h.at(r, col);
            let y = h.at(r, col + 1);
            *h.at_mut(r, col) = x.mul_real(c).add(y.mul(s.conj()));
            *h.at_mut(r, col + 1) = y.mul_real(c).sub(x.mul(s));
        }
    }
    for i in lo..=hi {
        *h.at_mut(i, i) = h.at(i, i).add(shift);
    }
}

/// Complex Givens pair (c real, s complex) with
/// [[c, s], [−s̄, c]]·[f, g]ᵀ = [r, 0]ᵀ.
fn givens(f: Cdd, g: Cdd) -> (Dd, Cdd) {
    let gn2 = g.norm_sqr();
    if gn2.hi == 0.0 {
        return (Dd::ONE, Cdd::ZERO);
    }
    let fn2 = f.norm_sqr();
    if fn2.hi == 0.0 {
        let gn = gn2.sqrt();
        return (Dd::ZERO, g.conj().div_real(gn));
    }
    let fnorm = fn2.sqrt();
    let h = fn2.add(gn2).sqrt();
    let c = fnorm.div(h);
    let s = f.div_real(fnorm).mul(g.conj()).div_real(h);
    (c, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_by_norm(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
        v
    }

    #[test]
    fn diagonal_matrix_eigenvalues() {
        let m = ComplexMatrix::from_diag(&[c(3.0, 0.0), c(1.0, 2.0)]);
        let eigs = sorted_by_norm(gen_eigvals(&m).unwrap());
        assert_abs_diff_eq!(eigs[0].re, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1].im, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn scalar_matrix_eigenvalues() {
        let m = ComplexMatrix::identity(4).scaled_re(1.0 / 16.0);
        let eigs = gen_eigvals(&m).unwrap();
        assert_eq!(eigs.len(), 4);
        for e in eigs {
            assert_abs_diff_eq!(e.re, 1.0 / 16.0, epsilon = 1e-14);
            assert_abs_diff_eq!(e.im, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        let m = ComplexMatrix::from_fn(4, |i, j| {
            c(
                ((i * 31 + j * 17) % 13) as f64 / 13.0 - 0.5,
                ((i * 7 + j * 29) % 11) as f64 / 11.0 - 0.5,
            )
        });
        let eigs = gen_eigvals(&m).unwrap();
        let sum: Complex64 = eigs.iter().sum();
        let tr = m.trace();
        assert_abs_diff_eq!(sum.re, tr.re, epsilon = 1e-9);
        assert_abs_diff_eq!(sum.im, tr.im, epsilon = 1e-9);
    }

    #[test]
    fn rank_one_bell_product_spectrum() {
        // ρρ̃ for the Φ⁺ projector equals ρ itself: eigenvalues {1, 0, 0, 0},
        // and the zeros must come out far below f64 epsilon.
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [c(inv, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(inv, 0.0)];
        let rho = ComplexMatrix::outer(&bell);
        let eigs = sorted_by_norm(gen_eigvals_of_product(&rho, &rho).unwrap());
        assert_abs_diff_eq!(eigs[0].re, 1.0, epsilon = 1e-14);
        for e in &eigs[1..] {
            assert!(e.norm() < 1e-25, "spurious eigenvalue {e}");
        }
    }

    #[test]
    fn defective_jordan_block_converges() {
        // Worst case for shifted QR: a nilpotent lower-shift matrix, which
        // stalls without exceptional shifts. The quadruple defective zero is
        // determined only to about ‖m‖·ε_dd^(1/4).
        let mut m = ComplexMatrix::zeros(4);
        for i in 0..3 {
            m[(i + 1, i)] = c(1.0, 0.0);
        }
        let eigs = gen_eigvals(&m).unwrap();
        for e in eigs {
            assert!(e.norm() < 1e-6, "Jordan block eigenvalue too large: {e}");
        }
    }

    #[test]
    fn eight_dimensional_random_matrix_trace_check() {
        let m = ComplexMatrix::from_fn(8, |i, j| {
            c(
                (((i + 3) * (j + 7)) % 23) as f64 / 23.0 - 0.4,
                (((i + 5) * (j + 11)) % 19) as f64 / 19.0 - 0.6,
            )
        });
        let eigs = gen_eigvals(&m).unwrap();
        assert_eq!(eigs.len(), 8);
        let sum: Complex64 = eigs.iter().sum();
        let tr = m.trace();
        assert_abs_diff_eq!(sum.re, tr.re, epsilon = 1e-9);
        assert_abs_diff_eq!(sum.im, tr.im, epsilon = 1e-9);
    }

    #[test]
    fn product_eigenvalues_match_direct_eigenvalues() {
        let a = ComplexMatrix::from_fn(4, |i, j| c(0.2 * (i as f64 - j as f64), 0.1 * (i + j) as f64));
        let b = a.adjoint();
        let direct = sorted_by_norm(gen_eigvals(&(&a * &b)).unwrap());
        let fused = sorted_by_norm(gen_eigvals_of_product(&a, &b).unwrap());
        for (x, y) in direct.iter().zip(fused.iter()) {
            assert!((x - y).norm() < 1e-10, "{x} vs {y}");
        }
    }
}
