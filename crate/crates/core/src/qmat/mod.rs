//! Dense complex linear algebra for the fixed small dimensions (2, 4, 8)
//! that qubit registers need: products, traces, LU determinants, Kronecker
//! products, Hermitian eigendecomposition, general eigenvalues and PSD
//! square roots.

mod dd;
mod hermitian;
mod hermitian_dd;
mod schur;

pub use hermitian::{herm_eig, psd_sqrt, HermitianEigen};
pub use hermitian_dd::sqrt_sandwich_eigvals;
pub use schur::{gen_eigvals, gen_eigvals_of_product};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest supported matrix dimension (a 3-qubit register).
pub const MAX_DIM: usize = 8;

fn assert_supported(dim: usize) {
    assert!(
        dim == 2 || dim == 4 || dim == 8,
        "unsupported matrix dimension {dim}; expected 2, 4 or 8"
    );
}

/// Square complex matrix of dimension 2, 4 or 8, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert_supported(dim);
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from rows of `[re, im]` pairs; panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        assert_supported(dim);
        Self::from_fn(dim, |i, j| {
            assert_eq!(rows[i].len(), dim, "row {i} has wrong length");
            rows[i][j]
        })
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let entries: Vec<Complex64> = diag.iter().map(|&d| Complex64::new(d, 0.0)).collect();
        Self::from_diag(&entries)
    }

    /// Rank-1 projector |v⟩⟨v| (the vector need not be normalized).
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        Self::from_fn(dim, |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conjugate(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)].conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)] * factor)
    }

    pub fn scaled_re(&self, factor: f64) -> Self {
        self.scaled(Complex64::new(factor, 0.0))
    }

    /// ‖m − m†‖_F, the absolute Hermiticity deviation.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let d = self[(i, j)] - self[(j, i)].conj();
                sum += d.norm_sqr();
            }
        }
        sum.sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Determinant by LU factorization with partial pivoting.
    ///
    /// Exactly singular inputs hit a zero pivot and return 0.
    pub fn det(&self) -> Complex64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut sign = 1.0;
        for k in 0..n {
            let mut pivot = k;
            let mut best = a[k * n + k].norm_sqr();
            for i in (k + 1)..n {
                let cand = a[i * n + k].norm_sqr();
                if cand > best {
                    best = cand;
                    pivot = i;
                }
            }
            if best == 0.0 {
                return ZERO;
            }
            if pivot != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot * n + j);
                }
                sign = -sign;
            }
            let d = a[k * n + k];
            for i in (k + 1)..n {
                let factor = a[i * n + k] / d;
                for j in k..n {
                    let t = a[k * n + j];
                    a[i * n + j] -= factor * t;
                }
            }
        }
        let mut det = Complex64::new(sign, 0.0);
        for k in 0..n {
            det *= a[k * n + k];
        }
        det
    }

    /// Kronecker product in the convention that the left factor owns the
    /// most significant qubit, i.e. basis order {|00⟩, |01⟩, |10⟩, |11⟩}.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let dim = self.dim * other.dim;
        if dim > MAX_DIM {
            return Err(Error::DimensionOverflow { dim });
        }
        Ok(Self::from_fn(dim, |i, j| {
            let (i1, i2) = (i / other.dim, i % other.dim);
            let (j1, j2) = (j / other.dim, j % other.dim);
            self[(i1, j1)] * other[(i2, j2)]
        }))
    }

    /// Matrix product with compensated (exact-product, Neumaier-summed)
    /// accumulation. Costs a few times a plain product and keeps entry
    /// errors at one final rounding, which matters when downstream code
    /// takes square roots of nearly-zero eigenvalues.
    pub fn mul_compensated(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::from_fn(self.dim, |i, j| {
            let mut re = Neumaier::default();
            let mut im = Neumaier::default();
            for k in 0..self.dim {
                let a = self[(i, k)];
                let b = other[(k, j)];
                let (p, e) = two_prod(a.re, b.re);
                re.add(p);
                re.add(e);
                let (p, e) = two_prod(a.im, b.im);
                re.add(-p);
                re.add(-e);
                let (p, e) = two_prod(a.re, b.im);
                im.add(p);
                im.add(e);
                let (p, e) = two_prod(a.im, b.re);
                im.add(p);
                im.add(e);
            }
            Complex64::new(re.value(), im.value())
        })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix::from_fn(self.dim, |i, j| self[(i, j)] + rhs[(i, j)])
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix::from_fn(self.dim, |i, j| self[(i, j)] - rhs[(i, j)])
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix::from_fn(self.dim, |i, j| {
            (0..self.dim).map(|k| self[(i, k)] * rhs[(k, j)]).sum()
        })
    }
}

/// Exact product: returns (fl(a·b), error) with a·b = fl(a·b) + error.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    const SPLIT: f64 = 134_217_729.0; // 2^27 + 1, Dekker/Veltkamp splitting
    let p = a * b;
    let ca = SPLIT * a;
    let ah = ca - (ca - a);
    let al = a - ah;
    let cb = SPLIT * b;
    let bh = cb - (cb - b);
    let bl = b - bh;
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

/// Neumaier compensated accumulator.
#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn determinant_of_identity_is_one() {
        assert_eq!(ComplexMatrix::identity(4).det(), ONE);
    }

    #[test]
    fn determinant_of_uniform_diagonal() {
        let m = ComplexMatrix::from_real_diag(&[0.25; 4]);
        assert_abs_diff_eq!(m.det().re, 1.0 / 256.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.det().im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn determinant_of_rank_deficient_projector_is_zero() {
        let mut m = ComplexMatrix::zeros(4);
        m[(0, 0)] = ONE; // |00⟩⟨00|
        assert_eq!(m.det(), ZERO);
    }

    #[test]
    fn kron_of_identities() {
        let id2 = ComplexMatrix::identity(2);
        assert_eq!(id2.kron(&id2).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_of_diagonals() {
        let a = ComplexMatrix::from_real_diag(&[2.0, 3.0]);
        let b = ComplexMatrix::from_real_diag(&[5.0, 7.0]);
        let want = ComplexMatrix::from_real_diag(&[10.0, 14.0, 15.0, 21.0]);
        assert_eq!(a.kron(&b).unwrap(), want);
    }

    #[test]
    fn kron_overflow_is_rejected() {
        let a = ComplexMatrix::identity(4);
        let b = ComplexMatrix::identity(4);
        assert_eq!(a.kron(&b), Err(Error::DimensionOverflow { dim: 16 }));
    }

    #[test]
    fn sigma_y_pair_maps_00_to_minus_11() {
        let sigma_y = ComplexMatrix::from_rows(&[
            vec![ZERO, c(0.0, -1.0)],
            vec![c(0.0, 1.0), ZERO],
        ]);
        let yy = sigma_y.kron(&sigma_y).unwrap();
        // column 0 of σ_y⊗σ_y is its action on |00⟩
        assert_eq!(yy[(0, 0)], ZERO);
        assert_eq!(yy[(1, 0)], ZERO);
        assert_eq!(yy[(2, 0)], ZERO);
        assert_eq!(yy[(3, 0)], c(-1.0, 0.0));
    }

    #[test]
    fn compensated_product_matches_plain_product() {
        let a = ComplexMatrix::from_fn(4, |i, j| c(0.1 * (i as f64 + 1.0), -0.05 * j as f64));
        let b = a.adjoint();
        let plain = &a * &b;
        let comp = a.mul_compensated(&b);
        assert!(plain.max_abs_diff(&comp) < 1e-14);
    }

    #[test]
    fn trace_is_linear_in_products() {
        let a = ComplexMatrix::from_fn(4, |i, j| c((i * 4 + j) as f64 * 0.1, 0.3 - j as f64 * 0.1));
        let b = ComplexMatrix::from_fn(4, |i, j| c(0.2 - i as f64 * 0.07, (j + i) as f64 * 0.05));
        let ab = (&a * &b).trace();
        let ba = (&b * &a).trace();
        assert_abs_diff_eq!(ab.re, ba.re, epsilon = 1e-12);
        assert_abs_diff_eq!(ab.im, ba.im, epsilon = 1e-12);
    }
}
