//! Double-double arithmetic (~31 significant decimal digits) for the
//! eigenvalue pipeline. The λ-spectrum takes square roots of eigenvalues of
//! ρρ̃ that are exactly zero for rank-deficient states; f64 eigensolver noise
//! at 1e−17 would surface as λ ≈ 3e−9 and eat the error budget, while the
//! double-double pipeline keeps the spurious eigenvalues near 1e−31.
//!
//! Only the operations the Hessenberg/QR code needs are implemented.

/// Unevaluated sum hi + lo with |lo| ≤ ½ulp(hi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| ≥ |b|
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    (s, (a - (s - v)) + (b - v))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    const SPLIT: f64 = 134_217_729.0; // 2^27 + 1
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

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, o: f64) -> Dd {
        let (p, e) = two_prod(self.hi, o);
        let e = e + self.lo * o;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
        Dd { hi, lo }
    }

    /// √x by one double-double Newton correction of the f64 root.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        debug_assert!(self.hi > 0.0, "sqrt of negative double-double");
        let approx = self.hi.sqrt();
        // s + (x − s²)/(2s)
        let s = Dd::from_f64(approx);
        let corr = self.sub(s.mul(s)).div(s.mul_f64(2.0));
        s.add(corr)
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

}

/// Complex number with double-double components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };

    #[inline]
    pub fn new(re: Dd, im: Dd) -> Cdd {
        Cdd { re, im }
    }

    #[inline]
    pub fn from_c64(z: num_complex::Complex64) -> Cdd {
        Cdd { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    #[inline]
    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn add(self, o: Cdd) -> Cdd {
        Cdd { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    #[inline]
    pub fn sub(self, o: Cdd) -> Cdd {
        Cdd { re: self.re.sub(o.re), im: self.im.sub(o.im) }
    }

    #[inline]
    pub fn neg(self) -> Cdd {
        Cdd { re: self.re.neg(), im: self.im.neg() }
    }

    #[inline]
    pub fn conj(self) -> Cdd {
        Cdd { re: self.re, im: self.im.neg() }
    }

    #[inline]
    pub fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    #[inline]
    pub fn mul_real(self, o: Dd) -> Cdd {
        Cdd { re: self.re.mul(o), im: self.im.mul(o) }
    }

    pub fn div(self, o: Cdd) -> Cdd {
        let denom = o.norm_sqr();
        let num = self.mul(o.conj());
        Cdd { re: num.re.div(denom), im: num.im.div(denom) }
    }

    pub fn div_real(self, o: Dd) -> Cdd {
        Cdd { re: self.re.div(o), im: self.im.div(o) }
    }

    #[inline]
    pub fn norm_sqr(self) -> Dd {
        self.re.mul(self.re).add(self.im.mul(self.im))
    }

    pub fn abs(self) -> Dd {
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.re.hi == 0.0 && self.re.lo == 0.0 && self.im.hi == 0.0 && self.im.lo == 0.0
    }

    /// Principal square root.
    pub fn sqrt(self) -> Cdd {
        if self.is_zero() {
            return Cdd::ZERO;
        }
        let r = self.abs();
        let x = self.re;
        let y = self.im;
        // t = √((r + |x|)/2) pairs with |y|/(2t) for the other component.
        let t = r.add(x.abs()).div(Dd::from_f64(2.0)).sqrt();
        if !x.hi.is_sign_negative() {
            let im = y.div(t.mul_f64(2.0));
            Cdd { re: t, im }
        } else {
            let re = y.abs().div(t.mul_f64(2.0));
            let im = if y.hi < 0.0 || (y.hi == 0.0 && y.lo < 0.0) { t.neg() } else { t };
            Cdd { re, im }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Dd, b: f64, eps: f64) -> bool {
        (a.to_f64() - b).abs() <= eps
    }

    #[test]
    fn third_times_three_is_one() {
        let third = Dd::ONE.div(Dd::from_f64(3.0));
        let one = third.mul_f64(3.0);
        assert!((one.hi - 1.0).abs() < 1e-30 && one.lo.abs() < 1e-16);
        let residual = one.sub(Dd::ONE);
        assert!(residual.to_f64().abs() < 1e-30);
    }

    #[test]
    fn sqrt_two_squares_back() {
        let two = Dd::from_f64(2.0);
        let root = two.sqrt();
        let sq = root.mul(root);
        let residual = sq.sub(two);
        assert!(residual.to_f64().abs() < 1e-30, "residual {}", residual.to_f64());
    }

    #[test]
    fn addition_keeps_small_terms() {
        let big = Dd::from_f64(1.0);
        let small = Dd::from_f64(1e-25);
        let sum = big.add(small);
        let back = sum.sub(big);
        assert!(close(back, 1e-25, 1e-40));
    }

    #[test]
    fn complex_product_and_division_roundtrip() {
        let a = Cdd::from_c64(num_complex::Complex64::new(0.3, -0.7));
        let b = Cdd::from_c64(num_complex::Complex64::new(-1.2, 0.4));
        let prod = a.mul(b);
        let back = prod.div(b);
        assert!((back.re.to_f64() - 0.3).abs() < 1e-30);
        assert!((back.im.to_f64() + 0.7).abs() < 1e-30);
    }

    #[test]
    fn complex_sqrt_squares_back() {
        for (re, im) in [(2.0, 3.0), (-2.0, 3.0), (-2.0, -3.0), (4.0, 0.0), (-4.0, 0.0)] {
            let z = Cdd::from_c64(num_complex::Complex64::new(re, im));
            let s = z.sqrt();
            let sq = s.mul(s);
            assert!(
                (sq.re.to_f64() - re).abs() < 1e-29 && (sq.im.to_f64() - im).abs() < 1e-29,
                "sqrt({re}+{im}i) squared to {}+{}i",
                sq.re.to_f64(),
                sq.im.to_f64()
            );
            // principal branch: nonnegative real part
            assert!(s.re.to_f64() >= 0.0);
        }
    }
}
