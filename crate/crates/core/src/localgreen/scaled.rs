//! Complex numbers with a separate log-scale exponent, for orbits whose
//! magnitudes grow doubly exponentially past f64 range.

use num_complex::Complex64;

/// Value `(re + i*im) * exp(ln_scale)`, normalized so the mantissa modulus
/// lies in `[1, 2)`; zero is `(0, 0, -inf)`.
#[derive(Clone, Copy, Debug)]
pub struct ScaledComplex {
    re: f64,
    im: f64,
    ln_scale: f64,
}

/// Scale differences beyond this are numerically invisible in f64 addition.
const ALIGN_CUTOFF: f64 = 45.0;

impl ScaledComplex {
    pub fn zero() -> Self {
        ScaledComplex {
            re: 0.0,
            im: 0.0,
            ln_scale: f64::NEG_INFINITY,
        }
    }

    pub fn from_c64(c: Complex64) -> Self {
        ScaledComplex {
            re: c.re,
            im: c.im,
            ln_scale: 0.0,
        }
        .normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn normalized(mut self) -> Self {
        let n = (self.re * self.re + self.im * self.im).sqrt();
        if n == 0.0 || !n.is_finite() {
            if n == 0.0 {
                return Self::zero();
            }
            // Renormalize via the larger component to dodge overflow.
            let m = self.re.abs().max(self.im.abs());
            self.re /= m;
            self.im /= m;
            self.ln_scale += m.ln();
            return self.normalized();
        }
        let shift = n.ln();
        self.re /= n;
        self.im /= n;
        self.ln_scale += shift;
        self
    }

    /// Natural log of the modulus; `-inf` for zero.
    pub fn ln_norm(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.ln_scale
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return *rhs;
        }
        if rhs.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.ln_scale >= rhs.ln_scale {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let d = hi.ln_scale - lo.ln_scale;
        if d > ALIGN_CUTOFF {
            return *hi;
        }
        let f = (-d).exp();
        ScaledComplex {
            re: hi.re + lo.re * f,
            im: hi.im + lo.im * f,
            ln_scale: hi.ln_scale,
        }
        .normalized()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        ScaledComplex {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
            ln_scale: self.ln_scale + rhs.ln_scale,
        }
        .normalized()
    }

    pub fn mul_c64(&self, c: Complex64) -> Self {
        self.mul(&Self::from_c64(c))
    }

    pub fn powi(&self, e: usize) -> Self {
        let mut acc = Self::from_c64(Complex64::new(1.0, 0.0));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_magnitudes_track_logs() {
        let mut x = ScaledComplex::from_c64(Complex64::new(10.0, 0.0));
        // Square 20 times: ln|x| = 2^20 * ln 10, far past f64 range.
        for _ in 0..20 {
            x = x.mul(&x.clone());
        }
        let expect = (1u64 << 20) as f64 * 10f64.ln();
        assert!((x.ln_norm() - expect).abs() < 1e-6 * expect);
    }

    #[test]
    fn addition_drops_negligible_terms() {
        let big = {
            let mut b = ScaledComplex::from_c64(Complex64::new(7.0, 0.0));
            for _ in 0..10 {
                b = b.mul(&b.clone());
            }
            b
        };
        let small = ScaledComplex::from_c64(Complex64::new(3.0, 4.0));
        let sum = big.add(&small);
        assert_eq!(sum.ln_norm(), big.ln_norm());
        let z = ScaledComplex::zero();
        assert_eq!(z.add(&small).ln_norm(), small.ln_norm());
    }

    #[test]
    fn matches_plain_arithmetic_in_range() {
        let a = Complex64::new(1.5, -2.0);
        let b = Complex64::new(-0.25, 3.0);
        let sa = ScaledComplex::from_c64(a);
        let sb = ScaledComplex::from_c64(b);
        assert!((sa.add(&sb).ln_norm() - (a + b).norm().ln()).abs() < 1e-12);
        assert!((sa.mul(&sb).ln_norm() - (a * b).norm().ln()).abs() < 1e-12);
        assert!((sa.powi(3).ln_norm() - (a * a * a).norm().ln()).abs() < 1e-12);
    }
}
