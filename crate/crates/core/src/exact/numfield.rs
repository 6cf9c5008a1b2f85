//! Arithmetic in `Q[x]/(m)` for an irreducible monic `m`, with a complex
//! floating approximation isolating one root of `m`.

use crate::exact::scalar::{rat_to_f64, Ring};
use crate::{Error, QPoly, Rat, Result};
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::sync::{Arc, OnceLock};

/// Shared field data: the minimal polynomial, with the numeric roots
/// isolated on first use.
#[derive(Debug)]
pub struct NfCtx {
    min_poly: QPoly,
    roots: OnceLock<Result<Vec<(Complex64, f64)>>>,
}

impl NfCtx {
    /// Builds the field `Q[x]/(min_poly)`. The polynomial must be monic
    /// irreducible of degree >= 1; irreducibility is the caller's burden for
    /// degrees > 1 when `check` is false (factorization-produced moduli).
    pub fn new(min_poly: QPoly, check: bool) -> Result<Arc<NfCtx>> {
        if min_poly.degree_i64() < 1 {
            return Err(Error::BadModulus("degree < 1".into()));
        }
        let min_poly = min_poly.monic();
        if check && !crate::exact::factor::is_irreducible(&min_poly)? {
            return Err(Error::BadModulus(min_poly.display("t")));
        }
        Ok(Arc::new(NfCtx {
            min_poly,
            roots: OnceLock::new(),
        }))
    }

    pub fn min_poly(&self) -> &QPoly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree().unwrap()
    }

    /// All complex roots with an isolation radius, sorted by (re, im);
    /// computed on first use.
    pub fn roots(&self) -> &[(Complex64, f64)] {
        self.roots
            .get_or_init(|| isolate_roots(&self.min_poly))
            .as_ref()
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }
}

impl PartialEq for NfCtx {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
    }
}

/// An element of `Q[x]/(m)`: a residue of degree < deg m plus the index of
/// the root of `m` its numeric embedding tracks.
#[derive(Clone, Debug)]
pub struct NfElem {
    ctx: Arc<NfCtx>,
    value: QPoly,
    root_index: usize,
}

impl PartialEq for NfElem {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.value == other.value
    }
}

impl NfElem {
    pub fn new(ctx: Arc<NfCtx>, value: QPoly) -> Self {
        let value = value.rem(&ctx.min_poly).expect("modulus nonzero");
        NfElem {
            ctx,
            value,
            root_index: 0,
        }
    }

    /// The class of the variable itself.
    pub fn generator(ctx: Arc<NfCtx>) -> Self {
        Self::new(ctx, QPoly::var())
    }

    pub fn from_rational(ctx: Arc<NfCtx>, q: Rat) -> Self {
        Self::new(ctx, QPoly::constant(q))
    }

    pub fn value(&self) -> &QPoly {
        &self.value
    }

    pub fn ctx(&self) -> &Arc<NfCtx> {
        &self.ctx
    }

    pub fn with_root(mut self, root_index: usize) -> Self {
        assert!(root_index < self.ctx.roots().len());
        self.root_index = root_index;
        self
    }

    /// Rational content when the element lies in the prime field.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.value.degree_i64() <= 0 {
            Some(self.value.coeff(0))
        } else {
            None
        }
    }

    /// Numeric embedding at the tracked root, with an isolation radius for
    /// the root itself.
    pub fn approx(&self) -> (Complex64, f64) {
        let (root, rad) = self.ctx.roots()[self.root_index];
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.value.coeffs().iter().rev() {
            acc = acc * root + Complex64::new(rat_to_f64(c), 0.0);
        }
        (acc, rad)
    }

    fn check_ctx(&self, rhs: &Self) -> Result<()> {
        if self.ctx != rhs.ctx {
            return Err(Error::MinPolyMismatch);
        }
        Ok(())
    }

    pub fn add_checked(&self, rhs: &Self) -> Result<Self> {
        self.check_ctx(rhs)?;
        Ok(Self {
            ctx: self.ctx.clone(),
            value: self.value.clone() + rhs.value.clone(),
            root_index: self.root_index,
        })
    }

    pub fn sub_checked(&self, rhs: &Self) -> Result<Self> {
        self.check_ctx(rhs)?;
        Ok(Self {
            ctx: self.ctx.clone(),
            value: self.value.clone() - rhs.value.clone(),
            root_index: self.root_index,
        })
    }

    pub fn mul_checked(&self, rhs: &Self) -> Result<Self> {
        self.check_ctx(rhs)?;
        let prod = self.value.clone() * rhs.value.clone();
        Ok(Self {
            ctx: self.ctx.clone(),
            value: prod.rem(&self.ctx.min_poly)?,
            root_index: self.root_index,
        })
    }

    /// Inverse via the extended Euclidean algorithm; errors on zero.
    pub fn inv_checked(&self) -> Result<Self> {
        if self.value.is_zero() {
            return Err(Error::DivisionByZero("number field inversion".into()));
        }
        let (g, s, _) = egcd(&self.value, &self.ctx.min_poly)?;
        // m irreducible and value nonzero of smaller degree: gcd is a unit.
        if g.degree_i64() != 0 {
            return Err(Error::BadModulus(
                "modulus shares a factor with the operand (not irreducible?)".into(),
            ));
        }
        let ginv = g.coeff(0).recip();
        Ok(Self {
            ctx: self.ctx.clone(),
            value: s.scale(&ginv).rem(&self.ctx.min_poly)?,
            root_index: self.root_index,
        })
    }
}

impl Ring for NfElem {
    fn zero_like(&self) -> Self {
        Self {
            ctx: self.ctx.clone(),
            value: QPoly::zero(),
            root_index: self.root_index,
        }
    }
    fn one_like(&self) -> Self {
        Self {
            ctx: self.ctx.clone(),
            value: QPoly::one(),
            root_index: self.root_index,
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        self.add_checked(rhs).expect("matching number fields")
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.sub_checked(rhs).expect("matching number fields")
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.mul_checked(rhs).expect("matching number fields")
    }
    fn neg(&self) -> Self {
        Self {
            ctx: self.ctx.clone(),
            value: -self.value.clone(),
            root_index: self.root_index,
        }
    }
    fn is_zero_elem(&self) -> bool {
        self.value.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        self.inv_checked().ok()
    }
    fn from_rat(&self, q: &Rat) -> Option<Self> {
        Some(Self::from_rational(self.ctx.clone(), q.clone()))
    }
}

/// Extended Euclid over `Q[x]`: returns `(g, s, t)` with `s*a + t*b = g`.
pub fn egcd(a: &QPoly, b: &QPoly) -> Result<(QPoly, QPoly, QPoly)> {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
    let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1)?;
        let s = s0 - q.clone() * s1.clone();
        let t = t0 - q * t1.clone();
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    Ok((r0, s0, t0))
}

/// Durand-Kerner root finding on a monic rational polynomial, with a crude
/// isolation radius from pairwise separation.
fn isolate_roots(f: &QPoly) -> Result<Vec<(Complex64, f64)>> {
    let n = f.degree().unwrap();
    let cf: Vec<Complex64> = (0..=n)
        .map(|k| Complex64::new(rat_to_f64(&f.coeff(k)), 0.0))
        .collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in cf.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    // Cauchy bound for the start circle radius.
    let bound = 1.0
        + cf[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| seed.powu(k as u32 + 1) * bound / seed.norm())
        .collect();
    for _ in 0..500 {
        let mut delta_max = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                roots[i] += Complex64::new(1e-6, 1e-6);
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta_max = delta_max.max(step.norm());
        }
        if delta_max < 1e-14 * bound.max(1.0) {
            break;
        }
    }
    // Isolation radius: half the distance to the nearest other root.
    let mut out: Vec<(Complex64, f64)> = roots
        .iter()
        .map(|&r| {
            let sep = roots
                .iter()
                .filter(|&&s| s != r)
                .map(|&s| (s - r).norm())
                .fold(f64::INFINITY, f64::min);
            (r, if sep.is_finite() { sep / 2.0 } else { 1.0 })
        })
        .collect();
    out.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for (r, _) in &out {
        if eval(*r).norm() > 1e-6 * bound.max(1.0) {
            return Err(Error::Invalid("root refinement did not converge".into()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rat_from_i64 as q;

    fn qp(cs: &[i64]) -> QPoly {
        QPoly::from_coeffs(cs.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn sqrt2_field() {
        // Q[x]/(x^2 - 2): theta * theta^{-1} = 1 and theta^2 = 2.
        let ctx = NfCtx::new(qp(&[-2, 0, 1]), true).unwrap();
        let theta = NfElem::generator(ctx.clone());
        let inv = theta.inv_checked().unwrap();
        assert_eq!(theta.mul_checked(&inv).unwrap(), theta.one_like());
        let sq = theta.mul_checked(&theta).unwrap();
        assert_eq!(sq.as_rational(), Some(q(2)));
        assert!(theta.zero_like().inv_checked().is_err());
    }

    #[test]
    fn mismatched_contexts_error() {
        let c1 = NfCtx::new(qp(&[-2, 0, 1]), true).unwrap();
        let c2 = NfCtx::new(qp(&[-3, 0, 1]), true).unwrap();
        let a = NfElem::generator(c1);
        let b = NfElem::generator(c2);
        assert!(a.add_checked(&b).is_err());
    }

    #[test]
    fn cubic_evaluation() {
        // A_1(theta) = theta in Q[theta]/(theta^3 + 2theta^2 + 2theta + 3).
        let ctx = NfCtx::new(qp(&[3, 2, 2, 1]), true).unwrap();
        let theta = NfElem::generator(ctx);
        let a1 = QPoly::var();
        let v = a1.eval_in(&theta).unwrap();
        assert_eq!(v, theta);
    }

    #[test]
    fn roots_isolated() {
        let ctx = NfCtx::new(qp(&[-2, 0, 1]), true).unwrap();
        let roots = ctx.roots();
        assert_eq!(roots.len(), 2);
        let s = 2f64.sqrt();
        assert!((roots[0].0.re + s).abs() < 1e-9);
        assert!((roots[1].0.re - s).abs() < 1e-9);
        assert!(roots[0].1 > 1e-3);
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(NfCtx::new(qp(&[-1, 0, 1]), true).is_err());
        assert!(NfCtx::new(qp(&[5]), true).is_err());
    }
}
