//! Finite fields `F_(p^k)` with a deterministically chosen modulus, and
//! cycle detection for iteration on finite sets.

use crate::exact::modp::{irreducible_mod_p, padd, pdivrem, pmul, psub, ptrim};
use crate::exact::scalar::Ring;
use crate::{Error, Rat, Result};
use num_traits::{Signed, ToPrimitive, Zero};
use std::sync::Arc;

/// Field data: characteristic, extension degree and the fixed modulus.
///
/// The modulus is the lexicographically smallest monic irreducible of degree
/// `k` over `F_p`, scanning constant coefficient fastest; it is recorded in
/// serialized output so runs are reproducible.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FfCtx {
    p: u64,
    k: u32,
    modulus: Vec<u64>,
}

impl FfCtx {
    pub fn new(p: u64, k: u32) -> Result<Arc<FfCtx>> {
        if !is_prime_u64(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::Invalid("extension degree must be >= 1".into()));
        }
        let modulus = smallest_irreducible(p, k)?;
        Ok(Arc::new(FfCtx { p, k, modulus }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.k)
    }

    /// Modulus coefficients by ascending degree, including the leading 1.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Every element, enumerated in lexicographic coefficient order.
    pub fn all_elements(self: &Arc<Self>) -> Vec<FfElem> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut digits = vec![0u64; self.k as usize];
        loop {
            out.push(FfElem {
                ctx: self.clone(),
                coeffs: ptrim(digits.clone()),
            });
            let mut i = 0;
            loop {
                if i == digits.len() {
                    return out;
                }
                digits[i] += 1;
                if digits[i] < self.p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FfElem {
    ctx: Arc<FfCtx>,
    /// Residue coefficients, ascending, trimmed, all < p.
    coeffs: Vec<u64>,
}

impl FfElem {
    pub fn from_int(ctx: Arc<FfCtx>, n: i64) -> Self {
        let p = ctx.p as i64;
        let r = n.rem_euclid(p) as u64;
        FfElem {
            ctx,
            coeffs: ptrim(vec![r]),
        }
    }

    pub fn generator(ctx: Arc<FfCtx>) -> Self {
        let coeffs = if ctx.k == 1 {
            // x reduces mod the degree-1 modulus x + c.
            vec![(ctx.p - ctx.modulus[0]) % ctx.p]
        } else {
            vec![0, 1]
        };
        FfElem {
            ctx,
            coeffs: ptrim(coeffs),
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn ctx(&self) -> &Arc<FfCtx> {
        &self.ctx
    }
}

impl Ring for FfElem {
    fn zero_like(&self) -> Self {
        FfElem {
            ctx: self.ctx.clone(),
            coeffs: Vec::new(),
        }
    }
    fn one_like(&self) -> Self {
        FfElem {
            ctx: self.ctx.clone(),
            coeffs: vec![1],
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.ctx, rhs.ctx);
        FfElem {
            ctx: self.ctx.clone(),
            coeffs: padd(&self.coeffs, &rhs.coeffs, self.ctx.p),
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.ctx, rhs.ctx);
        FfElem {
            ctx: self.ctx.clone(),
            coeffs: psub(&self.coeffs, &rhs.coeffs, self.ctx.p),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.ctx, rhs.ctx);
        let prod = pmul(&self.coeffs, &rhs.coeffs, self.ctx.p);
        FfElem {
            ctx: self.ctx.clone(),
            coeffs: pdivrem(&prod, &self.ctx.modulus, self.ctx.p).1,
        }
    }
    fn neg(&self) -> Self {
        FfElem {
            ctx: self.ctx.clone(),
            coeffs: psub(&[], &self.coeffs, self.ctx.p),
        }
    }
    fn is_zero_elem(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero_elem() {
            return None;
        }
        // Extended Euclid against the modulus.
        let p = self.ctx.p;
        let (mut r0, mut r1) = (self.ctx.modulus.clone(), self.coeffs.clone());
        let (mut t0, mut t1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = pdivrem(&r0, &r1, p);
            let t = psub(&t0, &pmul(&q, &t1, p), p);
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        debug_assert_eq!(r0.len(), 1);
        let c = crate::exact::modp::pinv(r0[0], p);
        let inv = pmul(&t0, &[c], p);
        Some(FfElem {
            ctx: self.ctx.clone(),
            coeffs: pdivrem(&inv, &self.ctx.modulus, p).1,
        })
    }
    fn from_rat(&self, q: &Rat) -> Option<Self> {
        let p = crate::Int::from(self.ctx.p);
        let dm = num_integer::Integer::mod_floor(q.denom(), &p);
        if dm.is_zero() {
            return None;
        }
        let nm = num_integer::Integer::mod_floor(q.numer(), &p)
            .abs()
            .to_u64()?;
        let d = dm.to_u64()?;
        let dinv = crate::exact::modp::pinv(d, self.ctx.p);
        Some(FfElem {
            ctx: self.ctx.clone(),
            coeffs: ptrim(vec![(nm as u128 * dinv as u128 % self.ctx.p as u128) as u64]),
        })
    }
}

fn smallest_irreducible(p: u64, k: u32) -> Result<Vec<u64>> {
    if k == 1 {
        return Ok(vec![0, 1]); // x itself: F_p
    }
    let mut digits = vec![0u64; k as usize];
    loop {
        let mut f = digits.clone();
        f.push(1);
        if irreducible_mod_p(&f, p) {
            return Ok(f);
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Err(Error::Invalid(format!(
                    "no irreducible of degree {k} over F_{p} (impossible)"
                )));
            }
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    // Deterministic Miller-Rabin for u64.
    let d = (n - 1) >> (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = 1u128;
        let mut base = a as u128 % n as u128;
        let mut e = d;
        while e > 0 {
            if e & 1 == 1 {
                x = x * base % n as u128;
            }
            base = base * base % n as u128;
            e >>= 1;
        }
        if x == 1 || x == (n - 1) as u128 {
            continue;
        }
        let mut r = d;
        while r != n - 1 {
            x = x * x % n as u128;
            r <<= 1;
            if x == (n - 1) as u128 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least n >= 1 with `step^n(start) = start`, by Brent's cycle detection.
/// The step map must be a bijection of a finite set so the orbit of `start`
/// is purely periodic; the result is verified by replay.
pub fn ff_cycle<T: Clone + PartialEq>(start: &T, step: impl Fn(&T) -> T) -> u64 {
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = start.clone();
    let mut hare = step(start);
    while tortoise != hare {
        if power == lam {
            tortoise = hare.clone();
            power *= 2;
            lam = 0;
        }
        hare = step(&hare);
        lam += 1;
    }
    // Purely periodic orbit: lam is the period of every point on it.
    // Replay from the start to verify (a non-bijective step would give a
    // rho-shaped orbit and a wrong answer here).
    let mut check = start.clone();
    for _ in 0..lam {
        check = step(&check);
    }
    assert!(check == *start, "step map is not bijective on the orbit");
    lam
}
