//! Capped-precision p-adic numbers: an exact valuation plus a unit tracked
//! modulo `p^prec`. Additions that cancel past the stored precision error
//! out instead of silently lying about the valuation.

use crate::exact::scalar::val_p;
use crate::{Error, Int, Rat, Result};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::sync::Arc;

#[derive(Debug)]
pub struct PadicCtx {
    p: u64,
    prec: u32,
    modulus: Int,
}

impl PadicCtx {
    pub fn new(p: u64, prec: u32) -> Arc<Self> {
        Arc::new(PadicCtx {
            p,
            prec,
            modulus: Int::from(p).pow(prec),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }
}

/// `p^val * unit` with `unit` a p-unit known modulo `p^digits`.
#[derive(Clone, Debug)]
pub enum PadicFloat {
    Zero,
    Nonzero { val: i64, unit: Int, digits: u32 },
}

/// Below this many remaining significant digits a value is unusable.
const MIN_DIGITS: u32 = 4;

impl PadicFloat {
    pub fn from_rat(ctx: &PadicCtx, q: &Rat) -> Self {
        if q.is_zero() {
            return PadicFloat::Zero;
        }
        let v = val_p(q, ctx.p).unwrap();
        let p = Int::from(ctx.p);
        let strip = |mut n: Int| -> Int {
            while n.mod_floor(&p).is_zero() {
                n /= &p;
            }
            n
        };
        let nu = strip(q.numer().clone());
        let de = strip(q.denom().clone());
        let unit = nu.mod_floor(&ctx.modulus) * mod_inverse(&de, &ctx.modulus) % &ctx.modulus;
        PadicFloat::Nonzero {
            val: v,
            unit: unit.mod_floor(&ctx.modulus),
            digits: ctx.prec,
        }
    }

    pub fn valuation(&self) -> Option<i64> {
        match self {
            PadicFloat::Zero => None,
            PadicFloat::Nonzero { val, .. } => Some(*val),
        }
    }

    pub fn mul(&self, ctx: &PadicCtx, rhs: &Self) -> Self {
        match (self, rhs) {
            (PadicFloat::Zero, _) | (_, PadicFloat::Zero) => PadicFloat::Zero,
            (
                PadicFloat::Nonzero {
                    val: v1,
                    unit: u1,
                    digits: d1,
                },
                PadicFloat::Nonzero {
                    val: v2,
                    unit: u2,
                    digits: d2,
                },
            ) => PadicFloat::Nonzero {
                val: v1 + v2,
                unit: (u1 * u2).mod_floor(&ctx.modulus),
                digits: (*d1).min(*d2),
            },
        }
    }

    pub fn neg(&self, ctx: &PadicCtx) -> Self {
        match self {
            PadicFloat::Zero => PadicFloat::Zero,
            PadicFloat::Nonzero { val, unit, digits } => PadicFloat::Nonzero {
                val: *val,
                unit: (-unit).mod_floor(&ctx.modulus),
                digits: *digits,
            },
        }
    }

    /// Addition; errors when cancellation eats the tracked precision (the
    /// resulting valuation would not be trustworthy).
    pub fn add(&self, ctx: &PadicCtx, rhs: &Self) -> Result<Self> {
        let (lo, hi) = match (self, rhs) {
            (PadicFloat::Zero, x) | (x, PadicFloat::Zero) => return Ok(x.clone()),
            (
                a @ PadicFloat::Nonzero { val: v1, .. },
                b @ PadicFloat::Nonzero { val: v2, .. },
            ) => {
                if v1 <= v2 {
                    (a, b)
                } else {
                    (b, a)
                }
            }
        };
        let (PadicFloat::Nonzero { val: vl, unit: ul, digits: dl },
             PadicFloat::Nonzero { val: vh, unit: uh, digits: dh }) = (lo, hi)
        else {
            unreachable!()
        };
        let shift = (vh - vl) as u32;
        let digits = (*dl).min(*dh);
        if shift >= digits {
            // The higher-valuation term is invisible at this precision.
            return Ok(lo.clone());
        }
        let p = Int::from(ctx.p);
        let sum = (ul + uh * p.pow(shift)).mod_floor(&ctx.modulus);
        if sum.is_zero() {
            return Err(Error::Unresolved(format!(
                "p-adic cancellation exhausted {} digits of precision",
                ctx.prec
            )));
        }
        let mut extra = 0u32;
        let mut u = sum;
        while u.mod_floor(&p).is_zero() {
            u /= &p;
            extra += 1;
        }
        let remaining = digits.saturating_sub(extra);
        if remaining < MIN_DIGITS {
            return Err(Error::Unresolved(format!(
                "p-adic precision dropped below {MIN_DIGITS} digits"
            )));
        }
        Ok(PadicFloat::Nonzero {
            val: vl + extra as i64,
            unit: u,
            digits: remaining,
        })
    }
}

fn mod_inverse(a: &Int, m: &Int) -> Int {
    // Extended Euclid; a must be coprime to m.
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (Int::zero(), Int::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        let t = &t0 - &q * &t1;
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    debug_assert!(r0.is_one(), "inverse of a non-unit");
    t0.mod_floor(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::parse_rat;

    #[test]
    fn valuations_track_rationals() {
        let ctx = PadicCtx::new(5, 16);
        let x = PadicFloat::from_rat(&ctx, &parse_rat("50/3").unwrap());
        assert_eq!(x.valuation(), Some(2));
        let y = PadicFloat::from_rat(&ctx, &parse_rat("1/5").unwrap());
        assert_eq!(y.valuation(), Some(-1));
        assert_eq!(x.mul(&ctx, &y).valuation(), Some(1));
    }

    #[test]
    fn addition_and_cancellation() {
        let ctx = PadicCtx::new(5, 8);
        let a = PadicFloat::from_rat(&ctx, &parse_rat("7").unwrap());
        let b = PadicFloat::from_rat(&ctx, &parse_rat("-7").unwrap());
        // Exact cancellation is a precision failure, not zero.
        assert!(a.add(&ctx, &b).is_err());
        // Partial cancellation adjusts the valuation.
        let c = PadicFloat::from_rat(&ctx, &parse_rat("18").unwrap());
        let s = a.add(&ctx, &c).unwrap(); // 25 = 5^2
        assert_eq!(s.valuation(), Some(2));
    }

    #[test]
    fn matches_exact_valuation_on_henon_step() {
        // quadratic family at t = 1/5 from (0,0): valuations -1, -2, -4, ...
        let ctx = PadicCtx::new(5, 32);
        let t = PadicFloat::from_rat(&ctx, &parse_rat("1/5").unwrap());
        let mut x = PadicFloat::from_rat(&ctx, &parse_rat("0").unwrap());
        let mut y = x.clone();
        for expect in [-1i64, -2, -4, -8, -16] {
            let fx = x.mul(&ctx, &x).add(&ctx, &t).unwrap();
            let nx = fx.add(&ctx, &y).unwrap();
            y = x;
            x = nx;
            assert_eq!(x.valuation(), Some(expect));
        }
    }
}
