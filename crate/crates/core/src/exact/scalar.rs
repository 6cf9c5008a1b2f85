//! Scalar rings for specialized dynamics, and rational-number helpers.
//!
//! `Poly` coefficients are context-free (`Q`, `Q[b]`), but points of a
//! specialized orbit may live in rings whose arithmetic needs a shared
//! context (a minimal polynomial, a finite-field modulus). `Ring` carries
//! that context on the values themselves: identities are derived from an
//! existing element.

use crate::{Int, Rat};
use num_bigint::Sign;
use num_traits::{One, Signed, Zero};

/// Commutative ring whose identities are derived from a sample element.
pub trait Ring: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    /// Multiplicative inverse when the element is a unit.
    fn inv(&self) -> Option<Self>;
    /// Image of a rational scalar in this ring, when defined.
    fn from_rat(&self, q: &Rat) -> Option<Self>;
}

impl Ring for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        if <Rat as Zero>::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rat(&self, q: &Rat) -> Option<Self> {
        Some(q.clone())
    }
}

/// Parses `"num/den"` or a plain integer string into a rational.
pub fn parse_rat(s: &str) -> crate::Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: Int = num
        .parse()
        .map_err(|_| crate::Error::Invalid(format!("bad rational {s:?}")))?;
    let d: Int = den
        .parse()
        .map_err(|_| crate::Error::Invalid(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(crate::Error::Invalid(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Canonical `"num/den"` form (denominator always present and positive).
pub fn rat_to_string(q: &Rat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn rat_from_i64(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Exact p-adic valuation of a nonzero rational; `None` for zero
/// (valuation +infinity).
pub fn val_p(q: &Rat, p: u64) -> Option<i64> {
    if Zero::is_zero(q) {
        return None;
    }
    let p = Int::from(p);
    let mut v: i64 = 0;
    let mut n = q.numer().abs();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    let mut d = q.denom().clone();
    while (&d % &p).is_zero() {
        d /= &p;
        v -= 1;
    }
    Some(v)
}

/// |q|_p = p^(-v_p(q)) as an exact rational.
pub fn abs_p(q: &Rat, p: u64) -> Rat {
    match val_p(q, p) {
        None => Rat::zero(),
        Some(v) => {
            let pw = Int::from(p).pow(v.unsigned_abs() as u32);
            if v >= 0 {
                Rat::new(Int::one(), pw)
            } else {
                Rat::from_integer(pw)
            }
        }
    }
}

/// Archimedean absolute value as an exact rational.
pub fn abs_arch(q: &Rat) -> Rat {
    q.abs()
}

/// Rounds a rational to the nearest f64 (numerator/denominator may exceed
/// f64 range; scale by powers of two first).
pub fn rat_to_f64(q: &Rat) -> f64 {
    let n = q.numer();
    let d = q.denom();
    if n.is_zero() {
        return 0.0;
    }
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    // Keep about 100 bits of each operand so the quotient stays in range.
    let shift_n = (nb - 100).max(0) as u64;
    let shift_d = (db - 100).max(0) as u64;
    let sn = n >> shift_n;
    let sd = d >> shift_d;
    let fn_ = big_to_f64(&sn);
    let fd = big_to_f64(&sd);
    (fn_ / fd) * 2f64.powi((shift_n as i32) - (shift_d as i32))
}

fn big_to_f64(n: &Int) -> f64 {
    let (sign, digits) = n.to_u64_digits();
    let mut acc = 0.0f64;
    for d in digits.iter().rev() {
        acc = acc * 2f64.powi(64) + *d as f64;
    }
    if sign == Sign::Minus {
        -acc
    } else {
        acc
    }
}

/// log |q| for a nonzero rational, computed stably for huge operands.
pub fn rat_log_abs(q: &Rat) -> f64 {
    assert!(!Zero::is_zero(q), "log of zero");
    big_log2(&q.numer().abs()) * std::f64::consts::LN_2
        - big_log2(&q.denom().abs()) * std::f64::consts::LN_2
}

fn big_log2(n: &Int) -> f64 {
    let bits = n.bits();
    if bits <= 53 {
        return big_to_f64(n).log2();
    }
    let shift = bits - 53;
    let top = n >> shift;
    big_to_f64(&top).log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(rat_to_string(&parse_rat("3/6").unwrap()), "1/2");
        assert_eq!(rat_to_string(&parse_rat("-4").unwrap()), "-4/1");
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn p_adic_valuation() {
        let q = parse_rat("50/3").unwrap();
        assert_eq!(val_p(&q, 5), Some(2));
        assert_eq!(val_p(&q, 3), Some(-1));
        assert_eq!(val_p(&q, 7), Some(0));
        assert_eq!(val_p(&Rat::zero(), 5), None);
        assert_eq!(abs_p(&parse_rat("1/5").unwrap(), 5), rat_from_i64(5));
    }

    #[test]
    fn big_rational_to_f64() {
        let q = parse_rat("1/3").unwrap();
        assert!((rat_to_f64(&q) - 1.0 / 3.0).abs() < 1e-15);
        let big = Rat::from_integer(Int::from(2).pow(300));
        assert!((rat_log_abs(&big) - 300.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }
}
