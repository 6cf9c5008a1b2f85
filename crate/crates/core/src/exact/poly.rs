//! Dense univariate polynomials over an exact coefficient ring.
//!
//! Coefficients are indexed by degree and the representation is normalized:
//! the highest stored coefficient is nonzero, the zero polynomial is the
//! empty vector (degree "-infinity"). The same type nests, so `Poly<Poly<Q>>`
//! is a polynomial in `t` with coefficients in `Q[b]`.

use crate::exact::scalar::Ring;
use crate::{Error, Rat, Result};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficient ring for dense polynomials: exact, context-free identities.
pub trait Coeff:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Add<Output = Self>
{
    /// Exact division; `None` when `rhs` is zero or does not divide exactly.
    fn exact_div(&self, rhs: &Self) -> Option<Self>;

    /// Dense coefficient-vector product (both inputs nonempty). Overridable
    /// for coefficient types with a cheaper exact path.
    fn mul_dense(a: &[Self], b: &[Self]) -> Vec<Self> {
        let mut out = vec![Self::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
        out
    }
}

impl Coeff for Rat {
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }

    /// Clears denominators, multiplies over `Z` without per-op reductions,
    /// and divides the common denominator back out.
    fn mul_dense(a: &[Self], b: &[Self]) -> Vec<Self> {
        use num_integer::Integer;
        let den_lcm = |v: &[Rat]| -> crate::Int {
            v.iter()
                .fold(crate::Int::one(), |acc, c| acc.lcm(c.denom()))
        };
        let da = den_lcm(a);
        let db = den_lcm(b);
        let clear = |v: &[Rat], d: &crate::Int| -> Vec<crate::Int> {
            v.iter().map(|c| c.numer() * (d / c.denom())).collect()
        };
        let ai = clear(a, &da);
        let bi = clear(b, &db);
        let mut out = vec![crate::Int::zero(); a.len() + b.len() - 1];
        for (i, x) in ai.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bi.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        let dd = da * db;
        out.into_iter().map(|n| Rat::new(n, dd.clone())).collect()
    }
}

/// Field coefficients additionally support inversion, enabling remainder
/// division of the polynomials above them.
pub trait CoeffField: Coeff {
    fn inv_c(&self) -> Option<Self>;
}

impl CoeffField for Rat {
    fn inv_c(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Poly<C> {
    pub fn from_coeffs(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The variable itself (`t`, or `b` for inner polynomials).
    pub fn var() -> Self {
        Self::from_coeffs(vec![C::zero(), C::one()])
    }

    /// Monomial `c * x^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let mut v = vec![C::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    /// `None` encodes the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree with the zero polynomial encoded as -1.
    pub fn degree_i64(&self) -> i64 {
        self.degree().map_or(-1, |d| d as i64)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let mut s = C::zero();
            for _ in 0..k {
                s = s + c.clone();
            }
            out.push(s);
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn mul_xk(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![C::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(v)
    }

    pub fn pow(&self, mut e: usize) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a * base.clone(),
                });
            }
            e >>= 1;
            if e == 0 {
                return acc.unwrap();
            }
            base = base.clone() * base;
        }
    }

    /// Exact polynomial division; `None` if `rhs` is zero or the division
    /// leaves a remainder. Works over any coefficient ring with exact
    /// coefficient division.
    pub fn exact_div_poly(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dr = rhs.degree().unwrap();
        let lead = rhs.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() < dr + 1 {
            return None;
        }
        let mut quot = vec![C::zero(); rem.len() - dr];
        for k in (dr..rem.len()).rev() {
            let c = rem[k].clone();
            if c.is_zero() {
                continue;
            }
            let q = c.exact_div(&lead)?;
            for j in 0..=dr {
                let sub = q.clone() * rhs.coeffs[j].clone();
                rem[k - dr + j] = rem[k - dr + j].clone() - sub;
            }
            quot[k - dr] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(quot))
    }
}

impl<C: Coeff> Zero for Poly<C> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<C: Coeff> One for Poly<C> {
    fn one() -> Self {
        Poly::constant(C::one())
    }
}

impl<C: Coeff> Add for Poly<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(C::zero);
            let b = rhs.coeffs.get(k).cloned().unwrap_or_else(C::zero);
            out.push(a + b);
        }
        Self::from_coeffs(out)
    }
}

impl<C: Coeff> Sub for Poly<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Coeff> Neg for Poly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<C: Coeff> Mul for Poly<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(C::mul_dense(&self.coeffs, &rhs.coeffs))
    }
}

impl<C: Coeff> Coeff for Poly<C> {
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        self.exact_div_poly(rhs)
    }
}

impl<C: CoeffField> Poly<C> {
    /// Quotient and remainder over field coefficients.
    pub fn divrem(&self, rhs: &Self) -> Result<(Self, Self)> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero("polynomial division".into()));
        }
        let dr = rhs.degree().unwrap();
        let lead_inv = rhs
            .leading()
            .unwrap()
            .inv_c()
            .ok_or_else(|| Error::DivisionByZero("leading coefficient".into()))?;
        let mut rem = self.coeffs.clone();
        if rem.len() < dr + 1 {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![C::zero(); rem.len() - dr];
        for k in (dr..rem.len()).rev() {
            let c = rem[k].clone();
            if c.is_zero() {
                continue;
            }
            let q = c * lead_inv.clone();
            for j in 0..=dr {
                let sub = q.clone() * rhs.coeffs[j].clone();
                rem[k - dr + j] = rem[k - dr + j].clone() - sub;
            }
            quot[k - dr] = q;
        }
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    pub fn rem(&self, rhs: &Self) -> Result<Self> {
        Ok(self.divrem(rhs)?.1)
    }

    /// Scales so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&l.inv_c().expect("nonzero leading coefficient")),
        }
    }
}

// ---------------------------------------------------------------------------
// Rational-coefficient specifics: content, primitive PRS gcd, squarefree part
// ---------------------------------------------------------------------------

impl Poly<Rat> {
    /// Positive rational `c` with `self / c` primitive over `Z`
    /// (integer coefficients, gcd 1). Zero polynomial has content 0.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        let mut num_gcd = crate::Int::zero();
        let mut den_lcm = crate::Int::one();
        for c in &self.coeffs {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rat::new(num_gcd, den_lcm)
    }

    /// `self / content(self)`, an integer-coefficient polynomial with
    /// positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Monic gcd via a primitive pseudo-remainder sequence.
    /// `gcd(f, 0)` is the monic normalization of `f`; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree_i64() < b.degree_i64() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a  mod  b`.
    fn pseudo_rem(&self, rhs: &Self) -> Self {
        let da = self.degree().expect("nonzero dividend");
        let db = rhs.degree().expect("nonzero divisor");
        if da < db {
            return self.clone();
        }
        let lead = rhs.leading().unwrap().clone();
        let mut rem = self.clone();
        for k in (db..=da).rev() {
            let c = rem.coeff(k);
            if c.is_zero() {
                continue;
            }
            rem = rem.scale(&lead);
            let scaled = rhs.scale(&c).mul_xk(k - db);
            rem = rem - scaled;
        }
        rem
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() || self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div_poly(&g)
            .expect("gcd divides exactly")
            .monic()
    }

    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = if c.is_one() && k > 0 {
                String::new()
            } else if (-c.clone()).is_one() && k > 0 {
                "-".into()
            } else if c.denom().is_one() {
                format!("{}", c.numer())
            } else {
                format!("{}/{}", c.numer(), c.denom())
            };
            let vs = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let sep = if !cs.is_empty() && !vs.is_empty() { "*" } else { "" };
            parts.push(format!("{cs}{sep}{vs}"));
        }
        let mut s = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                s.push_str(p);
            } else if let Some(stripped) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(stripped);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        s
    }

    /// Horner evaluation into a scalar ring containing `Q`.
    pub fn eval_in<S: Ring>(&self, x: &S) -> Option<S> {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            let cc = x.from_rat(c)?;
            acc = acc.mul(x).add(&cc);
        }
        Some(acc)
    }
}

// ---------------------------------------------------------------------------
// Sylvester resultants
// ---------------------------------------------------------------------------

/// Which variable a bivariate resultant eliminates. The outer variable of a
/// nested `Poly<Poly<C>>` is `t`; `b` elimination transposes first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    T,
    B,
}

/// Resultant as the determinant of the Sylvester matrix with the rows of `f`
/// listed first. Exact over the coefficient ring (Bareiss elimination).
///
/// Conventions: `Res(f, g) = 0` if exactly one input is zero, `1` if both are
/// nonzero constants, `lc^deg` when one is a nonzero constant.
pub fn resultant<C: Coeff>(f: &Poly<C>, g: &Poly<C>) -> Result<C> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::UndefinedResultant);
    }
    if f.is_zero() || g.is_zero() {
        return Ok(C::zero());
    }
    let m = f.degree().unwrap();
    let n = g.degree().unwrap();
    if m == 0 && n == 0 {
        return Ok(C::one());
    }
    if m == 0 {
        return Ok(pow_c(f.leading().unwrap(), n));
    }
    if n == 0 {
        return Ok(pow_c(g.leading().unwrap(), m));
    }
    let size = m + n;
    let mut mat = vec![vec![C::zero(); size]; size];
    // Descending coefficients of f fill the first n rows, shifted.
    for (i, row) in mat.iter_mut().enumerate().take(n) {
        for k in 0..=m {
            row[i + k] = f.coeff(m - k);
        }
    }
    for i in 0..m {
        for k in 0..=n {
            mat[n + i][i + k] = g.coeff(n - k);
        }
    }
    det_bareiss(mat)
}

fn pow_c<C: Coeff>(c: &C, e: usize) -> C {
    let mut acc = C::one();
    for _ in 0..e {
        acc = acc * c.clone();
    }
    acc
}

/// Fraction-free determinant. All interior divisions are exact in the
/// coefficient ring, so integer (or `Z[b]`) inputs give integer outputs.
fn det_bareiss<C: Coeff>(mut m: Vec<Vec<C>>) -> Result<C> {
    let n = m.len();
    if n == 0 {
        return Ok(C::one());
    }
    let mut sign_flip = false;
    let mut prev = C::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return Ok(C::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].clone() * m[i][j].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num
                    .exact_div(&prev)
                    .ok_or_else(|| Error::InexactDivision("bareiss determinant".into()))?;
            }
            m[i][k] = C::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign_flip { -det } else { det })
}

/// Swaps the nesting order of a bivariate polynomial: coefficients of the
/// result's outer variable are the former inner one.
pub fn transpose<C: Coeff>(f: &Poly<Poly<C>>) -> Poly<Poly<C>> {
    let inner_deg = f
        .coeffs()
        .iter()
        .map(|p| p.degree_i64())
        .max()
        .unwrap_or(-1);
    if inner_deg < 0 {
        return Poly::zero();
    }
    let mut rows: Vec<Vec<C>> = vec![vec![C::zero(); f.coeffs().len()]; inner_deg as usize + 1];
    for (i, p) in f.coeffs().iter().enumerate() {
        for (j, c) in p.coeffs().iter().enumerate() {
            rows[j][i] = c.clone();
        }
    }
    Poly::from_coeffs(rows.into_iter().map(Poly::from_coeffs).collect())
}

/// Resultant of two bivariate polynomials eliminating the chosen variable.
pub fn sylvester_resultant<C: Coeff>(
    f: &Poly<Poly<C>>,
    g: &Poly<Poly<C>>,
    eliminate: Var,
) -> Result<Poly<C>> {
    match eliminate {
        Var::T => resultant(f, g),
        Var::B => resultant(&transpose(f), &transpose(g)),
    }
}
