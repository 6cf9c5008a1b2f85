//! Exact machinery for periodic parameter values: the period-n parameter
//! polynomials, reversibility, the constructive infinite family of periodic
//! parameters for reversible data, multiplicity certificates, the resultant
//! monicity laboratory, and finite-field exhaustive checks.
//!
//! Everything here is exact; no numerics enter any verdict.

use crate::exact::factor::{self, OrdFactor};
use crate::exact::finfield::{ff_cycle, FfCtx, FfElem};
use crate::exact::numfield::{NfCtx, NfElem};
use crate::exact::poly::resultant;
use crate::exact::scalar::{rat_from_i64, Ring};
use crate::henon::{orbit_polys, orbit_polys_generic, HenonFamily, InitialPoint};
use crate::{BPoly, BiPoly, Error, QPoly, Rat, Result};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

/// Squarefree polynomial whose roots are exactly the parameters where the
/// point returns to itself after `n` steps: the squarefree part of
/// `gcd(A_n - a, A_{n-1} - b)`, with `gcd(f, 0) = f`. Returns the zero
/// polynomial when both differences vanish identically (the point is
/// periodic over the function field itself).
pub fn sigma_n(family: &HenonFamily, point: &InitialPoint, n: usize) -> Result<QPoly> {
    if n < 1 {
        return Err(Error::Invalid("period must be >= 1".into()));
    }
    let table = orbit_polys(family, point, n)?;
    let f = table.fwd(n).clone() - point.a.clone();
    let prev = if n == 1 {
        point.a.clone()
    } else {
        table.fwd(n - 1).clone()
    };
    let g = prev - point.b.clone();
    if f.is_zero() && g.is_zero() {
        return Ok(QPoly::zero());
    }
    Ok(f.gcd(&g).squarefree_part())
}

/// The three exact reversibility checks: `delta` is a sign, the conjugating
/// involution `(x, y) -> (-delta y, -delta x)` actually reverses the family
/// (the functional identity `f_t(-delta x) = f_t(x)`), and the point lies on
/// the fixed line `delta x + y = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reversibility {
    pub delta_is_sign: bool,
    pub f_parity_ok: bool,
    pub point_on_fixed_line: bool,
}

impl Reversibility {
    pub fn all(&self) -> bool {
        self.delta_is_sign && self.f_parity_ok && self.point_on_fixed_line
    }
}

pub fn reversibility(family: &HenonFamily, point: &InitialPoint) -> Reversibility {
    let one = Rat::one();
    let delta_is_sign = *family.delta() == one || *family.delta() == -one.clone();
    // f(-delta x) = f(x) coefficientwise: (-delta)^d = 1 and
    // c_i (-delta)^(d-i) = c_i for every i.
    let f_parity_ok = delta_is_sign && {
        let md = -family.delta().clone();
        let d = family.degree();
        let mut ok = pow_sign(&md, d) == one;
        for (i, ci) in family.coeff_polys().iter().enumerate() {
            let e = d - (i + 1);
            if pow_sign(&md, e) != one && !ci.is_zero() {
                ok = false;
            }
        }
        ok
    };
    let point_on_fixed_line = (point.a.scale(family.delta()) + point.b.clone()).is_zero();
    Reversibility {
        delta_is_sign,
        f_parity_ok,
        point_on_fixed_line,
    }
}

fn pow_sign(s: &Rat, e: usize) -> Rat {
    if e % 2 == 0 {
        Rat::one()
    } else {
        s.clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// The half-period polynomial: `delta A_m + A_{m-1}` whose vanishing order
/// at a parameter equals the order of `H^(2m)(P) - P` there. The odd
/// variant `delta A_{m+1} + A_{m-1}` (period `2m+1`) exists only for
/// `delta = -1`.
pub fn half_period_poly(
    family: &HenonFamily,
    point: &InitialPoint,
    m: usize,
    parity: Parity,
) -> Result<QPoly> {
    let rev = reversibility(family, point);
    if !rev.all() {
        return Err(Error::Inapplicable(
            "family/point is not reversible with the point on the fixed line".into(),
        ));
    }
    if parity == Parity::Odd && *family.delta() != -Rat::one() {
        return Err(Error::Invalid(
            "odd half-period polynomials require delta = -1".into(),
        ));
    }
    if m < 1 {
        return Err(Error::Invalid("m must be >= 1".into()));
    }
    let hi = match parity {
        Parity::Even => m,
        Parity::Odd => m + 1,
    };
    let table = orbit_polys(family, point, hi)?;
    Ok(table.fwd(hi).scale(family.delta()) + table.fwd(m - 1).clone())
}

/// The cofactor `W_2p = (delta A_p + A_{p-1}) / (delta A_1 + A_0)`, whose
/// roots are parameters of exact period `p` or `2p`. The division is exact;
/// a failed division signals that the multiplicity hypothesis does not hold
/// and is reported, never masked.
pub fn w_factor(family: &HenonFamily, point: &InitialPoint, p: u64) -> Result<QPoly> {
    if p < 3 || p % 2 == 0 || !is_small_prime(p) {
        return Err(Error::Invalid(format!("{p} is not an odd prime")));
    }
    let rev = reversibility(family, point);
    if !rev.all() {
        return Err(Error::Inapplicable(
            "family/point is not reversible with the point on the fixed line".into(),
        ));
    }
    let table = orbit_polys(family, point, p as usize)?;
    let h1 = table.fwd(1).scale(family.delta()) + point.a.clone();
    if h1.is_zero() {
        return Err(Error::Inapplicable(
            "delta A_1 + A_0 vanishes identically".into(),
        ));
    }
    let hp = table.fwd(p as usize).scale(family.delta()) + table.fwd(p as usize - 1).clone();
    let w = hp.exact_div_poly(&h1).ok_or_else(|| {
        Error::CertificateFailed(format!(
            "delta A_{p} + A_{} is not divisible by delta A_1 + A_0",
            p - 1
        ))
    })?;
    if w.is_constant() {
        return Err(Error::CertificateFailed(format!(
            "the period-{p} cofactor is constant"
        )));
    }
    if h1.gcd(&w).degree_i64() != 0 {
        return Err(Error::CertificateFailed(format!(
            "the period-{p} cofactor shares a factor with delta A_1 + A_0"
        )));
    }
    Ok(w)
}

fn is_small_prime(p: u64) -> bool {
    FfCtx::new(p, 1).is_ok()
}

/// An exactly verified periodic parameter: a root of `min_poly` at which
/// the point has the recorded exact period.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaWitness {
    pub min_poly: QPoly,
    pub period: u32,
    pub prime: u64,
    pub residues_verified: bool,
}

impl SigmaWitness {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "min_poly": crate::henon::poly_to_json(&self.min_poly, "t"),
            "period": self.period,
            "p": self.prime,
            "residues_verified": self.residues_verified,
        })
    }
}

/// Certifies one irreducible factor `w | W_2p`: runs the orbit exactly in
/// `Q[t]/(w)`, checks the point returns after `2p` steps, and pins the exact
/// period (one of `p`, `2p`; by coprimality with `delta A_1 + A_0` it is
/// never 1 or 2).
pub fn certify_witness(
    family: &HenonFamily,
    point: &InitialPoint,
    w: &QPoly,
    p: u64,
) -> Result<SigmaWitness> {
    let big_w = w_factor(family, point, p)?;
    if big_w.exact_div_poly(w).is_none() {
        return Err(Error::Invalid(
            "witness polynomial does not divide the period cofactor".into(),
        ));
    }
    if !factor::is_irreducible(w)? {
        return Err(Error::BadModulus(w.display("t")));
    }
    certify_witness_trusted(family, point, w, p)
}

/// The certification core; assumes `w` irreducible and dividing the
/// cofactor (the pipeline guarantees both).
fn certify_witness_trusted(
    family: &HenonFamily,
    point: &InitialPoint,
    w: &QPoly,
    p: u64,
) -> Result<SigmaWitness> {
    let ctx = NfCtx::new(w.clone(), false)?;
    let theta = NfElem::generator(ctx.clone());
    let spec = family.specialize(&theta)?;
    let start = point.specialize(&theta)?;
    let mut cur = start.clone();
    let mut period = None;
    for k in 1..=(2 * p as u32) {
        cur = spec.step_forward(&cur);
        if cur == start && period.is_none() {
            period = Some(k);
        }
    }
    if cur != start {
        return Err(Error::CertificateFailed(format!(
            "orbit modulo the witness polynomial does not close after {} steps",
            2 * p
        )));
    }
    let period = period.unwrap();
    if period != p as u32 && period != 2 * p as u32 {
        return Err(Error::CertificateFailed(format!(
            "unexpected exact period {period}, expected {p} or {}",
            2 * p
        )));
    }
    Ok(SigmaWitness {
        min_poly: w.clone(),
        period,
        prime: p,
        residues_verified: true,
    })
}

/// The constructive pipeline: for each requested odd prime, split off the
/// period cofactor, take its smallest irreducible factor, and certify the
/// resulting parameter exactly. Distinct primes give distinct periods,
/// hence coprime minimal polynomials. Runs the primes in parallel.
pub fn witnesses(
    family: &HenonFamily,
    point: &InitialPoint,
    primes: &[u64],
) -> Result<Vec<SigmaWitness>> {
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted
        .par_iter()
        .map(|&p| {
            let w = w_factor(family, point, p)?;
            let factors = factor::factor(&w)?;
            let (first, _) = factors
                .first()
                .ok_or_else(|| Error::CertificateFailed("cofactor has no factors".into()))?;
            certify_witness_trusted(family, point, first, p)
        })
        .collect()
}

/// 2x2 matrix over `Q[t]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2 {
    pub a: QPoly,
    pub b: QPoly,
    pub c: QPoly,
    pub d: QPoly,
}

impl Mat2 {
    pub fn identity() -> Self {
        Mat2 {
            a: QPoly::one(),
            b: QPoly::zero(),
            c: QPoly::zero(),
            d: QPoly::one(),
        }
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a.clone() * rhs.a.clone() + self.b.clone() * rhs.c.clone(),
            b: self.a.clone() * rhs.b.clone() + self.b.clone() * rhs.d.clone(),
            c: self.c.clone() * rhs.a.clone() + self.d.clone() * rhs.c.clone(),
            d: self.c.clone() * rhs.b.clone() + self.d.clone() * rhs.d.clone(),
        }
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a.clone() + rhs.a.clone(),
            b: self.b.clone() + rhs.b.clone(),
            c: self.c.clone() + rhs.c.clone(),
            d: self.d.clone() + rhs.d.clone(),
        }
    }

    pub fn det(&self) -> QPoly {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }
}

fn f_prime_poly(family: &HenonFamily, x: &QPoly) -> QPoly {
    let d = family.degree();
    let mut acc = QPoly::zero();
    for k in 0..d {
        let coeff = if k == 0 {
            QPoly::one()
        } else {
            family.coeff_polys()[k - 1].clone()
        };
        let scaled = coeff.scale(&rat_from_i64((d - k) as i64));
        acc = acc * x.clone() + scaled;
    }
    acc
}

/// Jacobian of the q-th iterate along the orbit:
/// `J(P) J(H(P)) ... J(H^(q-1)(P))` with factors `[[f'(A_i), 1], [delta, 0]]`.
pub fn jacobian_psi(family: &HenonFamily, point: &InitialPoint, q: u32) -> Result<Mat2> {
    if q < 1 {
        return Err(Error::Invalid("q must be >= 1".into()));
    }
    let table = orbit_polys(family, point, (q as usize).max(1))?;
    let mut acc = Mat2::identity();
    for i in 0..q as usize {
        let ai = if i == 0 {
            point.a.clone()
        } else {
            table.fwd(i).clone()
        };
        let factor = Mat2 {
            a: f_prime_poly(family, &ai),
            b: QPoly::one(),
            c: QPoly::constant(family.delta().clone()),
            d: QPoly::zero(),
        };
        acc = acc.mul(&factor);
    }
    Ok(acc)
}

/// A verified multiplicity certificate: at every root of `alpha_min_poly`,
/// the vanishing order of `H^(qk)(P) - P` equals that of `H^q(P) - P`, for
/// `k` coprime to the eigenvalue-order bound `d_q`.
#[derive(Clone, Debug)]
pub struct MultiplicityCert {
    pub q: u32,
    pub k: u32,
    pub alpha_min_poly: QPoly,
    pub e_q: u32,
    pub d_q: u64,
    pub verified_equal: bool,
    /// The expansion remainder has order >= 2 e_q (checked exactly).
    pub remainder_ord_ok: bool,
}

/// Multiplicative order of an element of `Q[t]/(m)` if it is a root of
/// unity with order <= bound; `None` otherwise.
fn nf_mult_order(x: &NfElem, bound: u64) -> Option<u64> {
    if x.is_zero_elem() {
        return None;
    }
    let one = x.one_like();
    let mut acc = x.clone();
    for j in 1..=bound {
        if acc == one {
            return Some(j);
        }
        acc = acc.mul(x);
    }
    None
}

/// Largest possible root-of-unity order in a field of the given degree over
/// the rationals: the order's totient cannot exceed the degree.
fn max_unity_order(field_degree: u64) -> u64 {
    let phi = |n: u64| -> u64 {
        let mut n0 = n;
        let mut out = n;
        let mut p = 2;
        while p * p <= n0 {
            if n0 % p == 0 {
                out = out / p * (p - 1);
                while n0 % p == 0 {
                    n0 /= p;
                }
            }
            p += 1;
        }
        if n0 > 1 {
            out = out / n0 * (n0 - 1);
        }
        out
    };
    let mut best = 1;
    // phi(n) >= sqrt(n/2), so orders are bounded by 2 deg^2 + 1.
    for n in 1..=(2 * field_degree * field_degree + 1) {
        if phi(n) <= field_degree {
            best = n;
        }
    }
    best
}

/// Computes the eigenvalue-order product `D_(q,alpha)` from the
/// characteristic polynomial of the Jacobian at the root: each eigenvalue
/// contributes its multiplicative order (1 when it is not a root of unity,
/// which is provable once the search passes the field-degree cutoff).
fn eigenvalue_order_bound(psi: &Mat2, m_alpha: &QPoly, order_bound: u64) -> Result<u64> {
    let ctx = NfCtx::new(m_alpha.clone(), false)?;
    let reduce = |p: &QPoly| -> Result<NfElem> { Ok(NfElem::new(ctx.clone(), p.rem(m_alpha)?)) };
    let tr = reduce(&(psi.a.clone() + psi.d.clone()))?;
    let det = reduce(&psi.det())?;
    let four = NfElem::from_rational(ctx.clone(), rat_from_i64(4));
    let disc = tr.mul(&tr).sub(&four.mul(&det));
    // Provable cutoff: eigenvalues live in a quadratic extension of
    // Q[t]/(m_alpha).
    let cutoff = max_unity_order(2 * ctx.degree() as u64);
    let bound = order_bound.min(cutoff);
    let resolved_fully = cutoff <= order_bound;

    if disc.is_zero_elem() {
        let half = NfElem::from_rational(ctx.clone(), rat_from_i64(1) / rat_from_i64(2));
        let lambda = tr.mul(&half);
        let o = nf_mult_order(&lambda, bound);
        return match (o, resolved_fully) {
            (Some(j), _) => Ok(j),
            (None, true) => Ok(1),
            (None, false) => Err(Error::Unresolved(format!(
                "eigenvalue order not resolved within bound {order_bound}"
            ))),
        };
    }

    // xi^j tracked as u + v*xi modulo xi^2 - tr*xi + det.
    let one = tr.one_like();
    let zero = tr.zero_like();
    let mut u = zero.clone();
    let mut v = one.clone();
    for j in 1..=bound {
        if v.is_zero_elem() && u == one {
            // Both eigenvalues satisfy xi^j = 1; no individual eigenvalue
            // had a smaller order or the branch below would have fired.
            return Ok(j);
        }
        if !v.is_zero_elem() {
            // A single eigenvalue with xi^j = 1 must equal (1 - u)/v.
            let cand = one.sub(&u).mul(&v.inv_checked()?);
            let chi = cand.mul(&cand).sub(&tr.mul(&cand)).add(&det);
            if chi.is_zero_elem() {
                let other = tr.sub(&cand);
                let o2 = nf_mult_order(&other, bound);
                let o2 = match (o2, resolved_fully) {
                    (Some(x), _) => x,
                    (None, true) => 1,
                    (None, false) => {
                        return Err(Error::Unresolved(format!(
                            "eigenvalue order not resolved within bound {order_bound}"
                        )))
                    }
                };
                return Ok(j.lcm(&o2));
            }
        }
        // (u + v xi) xi = -v det + (u + v tr) xi.
        let nu = v.mul(&det).neg();
        let nv = u.add(&v.mul(&tr));
        u = nu;
        v = nv;
    }
    if resolved_fully {
        Ok(1)
    } else {
        Err(Error::Unresolved(format!(
            "eigenvalue order not resolved within bound {order_bound}"
        )))
    }
}

/// Verifies the order-stability law at every root of `alpha_min_poly`:
/// `ord(H^(qk)(P) - P) = ord(H^q(P) - P)` for `k` coprime to the
/// eigenvalue bound, plus the quadratic remainder estimate.
pub fn multiplicity_cert(
    family: &HenonFamily,
    point: &InitialPoint,
    q: u32,
    k: u32,
    alpha_min_poly: &QPoly,
    order_bound: u64,
) -> Result<MultiplicityCert> {
    if alpha_min_poly.degree_i64() < 1 {
        return Err(Error::BadModulus("degree < 1".into()));
    }
    if q < 1 || k < 1 {
        return Err(Error::Invalid("q and k must be >= 1".into()));
    }
    let table = orbit_polys(family, point, (q * k) as usize)?;
    let eps = table.fwd(q as usize).clone() - point.a.clone();
    let zeta = if q >= 2 {
        table.fwd(q as usize - 1).clone() - point.b.clone()
    } else {
        point.a.clone() - point.b.clone()
    };
    let ord_pair = |f: &QPoly, g: &QPoly| -> Result<OrdFactor> {
        Ok(factor::ord_factor(f, alpha_min_poly)?.min(factor::ord_factor(g, alpha_min_poly)?))
    };
    let e_q = match ord_pair(&eps, &zeta)? {
        OrdFactor::Infinite => {
            return Err(Error::Inapplicable(
                "the point is q-periodic over the function field".into(),
            ))
        }
        OrdFactor::Finite(e) => e,
    };
    if e_q < 1 {
        return Err(Error::HypothesisViolated(
            "the parameter is not a root of H^q(P) - P".into(),
        ));
    }
    let psi = jacobian_psi(family, point, q)?;
    let d_q = eigenvalue_order_bound(&psi, alpha_min_poly, order_bound)?;
    if (k as u64).gcd(&d_q) != 1 {
        return Err(Error::HypothesisViolated(format!(
            "k = {k} is not coprime to the eigenvalue order bound {d_q}"
        )));
    }
    let eps_k = table.fwd((q * k) as usize).clone() - point.a.clone();
    let zeta_k = if q * k >= 2 {
        table.fwd((q * k) as usize - 1).clone() - point.b.clone()
    } else {
        point.a.clone() - point.b.clone()
    };
    let e_qk = ord_pair(&eps_k, &zeta_k)?;
    let verified_equal = e_qk == OrdFactor::Finite(e_q);
    if !verified_equal {
        return Err(Error::CertificateFailed(format!(
            "order at qk is {e_qk:?}, expected {e_q}"
        )));
    }

    // Remainder of the linearized expansion: H^(qk)(P) - P minus
    // (eps, zeta) * sum_{i<k} Psi^i must vanish to order >= 2 e_q.
    let mut acc = Mat2::identity();
    let mut sum = Mat2::identity();
    for _ in 1..k {
        acc = acc.mul(&psi);
        sum = sum.add(&acc);
    }
    let lin_x = eps.clone() * sum.a.clone() + zeta.clone() * sum.c.clone();
    let lin_y = eps.clone() * sum.b.clone() + zeta.clone() * sum.d.clone();
    let rx = eps_k - lin_x;
    let ry = zeta_k - lin_y;
    let r_ord = ord_pair(&rx, &ry)?;
    let remainder_ord_ok = r_ord.at_least(2 * e_q);
    if !remainder_ord_ok {
        return Err(Error::CertificateFailed(format!(
            "expansion remainder has order {r_ord:?} < 2 e_q = {}",
            2 * e_q
        )));
    }
    Ok(MultiplicityCert {
        q,
        k,
        alpha_min_poly: alpha_min_poly.clone(),
        e_q,
        d_q,
        verified_equal,
        remainder_ord_ok,
    })
}

/// Report of the resultant-in-b computation for the quadratic family with
/// symbolic initial point `(0, b)`.
#[derive(Clone, Debug)]
pub struct ResultantReport {
    pub n: usize,
    pub poly: BPoly,
    pub degree: i64,
    pub leading: Rat,
    pub leading_is_unit: bool,
    pub integer_coeffs: bool,
    /// For even n: the half-orbit reduction identity held up to sign.
    pub reduction_identity: Option<bool>,
}

/// `Res_t(A_n, A_{n-1} - b)` as an exact polynomial in `b`, with the
/// monicity report; for even `n` the half-orbit reduction
/// `Res_t(A_n, A_{n-1} - b) = +- Res_t(A_m - B_{m-1}, A_{m-1} - B_m)` is
/// verified as well.
pub fn resultant_in_b(family: &HenonFamily, n: usize) -> Result<ResultantReport> {
    if *family != HenonFamily::quadratic() {
        return Err(Error::Inapplicable(
            "the resultant laboratory is specific to (x, y) -> (y + x^2 + t, x)".into(),
        ));
    }
    if n < 2 {
        return Err(Error::Invalid("n must be >= 2".into()));
    }
    let bvar = BPoly::var();
    let zero = BiPoly::zero();
    let b_pt = BiPoly::constant(bvar.clone());
    let c_lifted = vec![
        BiPoly::zero(),
        BiPoly::from_coeffs(vec![BPoly::zero(), BPoly::one()]),
    ];
    let table = orbit_polys_generic(2, &BPoly::one(), &c_lifted, &zero, &b_pt, n)?;
    let an = table.fwd(n).clone();
    let an1 = table.fwd(n - 1).clone() - b_pt.clone();
    let res = resultant(&an, &an1)?;
    let degree = res.degree_i64();
    let leading = res.leading().cloned().unwrap_or_else(Rat::zero);
    let leading_is_unit = leading.clone().abs() == Rat::one();
    let integer_coeffs = res.coeffs().iter().all(|c| c.denom().is_one());
    let reduction_identity = if n % 2 == 0 {
        let m = n / 2;
        let cm = table.fwd(m).clone() - table.bwd(m - 1).clone();
        let dm = table.fwd(m - 1).clone() - table.bwd(m).clone();
        let rhs = resultant(&cm, &dm)?;
        Some(res == rhs || res == -rhs)
    } else {
        None
    };
    Ok(ResultantReport {
        n,
        poly: res,
        degree,
        leading,
        leading_is_unit,
        integer_coeffs,
        reduction_identity,
    })
}

/// Emptiness certificate for the quadratic family at `(0, b)`: a rational
/// non-integer is never an algebraic integer, so no parameter makes the
/// point periodic. Integral `b` is outside the theorem's reach.
pub fn sigma_empty_certificate(family: &HenonFamily, b: &Rat) -> Result<bool> {
    if *family != HenonFamily::quadratic() {
        return Err(Error::Inapplicable(
            "the emptiness certificate is specific to (x, y) -> (y + x^2 + t, x)".into(),
        ));
    }
    if b.denom().is_one() {
        return Err(Error::Inapplicable(format!(
            "b = {b} is an algebraic integer; the certificate does not apply"
        )));
    }
    Ok(true)
}

/// Exhaustive periodicity over `F_(p^k)` for the quadratic family: every
/// parameter value makes every point periodic on the finite plane. Returns
/// the exact period per parameter.
pub fn finite_field_sigma(
    p: u64,
    k: u32,
    a_coeffs: &[i64],
    b_coeffs: &[i64],
) -> Result<Vec<(Vec<u64>, u64)>> {
    let ctx = FfCtx::new(p, k)?;
    let from = |cs: &[i64]| -> FfElem {
        let mut acc = FfElem::from_int(ctx.clone(), 0);
        let gen = FfElem::generator(ctx.clone());
        let mut pw = acc.one_like();
        for &c in cs {
            acc = acc.add(&FfElem::from_int(ctx.clone(), c).mul(&pw));
            pw = pw.mul(&gen);
        }
        acc
    };
    let a = from(a_coeffs);
    let b = from(b_coeffs);
    let mut out = Vec::new();
    for t in ctx.all_elements() {
        let step = |pt: &(FfElem, FfElem)| -> (FfElem, FfElem) {
            let (x, y) = pt;
            (y.add(&x.mul(x)).add(&t), x.clone())
        };
        let period = ff_cycle(&(a.clone(), b.clone()), step);
        let mut key = t.coeffs().to_vec();
        key.resize(k as usize, 0);
        out.push((key, period));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::parse_rat;
    use crate::exact::scalar::rat_from_i64 as q;

    fn quad() -> HenonFamily {
        HenonFamily::quadratic()
    }

    fn origin() -> InitialPoint {
        InitialPoint::constant(q(0), q(0))
    }

    fn qp(cs: &[i64]) -> QPoly {
        QPoly::from_coeffs(cs.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn sigma_n_examples() {
        let t = QPoly::var();
        assert_eq!(sigma_n(&quad(), &origin(), 1).unwrap(), t);
        assert_eq!(sigma_n(&quad(), &origin(), 2).unwrap(), t);
        // No periodic parameters at all for (0, 1/2).
        let half = InitialPoint::constant(q(0), parse_rat("1/2").unwrap());
        for n in 1..=6 {
            let s = sigma_n(&quad(), &half, n).unwrap();
            assert_eq!(s.degree_i64(), 0, "n = {n}");
        }
    }

    #[test]
    fn reversibility_examples() {
        let r = reversibility(&quad(), &origin());
        assert!(r.delta_is_sign && r.f_parity_ok && r.point_on_fixed_line);
        let p2 = InitialPoint::constant(q(-1), q(1));
        assert!(reversibility(&quad(), &p2).point_on_fixed_line);
        let half = InitialPoint::constant(q(0), parse_rat("1/2").unwrap());
        assert!(!reversibility(&quad(), &half).point_on_fixed_line);
        // An odd coefficient breaks evenness for delta = 1.
        let odd = HenonFamily::new(2, q(1), vec![QPoly::var(), QPoly::var()]).unwrap();
        assert!(!reversibility(&odd, &origin()).f_parity_ok);
    }

    #[test]
    fn half_period_examples() {
        let f = quad();
        let p = origin();
        assert_eq!(
            half_period_poly(&f, &p, 1, Parity::Even).unwrap(),
            qp(&[0, 1])
        );
        assert_eq!(
            half_period_poly(&f, &p, 2, Parity::Even).unwrap(),
            qp(&[0, 2, 1])
        );
        assert_eq!(
            half_period_poly(&f, &p, 3, Parity::Even).unwrap(),
            qp(&[0, 3, 2, 2, 1])
        );
        // Odd variant needs delta = -1.
        assert!(half_period_poly(&f, &p, 2, Parity::Odd).is_err());
    }

    #[test]
    fn w_factor_examples() {
        let w6 = w_factor(&quad(), &origin(), 3).unwrap();
        assert_eq!(w6, qp(&[3, 2, 2, 1]));
        let w10 = w_factor(&quad(), &origin(), 5).unwrap();
        assert_eq!(w10.degree_i64(), 15);
        let h1 = QPoly::var();
        assert_eq!(w10.gcd(&h1).degree_i64(), 0);
    }

    #[test]
    fn witness_for_p3() {
        let w6 = w_factor(&quad(), &origin(), 3).unwrap();
        let wit = certify_witness(&quad(), &origin(), &w6, 3).unwrap();
        assert!(wit.residues_verified);
        assert_eq!(wit.period, 6);
        assert_eq!(wit.min_poly, qp(&[3, 2, 2, 1]));
    }

    #[test]
    fn witnesses_p3_p5_distinct() {
        let ws = witnesses(&quad(), &origin(), &[3, 5]).unwrap();
        assert_eq!(ws.len(), 2);
        assert!(ws.iter().all(|w| w.residues_verified));
        assert!(ws[0].period == 3 || ws[0].period == 6);
        assert!(ws[1].period == 5 || ws[1].period == 10);
        let g = ws[0].min_poly.gcd(&ws[1].min_poly);
        assert_eq!(g.degree_i64(), 0);
    }

    #[test]
    fn jacobian_examples() {
        let psi1 = jacobian_psi(&quad(), &origin(), 1).unwrap();
        assert_eq!(psi1.a, QPoly::zero());
        assert_eq!(psi1.b, QPoly::one());
        assert_eq!(psi1.c, QPoly::one());
        assert_eq!(psi1.d, QPoly::zero());
        let psi2 = jacobian_psi(&quad(), &origin(), 2).unwrap();
        assert_eq!(psi2.a, QPoly::one());
        assert_eq!(psi2.b, QPoly::zero());
        assert_eq!(psi2.c, qp(&[0, 2]));
        assert_eq!(psi2.d, QPoly::one());
        for qq in 1..=4u32 {
            let psi = jacobian_psi(&quad(), &origin(), qq).unwrap();
            let expect = if qq % 2 == 0 { q(1) } else { q(-1) };
            assert_eq!(psi.det(), QPoly::constant(expect));
        }
    }

    #[test]
    fn multiplicity_certificates() {
        let t = QPoly::var();
        for k in [1u32, 3, 5] {
            let cert = multiplicity_cert(&quad(), &origin(), 2, k, &t, 64).unwrap();
            assert_eq!(cert.e_q, 1);
            assert_eq!(cert.d_q, 1);
            assert!(cert.verified_equal);
            assert!(cert.remainder_ord_ok);
        }
    }

    #[test]
    fn multiplicity_rejects_non_coprime_k() {
        // q = 1 at alpha = 0: Psi_1 = [[0,1],[1,0]] has eigenvalues +-1, so
        // the order bound is 2 and even k must be rejected.
        let t = QPoly::var();
        let err = multiplicity_cert(&quad(), &origin(), 1, 2, &t, 64);
        assert!(matches!(err, Err(Error::HypothesisViolated(_))), "{err:?}");
        let ok = multiplicity_cert(&quad(), &origin(), 1, 3, &t, 64).unwrap();
        assert_eq!(ok.d_q, 2);
        assert!(ok.verified_equal);
    }

    #[test]
    fn order_preserved_under_unimodular_matrices() {
        // v(r A) = v(r) for any matrix invertible at the root.
        let t = QPoly::var();
        let r = (qp(&[0, 0, 3]), qp(&[0, 1]));
        let mats = [
            Mat2 {
                a: qp(&[1]),
                b: qp(&[4]),
                c: qp(&[2]),
                d: qp(&[9]),
            },
            Mat2 {
                a: qp(&[1, 1]),
                b: qp(&[0, 1]),
                c: qp(&[3]),
                d: qp(&[1, 5]),
            },
        ];
        for m in mats {
            assert!(!m.det().eval(&q(0)).is_zero(), "not invertible at 0");
            let sx = r.0.clone() * m.a.clone() + r.1.clone() * m.c.clone();
            let sy = r.0.clone() * m.b.clone() + r.1.clone() * m.d.clone();
            let orig = factor::ord_factor(&r.0, &t)
                .unwrap()
                .min(factor::ord_factor(&r.1, &t).unwrap());
            let image = factor::ord_factor(&sx, &t)
                .unwrap()
                .min(factor::ord_factor(&sy, &t).unwrap());
            assert_eq!(orig, image);
        }
    }

    #[test]
    fn order_equivalence_for_half_periods() {
        // ord(H^(2m)(P) - P) = ord(delta A_m + A_{m-1}) at every irreducible
        // factor, for m <= 3.
        let f = quad();
        let p = origin();
        for m in 1..=3usize {
            let hm = half_period_poly(&f, &p, m, Parity::Even).unwrap();
            let table = orbit_polys(&f, &p, 2 * m).unwrap();
            let eps = table.fwd(2 * m).clone() - p.a.clone();
            let zeta = table.fwd(2 * m - 1).clone() - p.b.clone();
            for (w, _) in factor::factor(&hm).unwrap() {
                let lhs = factor::ord_factor(&eps, &w)
                    .unwrap()
                    .min(factor::ord_factor(&zeta, &w).unwrap());
                let rhs = factor::ord_factor(&hm, &w).unwrap();
                assert_eq!(lhs, rhs, "m = {m}, w = {}", w.display("t"));
            }
        }
    }

    #[test]
    fn resultant_lab_small_cases() {
        let r2 = resultant_in_b(&quad(), 2).unwrap();
        assert_eq!(r2.poly, BPoly::from_coeffs(vec![q(0), q(0), q(1)]));
        assert_eq!(r2.degree, 2);
        assert!(r2.leading_is_unit && r2.integer_coeffs);
        assert_eq!(r2.reduction_identity, Some(true));

        let r3 = resultant_in_b(&quad(), 3).unwrap();
        assert_eq!(r3.degree, 4);
        assert!(r3.leading_is_unit && r3.integer_coeffs);

        // Wrong family is rejected.
        let cubic =
            HenonFamily::new(3, q(1), vec![QPoly::zero(), QPoly::zero(), QPoly::var()]).unwrap();
        assert!(resultant_in_b(&cubic, 2).is_err());
    }

    #[test]
    fn emptiness_certificate() {
        assert!(sigma_empty_certificate(&quad(), &parse_rat("1/2").unwrap()).unwrap());
        assert!(matches!(
            sigma_empty_certificate(&quad(), &q(3)),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn finite_field_exhaustive() {
        let table = finite_field_sigma(5, 1, &[0], &[0]).unwrap();
        assert_eq!(table.len(), 5);
        assert!(table.iter().all(|(_, period)| *period >= 1));
        let table = finite_field_sigma(3, 1, &[1], &[2]).unwrap();
        assert_eq!(table.len(), 3);
    }
}
