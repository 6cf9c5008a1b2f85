//! Factorization of univariate polynomials over `Q`, and irreducible-factor
//! multiplicities.
//!
//! The pipeline is the classical one: Yun squarefree decomposition, Berlekamp
//! factorization modulo a small prime chosen to minimize the modular factor
//! count, quadratic Hensel lifting past the Mignotte bound, and subset
//! recombination with trial division. Everything is deterministic: candidate
//! primes come from a fixed list and ties break toward the smaller prime.

use crate::exact::modp::{pdivrem, pgcd, pinv, pmul, ppowmod, psub, ptrim};
use crate::{Error, Int, QPoly, Rat, Result};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const CANDIDATE_PRIMES: [u64; 12] = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43];

/// Multiplicity of the irreducible factor `m` in `F`; the zero polynomial
/// has infinite order at every factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrdFactor {
    Finite(u32),
    Infinite,
}

impl OrdFactor {
    pub fn finite(self) -> Option<u32> {
        match self {
            OrdFactor::Finite(e) => Some(e),
            OrdFactor::Infinite => None,
        }
    }

    pub fn min(self, other: OrdFactor) -> OrdFactor {
        match (self, other) {
            (OrdFactor::Infinite, o) | (o, OrdFactor::Infinite) => o,
            (OrdFactor::Finite(a), OrdFactor::Finite(b)) => OrdFactor::Finite(a.min(b)),
        }
    }

    pub fn at_least(self, e: u32) -> bool {
        match self {
            OrdFactor::Infinite => true,
            OrdFactor::Finite(k) => k >= e,
        }
    }
}

/// Largest `e` with `m^e | f`. Errors unless `m` is irreducible of
/// degree >= 1.
pub fn ord_factor(f: &QPoly, m: &QPoly) -> Result<OrdFactor> {
    if m.degree_i64() < 1 {
        return Err(Error::BadModulus(format!(
            "degree {} < 1",
            m.degree_i64()
        )));
    }
    if m.degree_i64() > 1 && !is_irreducible(m)? {
        return Err(Error::BadModulus(m.display("t")));
    }
    if f.is_zero() {
        return Ok(OrdFactor::Infinite);
    }
    let mut e = 0u32;
    let mut cur = f.clone();
    while let Some(next) = cur.exact_div_poly(m) {
        e += 1;
        cur = next;
    }
    Ok(OrdFactor::Finite(e))
}

/// Monic irreducible factors of `f` with multiplicities, sorted by degree
/// then by coefficients. The rational content and leading coefficient are
/// dropped.
pub fn factor(f: &QPoly) -> Result<Vec<(QPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::Invalid("cannot factor the zero polynomial".into()));
    }
    if f.degree_i64() < 1 {
        return Ok(Vec::new());
    }
    let mut out: Vec<(QPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&f.monic()) {
        for irr in factor_squarefree(&part)? {
            out.push((irr, mult));
        }
    }
    out.sort_by(|a, b| cmp_poly(&a.0, &b.0));
    Ok(out)
}

pub fn is_irreducible(f: &QPoly) -> Result<bool> {
    match f.degree_i64() {
        d if d < 1 => Ok(false),
        1 => Ok(true),
        _ => {
            let fs = factor(f)?;
            Ok(fs.len() == 1 && fs[0].1 == 1)
        }
    }
}

/// Rational roots of `f`, sorted, from its degree-one factors.
pub fn rational_roots(f: &QPoly) -> Result<Vec<Rat>> {
    let mut roots = Vec::new();
    for (g, _) in factor(f)? {
        if g.degree() == Some(1) {
            roots.push(-g.coeff(0));
        }
    }
    roots.sort();
    Ok(roots)
}

fn cmp_poly(a: &QPoly, b: &QPoly) -> std::cmp::Ordering {
    a.degree_i64()
        .cmp(&b.degree_i64())
        .then_with(|| {
            for k in (0..a.coeffs().len().max(b.coeffs().len())).rev() {
                let c = a.coeff(k).cmp(&b.coeff(k));
                if c != std::cmp::Ordering::Equal {
                    return c;
                }
            }
            std::cmp::Ordering::Equal
        })
}

/// Yun's algorithm: returns squarefree monic parts with multiplicities.
fn squarefree_decomposition(f: &QPoly) -> Vec<(QPoly, u32)> {
    let mut out = Vec::new();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div_poly(&a0).expect("gcd divides").monic();
    let mut c = df.exact_div_poly(&a0).expect("gcd divides");
    let mut d = c.clone() - b.derivative();
    let mut i = 1u32;
    while !b.is_constant() {
        let ai = b.gcd(&d);
        if ai.degree_i64() > 0 {
            out.push((ai.clone(), i));
        }
        b = b.exact_div_poly(&ai).expect("gcd divides").monic();
        c = d.exact_div_poly(&ai).expect("gcd divides");
        d = c.clone() - b.derivative();
        i += 1;
    }
    out
}

/// Factors a squarefree monic rational polynomial into monic irreducibles.
fn factor_squarefree(f: &QPoly) -> Result<Vec<QPoly>> {
    let n = f.degree().unwrap();
    if n == 1 {
        return Ok(vec![f.clone()]);
    }
    // Clear denominators, then monicize by substituting x -> x / lc so the
    // integer routine only ever sees monic input.
    let prim = f.primitive_part();
    let zc: Vec<Int> = prim
        .coeffs()
        .iter()
        .map(|c| c.numer().clone())
        .collect();
    let lc = zc.last().unwrap().clone();
    let (monic_z, scaled) = if lc.is_one() {
        (zc.clone(), false)
    } else {
        // g(x) = lc^(n-1) * prim(x / lc) is monic with integer coefficients.
        let mut g = vec![Int::zero(); n + 1];
        for (k, c) in zc.iter().enumerate() {
            g[k] = c * lc.pow((n - 1 - k.min(n - 1)) as u32);
        }
        g[n] = Int::one();
        (g, true)
    };
    let factors_z = factor_monic_integer(&monic_z)?;
    let mut out = Vec::with_capacity(factors_z.len());
    for fz in factors_z {
        let mut q = QPoly::from_coeffs(fz.iter().map(|c| Rat::from_integer(c.clone())).collect());
        if scaled {
            // Undo x -> x / lc: substitute x -> lc * x and renormalize.
            let d = q.degree().unwrap();
            let coeffs: Vec<Rat> = (0..=d)
                .map(|k| q.coeff(k) * Rat::from_integer(lc.pow(k as u32)))
                .collect();
            q = QPoly::from_coeffs(coeffs).monic();
        }
        out.push(q.monic());
    }
    Ok(out)
}

/// Zassenhaus on a squarefree monic integer polynomial.
fn factor_monic_integer(f: &[Int]) -> Result<Vec<Vec<Int>>> {
    let n = f.len() - 1;
    debug_assert!(f[n].is_one());

    // Pick the usable prime with the fewest modular factors.
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    for &p in &CANDIDATE_PRIMES {
        let fp = reduce_mod_p(f, p);
        if fp.len() != n + 1 {
            continue; // leading coefficient vanished (cannot happen, monic)
        }
        if !squarefree_mod_p(&fp, p) {
            continue;
        }
        let factors = berlekamp(&fp, p);
        if factors.len() == 1 {
            return Ok(vec![f.to_vec()]);
        }
        match &best {
            Some((_, cur)) if cur.len() <= factors.len() => {}
            _ => best = Some((p, factors)),
        }
        if best.as_ref().map(|(_, v)| v.len()) == Some(2) {
            break;
        }
    }
    let (p, mut mod_factors) = best.ok_or_else(|| {
        Error::Invalid("no usable prime for factorization (input not squarefree?)".into())
    })?;
    mod_factors.sort();

    // Hensel-lift past twice the Mignotte factor bound.
    let bound = mignotte_bound(f);
    let mut modulus = Int::from(p);
    let mut k = 1u32;
    while modulus <= &bound * 2 {
        modulus *= Int::from(p);
        k += 1;
    }
    let target = modulus;
    let lifted = hensel_lift_tree(f, &mod_factors, p, k, &target)?;

    // Subset recombination with trial division over Z.
    Ok(recombine(f.to_vec(), lifted, &target))
}

/// 2^n * sqrt(sum c_i^2): every irreducible factor of a monic f has
/// coefficients bounded by this.
fn mignotte_bound(f: &[Int]) -> Int {
    let norm2_sq: Int = f.iter().map(|c| c * c).sum();
    let sqrt = norm2_sq.sqrt() + 1;
    sqrt << (f.len() - 1)
}

fn reduce_mod_p(f: &[Int], p: u64) -> Vec<u64> {
    let pi = Int::from(p);
    let mut out: Vec<u64> = f
        .iter()
        .map(|c| {
            let r = c.mod_floor(&pi);
            r.to_u64().unwrap()
        })
        .collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

// --- factorization over F_p -------------------------------------------------

fn squarefree_mod_p(f: &[u64], p: u64) -> bool {
    let mut d = vec![0u64; f.len().saturating_sub(1)];
    for (k, slot) in d.iter_mut().enumerate() {
        *slot = ((k as u64 + 1) % p) as u64 * f[k + 1] % p;
    }
    let d = ptrim(d);
    if d.is_empty() {
        return false;
    }
    pgcd(f, &d, p).len() == 1
}

/// Deterministic Berlekamp over F_p: monic irreducible factors of a monic
/// squarefree input.
fn berlekamp(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    // Frobenius matrix: row i holds coefficients of x^(p*i) mod f.
    let xp = ppowmod(&[0, 1], p, f, p);
    let mut q_rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut r = vec![1u64];
    for _ in 0..n {
        let mut row = vec![0u64; n];
        for (k, &c) in r.iter().enumerate() {
            row[k] = c;
        }
        q_rows.push(row);
        r = pdivrem(&pmul(&r, &xp, p), f, p).1;
    }
    // Nullspace of (Q - I) acting on row vectors v: v Q = v.
    let mut m = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            // transpose so we solve M v^T = 0 with M = (Q - I)^T
            m[j][i] = q_rows[i][j];
        }
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = (row[i] + p - 1) % p;
    }
    let basis = nullspace_mod_p(m, p);
    let r_count = basis.len();
    let mut factors: Vec<Vec<u64>> = vec![f.to_vec()];
    'outer: for v in &basis {
        if factors.len() == r_count {
            break;
        }
        let vp = ptrim(v.clone());
        if vp.len() <= 1 {
            continue; // the constant vector never splits anything
        }
        let mut next: Vec<Vec<u64>> = Vec::new();
        for u in factors.drain(..) {
            if u.len() <= 2 {
                next.push(u);
                continue;
            }
            let mut pieces = vec![u];
            for s in 0..p {
                let mut done = Vec::new();
                let mut todo = Vec::new();
                for w in pieces.drain(..) {
                    if w.len() <= 2 {
                        done.push(w);
                        continue;
                    }
                    let mut shifted = vp.clone();
                    shifted[0] = (shifted[0] + p - s) % p;
                    let g = pgcd(&w, &ptrim(shifted), p);
                    if g.len() > 1 && g.len() < w.len() {
                        let (q, _) = pdivrem(&w, &g, p);
                        todo.push(g);
                        todo.push(q);
                    } else {
                        todo.push(w);
                    }
                }
                pieces = done;
                pieces.extend(todo);
            }
            next.extend(pieces);
        }
        factors = next;
        if factors.len() == r_count {
            break 'outer;
        }
    }
    factors
}

fn nullspace_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut pivot_col_of_row = vec![usize::MAX; n];
    let mut row = 0usize;
    for col in 0..n {
        if let Some(r) = (row..n).find(|&r| m[r][col] != 0) {
            m.swap(row, r);
            let inv = pinv(m[row][col], p);
            for c in &mut m[row] {
                *c = (*c as u128 * inv as u128 % p as u128) as u64;
            }
            for r2 in 0..n {
                if r2 != row && m[r2][col] != 0 {
                    let fct = m[r2][col];
                    for c in 0..n {
                        let sub = (fct as u128 * m[row][c] as u128 % p as u128) as u64;
                        m[r2][c] = (m[r2][c] + p - sub) % p;
                    }
                }
            }
            pivot_col_of_row[row] = col;
            row += 1;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row[..row].to_vec();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = (p - m[r][free]) % p;
        }
        basis.push(v);
    }
    basis
}

// --- Hensel lifting over Z/p^k --------------------------------------------

fn zmod(v: &Int, m: &Int) -> Int {
    v.mod_floor(m)
}

fn zp_trim(mut v: Vec<Int>) -> Vec<Int> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zp_mul(a: &[Int], b: &[Int], m: &Int) -> Vec<Int> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = zmod(&(&out[i + j] + x * y), m);
        }
    }
    zp_trim(out)
}

fn zp_add(a: &[Int], b: &[Int], m: &Int) -> Vec<Int> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let x = a.get(k).cloned().unwrap_or_else(Int::zero);
        let y = b.get(k).cloned().unwrap_or_else(Int::zero);
        out.push(zmod(&(x + y), m));
    }
    zp_trim(out)
}

fn zp_sub(a: &[Int], b: &[Int], m: &Int) -> Vec<Int> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let x = a.get(k).cloned().unwrap_or_else(Int::zero);
        let y = b.get(k).cloned().unwrap_or_else(Int::zero);
        out.push(zmod(&(x - y), m));
    }
    zp_trim(out)
}

/// Division by a monic divisor over Z/m.
fn zp_divrem_monic(a: &[Int], b: &[Int], m: &Int) -> (Vec<Int>, Vec<Int>) {
    assert!(b.last().map_or(false, |c| c.is_one()));
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let mut rem = a.to_vec();
    let mut quot = vec![Int::zero(); a.len() - b.len() + 1];
    for k in (b.len() - 1..a.len()).rev() {
        let q = rem[k].clone();
        if q.is_zero() {
            continue;
        }
        quot[k - (b.len() - 1)] = q.clone();
        for (j, bc) in b.iter().enumerate() {
            let idx = k - (b.len() - 1) + j;
            rem[idx] = zmod(&(&rem[idx] - &q * bc), m);
        }
    }
    (zp_trim(quot), zp_trim(rem))
}

fn lift_u64_poly(f: &[u64]) -> Vec<Int> {
    f.iter().map(|&c| Int::from(c)).collect()
}

/// Extended Euclid over F_p[x]: s*a + t*b = 1 for coprime a, b.
fn bezout_mod_p(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1, p);
        let s = psub(&s0, &pmul(&q, &s1, p), p);
        let t = psub(&t0, &pmul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    assert_eq!(r0.len(), 1, "bezout of non-coprime polynomials");
    let inv = pinv(r0[0], p);
    let scale = |v: Vec<u64>| -> Vec<u64> {
        v.into_iter()
            .map(|c| (c as u128 * inv as u128 % p as u128) as u64)
            .collect()
    };
    (scale(s0), scale(t0))
}

/// One quadratic Hensel step: from f = g*h (mod m) with s*g + t*h = 1 (mod m)
/// to the same data mod m^2. All of f, g, h monic.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &[Int],
    g: &[Int],
    h: &[Int],
    s: &[Int],
    t: &[Int],
    m2: &Int,
) -> (Vec<Int>, Vec<Int>, Vec<Int>, Vec<Int>) {
    let e = zp_sub(f, &zp_mul(g, h, m2), m2);
    let (q, r) = zp_divrem_monic(&zp_mul(s, &e, m2), h, m2);
    let g_new = zp_add(&zp_add(g, &zp_mul(t, &e, m2), m2), &zp_mul(&q, g, m2), m2);
    let h_new = zp_add(h, &r, m2);
    let b = zp_sub(
        &zp_add(&zp_mul(s, &g_new, m2), &zp_mul(t, &h_new, m2), m2),
        &[Int::one()],
        m2,
    );
    let (c, d) = zp_divrem_monic(&zp_mul(s, &b, m2), &h_new, m2);
    let s_new = zp_sub(s, &d, m2);
    let t_new = zp_sub(&zp_sub(t, &zp_mul(t, &b, m2), m2), &zp_mul(&c, &g_new, m2), m2);
    (g_new, h_new, s_new, t_new)
}

/// Lifts the modular factor list of monic `f` to p^k by a balanced product
/// tree of two-factor quadratic lifts.
fn hensel_lift_tree(
    f: &[Int],
    factors_mod_p: &[Vec<u64>],
    p: u64,
    k: u32,
    target: &Int,
) -> Result<Vec<Vec<Int>>> {
    if factors_mod_p.len() == 1 {
        let fm: Vec<Int> = f.iter().map(|c| zmod(c, target)).collect();
        return Ok(vec![zp_trim(fm)]);
    }
    let (left, right) = factors_mod_p.split_at(factors_mod_p.len() / 2);
    let prod = |fs: &[Vec<u64>]| -> Vec<u64> {
        fs.iter().fold(vec![1u64], |acc, g| pmul(&acc, g, p))
    };
    let g0 = prod(left);
    let h0 = prod(right);
    let (s0, t0) = bezout_mod_p(&g0, &h0, p);

    let mut modulus = Int::from(p);
    let mut g = lift_u64_poly(&g0);
    let mut h = lift_u64_poly(&h0);
    let mut s = lift_u64_poly(&s0);
    let mut t = lift_u64_poly(&t0);
    let mut cur_k = 1u32;
    while cur_k < k {
        let m2 = &modulus * &modulus;
        let fm: Vec<Int> = f.iter().map(|c| zmod(c, &m2)).collect();
        let (gn, hn, sn, tn) = hensel_step(&zp_trim(fm), &g, &h, &s, &t, &m2);
        g = gn;
        h = hn;
        s = sn;
        t = tn;
        modulus = m2;
        cur_k *= 2;
    }
    let reduce = |v: Vec<Int>| -> Vec<Int> { zp_trim(v.iter().map(|c| zmod(c, target)).collect()) };
    let g = reduce(g);
    let h = reduce(h);
    if !g.last().map_or(false, |c| c.is_one()) || !h.last().map_or(false, |c| c.is_one()) {
        return Err(Error::CertificateFailed("hensel lift lost monicity".into()));
    }
    let mut out = hensel_lift_tree(&g, left, p, k, target)?;
    out.extend(hensel_lift_tree(&h, right, p, k, target)?);
    Ok(out)
}

// --- recombination ---------------------------------------------------------

fn symmetric(v: &Int, m: &Int) -> Int {
    let r = v.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn recombine(mut current: Vec<Int>, lifted: Vec<Vec<Int>>, m: &Int) -> Vec<Vec<Int>> {
    let mut found: Vec<Vec<Int>> = Vec::new();
    let mut idx: Vec<usize> = (0..lifted.len()).collect();
    let mut size = 1usize;
    while 2 * size <= idx.len() {
        let mut combo: Vec<usize> = (0..size).collect();
        let mut advanced = true;
        while advanced {
            let subset: Vec<usize> = combo.iter().map(|&i| idx[i]).collect();
            if let Some(g) = try_subset(&current, &lifted, &subset, m) {
                current = div_exact_z(&current, &g);
                found.push(g);
                idx.retain(|i| !subset.contains(i));
                combo = (0..size).collect();
                if 2 * size > idx.len() {
                    break;
                }
                continue;
            }
            advanced = next_combination(&mut combo, idx.len());
        }
        size += 1;
    }
    if current.len() > 1 {
        found.push(current);
    }
    found.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
    found
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - (k - i) {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn try_subset(current: &[Int], lifted: &[Vec<Int>], subset: &[usize], m: &Int) -> Option<Vec<Int>> {
    let deg: usize = subset.iter().map(|&i| lifted[i].len() - 1).sum();
    if deg == 0 || deg >= current.len() {
        return None;
    }
    let mut prod = vec![Int::one()];
    for &i in subset {
        prod = zp_mul(&prod, &lifted[i], m);
    }
    let cand: Vec<Int> = prod.iter().map(|c| symmetric(c, m)).collect();
    // Cheap pretest: the candidate constant term must divide f(0).
    let f0 = &current[0];
    if !f0.is_zero() {
        let c0 = &cand[0];
        if c0.is_zero() || !f0.mod_floor(&c0.abs()).is_zero() {
            return None;
        }
    }
    if divides_z(current, &cand) {
        Some(cand)
    } else {
        None
    }
}

fn divides_z(f: &[Int], g: &[Int]) -> bool {
    // g monic by construction.
    let mut rem = f.to_vec();
    if g.len() > rem.len() {
        return false;
    }
    for k in (g.len() - 1..rem.len()).rev() {
        let q = rem[k].clone();
        if q.is_zero() {
            continue;
        }
        for (j, gc) in g.iter().enumerate() {
            let idx = k - (g.len() - 1) + j;
            rem[idx] = &rem[idx] - &q * gc;
        }
        rem[k] = Int::zero();
    }
    rem.iter().all(|c| c.is_zero())
}

fn div_exact_z(f: &[Int], g: &[Int]) -> Vec<Int> {
    let mut rem = f.to_vec();
    let mut quot = vec![Int::zero(); f.len() - g.len() + 1];
    for k in (g.len() - 1..rem.len()).rev() {
        let q = rem[k].clone();
        quot[k - (g.len() - 1)] = q.clone();
        if q.is_zero() {
            continue;
        }
        for (j, gc) in g.iter().enumerate() {
            let idx = k - (g.len() - 1) + j;
            rem[idx] = &rem[idx] - &q * gc;
        }
    }
    quot
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rat_from_i64 as q;
    use proptest::prelude::*;

    fn poly(cs: &[i64]) -> QPoly {
        QPoly::from_coeffs(cs.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn ord_examples() {
        let t = QPoly::var();
        // ord(t^2 (t+1), t) = 2
        let f = t.clone() * t.clone() * (t.clone() + QPoly::one());
        assert_eq!(ord_factor(&f, &t).unwrap(), OrdFactor::Finite(2));
        // ord(0, t - 3) = infinity
        let m = poly(&[-3, 1]);
        assert_eq!(ord_factor(&QPoly::zero(), &m).unwrap(), OrdFactor::Infinite);
        // ord(t^4 + 2t^3 + 2t^2 + 3t, t) = 1
        assert_eq!(
            ord_factor(&poly(&[0, 3, 2, 2, 1]), &t).unwrap(),
            OrdFactor::Finite(1)
        );
        // reducible or constant modulus is rejected
        assert!(ord_factor(&t, &poly(&[2])).is_err());
        assert!(ord_factor(&t, &poly(&[0, 0, 1])).is_err());
    }

    #[test]
    fn factors_small() {
        // (t-1)(t+2)^2
        let f = poly(&[-1, 1]) * poly(&[2, 1]) * poly(&[2, 1]);
        let fs = factor(&f).unwrap();
        assert_eq!(fs, vec![(poly(&[-1, 1]), 1), (poly(&[2, 1]), 2)]);
    }

    #[test]
    fn irreducible_cubic() {
        // t^3 + 2t^2 + 2t + 3 has no rational root and is irreducible.
        let w6 = poly(&[3, 2, 2, 1]);
        assert!(is_irreducible(&w6).unwrap());
        let fs = factor(&w6).unwrap();
        assert_eq!(fs, vec![(w6, 1)]);
    }

    #[test]
    fn factors_with_denominators_and_lc() {
        // 6t^2 - t - 1 = (2t - 1)(3t + 1); monic factors (t - 1/2)(t + 1/3).
        let f = poly(&[-1, -1, 6]);
        let fs = factor(&f).unwrap();
        assert_eq!(fs.len(), 2);
        let half = QPoly::from_coeffs(vec![q(-1) / q(2), q(1)]);
        let third = QPoly::from_coeffs(vec![q(1) / q(3), q(1)]);
        assert!(fs.iter().any(|(g, _)| *g == half));
        assert!(fs.iter().any(|(g, _)| *g == third));
        assert_eq!(rational_roots(&f).unwrap(), vec![-q(1) / q(3), q(1) / q(2)]);
    }

    #[test]
    fn factors_cyclotomic_like() {
        // t^6 - 1 = (t-1)(t+1)(t^2+t+1)(t^2-t+1)
        let f = poly(&[-1, 0, 0, 0, 0, 0, 1]);
        let fs = factor(&f).unwrap();
        let degs: Vec<i64> = fs.iter().map(|(g, _)| g.degree_i64()).collect();
        assert_eq!(degs, vec![1, 1, 2, 2]);
        let prod = fs
            .iter()
            .fold(QPoly::one(), |acc, (g, m)| acc * g.pow(*m as usize));
        assert_eq!(prod, f.monic());
    }

    #[test]
    fn factors_degree_twelve_irreducible() {
        // t^12 - t - 1 is a classical irreducible.
        let mut cs = vec![0i64; 13];
        cs[0] = -1;
        cs[1] = -1;
        cs[12] = 1;
        assert!(is_irreducible(&poly(&cs)).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn factor_recovers_product(
            a in prop::collection::vec(-4i64..5, 1..4),
            b in prop::collection::vec(-4i64..5, 1..4),
        ) {
            let fa = poly(&a.iter().cloned().chain([1]).collect::<Vec<_>>());
            let fb = poly(&b.iter().cloned().chain([1]).collect::<Vec<_>>());
            let f = fa.clone() * fb.clone();
            let fs = factor(&f).unwrap();
            let prod = fs.iter().fold(QPoly::one(), |acc, (g, m)| acc * g.pow(*m as usize));
            prop_assert_eq!(prod, f.monic());
        }

        #[test]
        fn ord_is_additive(
            a in prop::collection::vec(-3i64..4, 0..4),
            b in prop::collection::vec(-3i64..4, 0..4),
            e1 in 0u32..3, e2 in 0u32..3,
        ) {
            let t = QPoly::var();
            let f = poly(&a.iter().cloned().chain([1]).collect::<Vec<_>>()) * t.pow(e1 as usize);
            let g = poly(&b.iter().cloned().chain([1]).collect::<Vec<_>>()) * t.pow(e2 as usize);
            let of = ord_factor(&f, &t).unwrap().finite().unwrap();
            let og = ord_factor(&g, &t).unwrap().finite().unwrap();
            let ofg = ord_factor(&(f * g), &t).unwrap().finite().unwrap();
            prop_assert_eq!(ofg, of + og);
        }
    }
}
