//! Arithmetic in `F_p[x]` for small primes: coefficient vectors are
//! ascending, trailing zeros trimmed. Shared by the factorization pipeline
//! and the finite-field tower.

pub(crate) fn ptrim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub(crate) fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + (x as u128 * y as u128 % p as u128) as u64) % p;
        }
    }
    ptrim(out)
}

pub(crate) fn padd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (k, o) in out.iter_mut().enumerate() {
        let x = a.get(k).copied().unwrap_or(0);
        let y = b.get(k).copied().unwrap_or(0);
        *o = (x + y) % p;
    }
    ptrim(out)
}

pub(crate) fn psub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (k, o) in out.iter_mut().enumerate() {
        let x = a.get(k).copied().unwrap_or(0);
        let y = b.get(k).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    ptrim(out)
}

/// Inverse mod a prime via Fermat.
pub(crate) fn pinv(a: u64, p: u64) -> u64 {
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

pub(crate) fn pdivrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty());
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let linv = pinv(*b.last().unwrap(), p);
    let mut rem = a.to_vec();
    let mut quot = vec![0u64; a.len() - b.len() + 1];
    for k in (b.len() - 1..a.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        let q = (c as u128 * linv as u128 % p as u128) as u64;
        quot[k - (b.len() - 1)] = q;
        for (j, &bc) in b.iter().enumerate() {
            let idx = k - (b.len() - 1) + j;
            let sub = (q as u128 * bc as u128 % p as u128) as u64;
            rem[idx] = (rem[idx] + p - sub) % p;
        }
    }
    (ptrim(quot), ptrim(rem))
}

/// Monic gcd.
pub(crate) fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let (_, r) = pdivrem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&l) = x.last() {
        let linv = pinv(l, p);
        for c in &mut x {
            *c = (*c as u128 * linv as u128 % p as u128) as u64;
        }
    }
    x
}

/// `base^e mod f` in `F_p[x]`.
pub(crate) fn ppowmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = pdivrem(base, f, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = pdivrem(&pmul(&acc, &b, p), f, p).1;
        }
        b = pdivrem(&pmul(&b, &b, p), f, p).1;
        e >>= 1;
    }
    acc
}

/// Irreducibility of a monic polynomial over `F_p`: `x^(p^k) = x mod f` and
/// `gcd(x^(p^(k/q)) - x, f) = 1` for every prime `q | k`.
pub(crate) fn irreducible_mod_p(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // x^(p^j) mod f by repeated Frobenius.
    let frob = |reps: u32| -> Vec<u64> {
        let mut acc = x.clone();
        for _ in 0..reps {
            acc = ppowmod(&acc, p, f, p);
        }
        acc
    };
    if psub(&frob(k as u32), &x, p) != Vec::<u64>::new() {
        return false;
    }
    let mut rem = k;
    let mut primes = Vec::new();
    let mut q = 2;
    while q * q <= rem {
        if rem % q == 0 {
            primes.push(q);
            while rem % q == 0 {
                rem /= q;
            }
        }
        q += 1;
    }
    if rem > 1 {
        primes.push(rem);
    }
    for q in primes {
        let g = pgcd(&psub(&frob((k / q) as u32), &x, p), f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}
