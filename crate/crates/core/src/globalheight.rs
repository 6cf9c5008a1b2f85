//! The canonical height over `Q` as a finite sum of local Green values, and
//! the normalized parameter height whose zero set is the periodic locus.
//!
//! Only finitely many places can contribute: at a prime dividing none of the
//! denominators (nor delta), the orbit stays in the unit polydisk in both
//! directions and the local value is exactly zero.

use crate::exact::numfield::NfCtx;
use crate::exact::scalar::rat_to_f64;
use crate::ffheight::{ff_height, stabilize, Stabilization};
use crate::henon::{HenonFamily, InitialPoint};
use crate::localgreen::{green_arch_complex, green_at_param, GreenTriple, Place};
use crate::{Error, Int, QPoly, Rat, Result};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

/// A numeric height with its certified tail and provenance.
#[derive(Clone, Debug)]
pub struct HeightValue {
    pub value: f64,
    /// Sum of the per-place tail bounds (divided by `l` for the parameter
    /// height).
    pub tail_bound: f64,
    pub places: Vec<Place>,
    pub ell: Rat,
}

/// Per-place breakdown of a canonical height evaluation.
#[derive(Clone, Debug)]
pub struct HeightBreakdown {
    pub locals: Vec<(Place, GreenTriple)>,
    pub htilde: f64,
    pub tail: f64,
}

/// The places that can carry a nonzero local value for this data: the
/// archimedean one, every prime dividing a denominator of the coefficients
/// of `c_i`, `a`, `b` or of `t`, and every prime dividing delta's numerator
/// or denominator.
pub fn relevant_places(
    family: &HenonFamily,
    point: &InitialPoint,
    t: &Rat,
) -> Result<Vec<Place>> {
    let mut primes: Vec<u64> = Vec::new();
    let push_int = |n: &Int, primes: &mut Vec<u64>| -> Result<()> {
        for p in prime_factors(n)? {
            primes.push(p);
        }
        Ok(())
    };
    for poly in family
        .coeff_polys()
        .iter()
        .chain([&point.a, &point.b])
    {
        for c in poly.coeffs() {
            push_int(c.denom(), &mut primes)?;
        }
    }
    push_int(t.denom(), &mut primes)?;
    push_int(family.delta().numer(), &mut primes)?;
    push_int(family.delta().denom(), &mut primes)?;
    primes.sort_unstable();
    primes.dedup();
    let mut out = vec![Place::Arch];
    out.extend(primes.into_iter().map(Place::Prime));
    Ok(out)
}

fn prime_factors(n: &Int) -> Result<Vec<u64>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() || n.is_one() {
        return Ok(out);
    }
    let mut p = Int::from(2u32);
    while (&p * &p) <= n {
        if n.mod_floor(&p).is_zero() {
            out.push(p.to_u64().unwrap());
            while n.mod_floor(&p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
        if p > Int::from(1u64 << 22) {
            break;
        }
    }
    if n > Int::one() {
        let q = n
            .to_u64()
            .ok_or_else(|| Error::Unsupported("prime factor beyond u64".into()))?;
        out.push(q);
    }
    Ok(out)
}

/// `h~(P_t)`: sum of the local Green values over the relevant places, with
/// an aggregated tail bound. Per-place evaluations run in parallel;
/// summation order is fixed by the sorted place list.
pub fn canonical_height(
    family: &HenonFamily,
    point: &InitialPoint,
    t: &Rat,
    tol: f64,
) -> Result<HeightBreakdown> {
    let places = relevant_places(family, point, t)?;
    let per_tol = tol / places.len() as f64;
    let locals: Vec<(Place, GreenTriple)> = places
        .par_iter()
        .map(|place| {
            green_at_param(family, point, t, place, per_tol).map(|g| (*place, g))
        })
        .collect::<Result<Vec<_>>>()?;
    let htilde = locals.iter().map(|(_, g)| g.green.value).sum();
    let tail = locals.iter().map(|(_, g)| g.green.tail_bound).sum();
    Ok(HeightBreakdown {
        locals,
        htilde,
        tail,
    })
}

/// The sum of `G+ + G-` over places (the unnormalized pair height used in
/// the two-sided comparison with the canonical height).
pub fn hat_height(
    family: &HenonFamily,
    point: &InitialPoint,
    t: &Rat,
    tol: f64,
) -> Result<(f64, f64)> {
    let places = relevant_places(family, point, t)?;
    let per_tol = tol / (2 * places.len()) as f64;
    let mut value = 0.0;
    let mut tail = 0.0;
    for place in &places {
        let g = green_at_param(family, point, t, place, per_tol)?;
        value += g.plus.value + g.minus.value;
        tail += g.plus.tail_bound + g.minus.tail_bound;
    }
    Ok((value, tail))
}

/// The parameter height `h_P(t) = h~(P_t) / l`. Errors when the degree
/// stabilization (hence `l`) is undetermined.
pub fn parameter_height(
    family: &HenonFamily,
    point: &InitialPoint,
    t: &Rat,
    tol: f64,
) -> Result<HeightValue> {
    let stab = stabilize(family, point, default_stab_budget(family))?;
    let ell = ff_height(&stab)?;
    let bd = canonical_height(family, point, t, tol)?;
    let ellf = rat_to_f64(&ell);
    Ok(HeightValue {
        value: bd.htilde / ellf,
        tail_bound: bd.tail / ellf,
        places: bd.locals.iter().map(|(p, _)| *p).collect(),
        ell,
    })
}

fn default_stab_budget(family: &HenonFamily) -> usize {
    match family.degree() {
        2 => 10,
        3 => 8,
        _ => 6,
    }
}

/// Parameter height at an algebraic parameter given by its minimal
/// polynomial: the average of the archimedean Green values over the complex
/// roots, divided by `l`.
///
/// Supported exactly when every finite place provably contributes zero:
/// the minimal polynomial must be monic with integer coefficients (an
/// algebraic integer), the family and point must have integer coefficients,
/// and delta must be a unit. Anything else would need p-adic conjugate
/// embeddings and is reported as unsupported.
pub fn parameter_height_algebraic(
    family: &HenonFamily,
    point: &InitialPoint,
    min_poly: &QPoly,
    tol: f64,
) -> Result<HeightValue> {
    let integral = |p: &QPoly| p.coeffs().iter().all(|c| c.denom().is_one());
    if !min_poly.leading().map_or(false, |l| l.is_one()) || !integral(min_poly) {
        return Err(Error::Unsupported(
            "algebraic parameter is not an algebraic integer; p-adic conjugate embeddings are not implemented".into(),
        ));
    }
    if !family.coeff_polys().iter().all(integral)
        || !integral(&point.a)
        || !integral(&point.b)
        || !(family.delta().abs() == Rat::one())
    {
        return Err(Error::Unsupported(
            "non-integral family data at an algebraic parameter needs p-adic embeddings".into(),
        ));
    }
    let stab = stabilize(family, point, default_stab_budget(family))?;
    let ell = ff_height(&stab)?;
    let ctx = NfCtx::new(min_poly.clone(), true)?;
    let deg = ctx.degree() as f64;
    let eval_pt = |t: Complex64, p: &QPoly| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in p.coeffs().iter().rev() {
            acc = acc * t + Complex64::new(rat_to_f64(c), 0.0);
        }
        acc
    };
    let per_tol = tol / deg;
    let mut value = 0.0;
    let mut tail = 0.0;
    for (root, _) in ctx.roots() {
        let start = (eval_pt(*root, &point.a), eval_pt(*root, &point.b));
        let g = green_arch_complex(family, *root, start, per_tol)?;
        value += g.green.value / deg;
        tail += g.green.tail_bound / deg;
    }
    let ellf = rat_to_f64(&ell);
    Ok(HeightValue {
        value: value / ellf,
        tail_bound: tail / ellf,
        places: vec![Place::Arch],
        ell,
    })
}

/// Largest pointwise discrepancy of the normalized local Green values of two
/// initial points over a parameter grid.
#[derive(Clone, Debug)]
pub struct CompareReport {
    pub max_discrepancy: f64,
    pub at: usize,
    pub tail: f64,
    pub grid_len: usize,
}

/// Compares `G_{P,v}/l_P` with `G_{Q,v}/l_Q` on a rational grid.
/// Normalization by each point's own `l` makes the comparison the local
/// piece of the parameter heights, which is the quantity the unlikely
/// intersection equivalences constrain.
pub fn green_compare(
    family: &HenonFamily,
    p_point: &InitialPoint,
    q_point: &InitialPoint,
    place: &Place,
    grid: &[Rat],
    tol: f64,
) -> Result<CompareReport> {
    let ell_p = point_ell(family, p_point)?;
    let ell_q = point_ell(family, q_point)?;
    let mut max_d = 0.0f64;
    let mut at = 0usize;
    let mut tail = 0.0f64;
    for (i, t) in grid.iter().enumerate() {
        let gp = green_at_param(family, p_point, t, place, tol)?;
        let gq = green_at_param(family, q_point, t, place, tol)?;
        let d = (gp.green.value / ell_p - gq.green.value / ell_q).abs();
        let tl = gp.green.tail_bound / ell_p + gq.green.tail_bound / ell_q;
        if d > max_d {
            max_d = d;
            at = i;
            tail = tl;
        }
    }
    Ok(CompareReport {
        max_discrepancy: max_d,
        at,
        tail,
        grid_len: grid.len(),
    })
}

/// The complex-grid variant at the archimedean place.
pub fn green_compare_complex(
    family: &HenonFamily,
    p_point: &InitialPoint,
    q_point: &InitialPoint,
    grid: &[Complex64],
    tol: f64,
) -> Result<CompareReport> {
    let ell_p = point_ell(family, p_point)?;
    let ell_q = point_ell(family, q_point)?;
    let eval_pt = |t: Complex64, p: &QPoly| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in p.coeffs().iter().rev() {
            acc = acc * t + Complex64::new(rat_to_f64(c), 0.0);
        }
        acc
    };
    let results: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|t| -> Result<(f64, f64)> {
            let sp = (eval_pt(*t, &p_point.a), eval_pt(*t, &p_point.b));
            let sq = (eval_pt(*t, &q_point.a), eval_pt(*t, &q_point.b));
            let gp = green_arch_complex(family, *t, sp, tol)?;
            let gq = green_arch_complex(family, *t, sq, tol)?;
            Ok((
                (gp.green.value / ell_p - gq.green.value / ell_q).abs(),
                gp.green.tail_bound / ell_p + gq.green.tail_bound / ell_q,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut max_d = 0.0f64;
    let mut at = 0usize;
    let mut tail = 0.0f64;
    for (i, (d, tl)) in results.iter().enumerate() {
        if *d > max_d {
            max_d = *d;
            at = i;
            tail = *tl;
        }
    }
    Ok(CompareReport {
        max_discrepancy: max_d,
        at,
        tail,
        grid_len: grid.len(),
    })
}

fn point_ell(family: &HenonFamily, point: &InitialPoint) -> Result<f64> {
    match stabilize(family, point, default_stab_budget(family))? {
        Stabilization::Certified(c) => Ok(rat_to_f64(&c.ell)),
        Stabilization::Undetermined { budget } => {
            Err(Error::StabilizationUndetermined(budget))
        }
    }
}

pub fn height_to_json(t: &str, h: &HeightValue) -> serde_json::Value {
    serde_json::json!({
        "t": t,
        "hP": h.value,
        "tail": h.tail_bound,
        "ell": crate::exact::scalar::rat_to_string(&h.ell),
        "places": h.places.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    })
}
