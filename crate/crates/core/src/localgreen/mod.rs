//! Local Green functions at the archimedean place and at rational primes,
//! with certified tail bounds.
//!
//! On the bounded parameter region `|t| <= L` (with `L` chosen so the data
//! bounds hold) the orbit norm `M_n` satisfies two-sided growth inequalities
//! `M_n^d / C^d <= M_{n+1} <= C' M_n^d`, so the normalized logs form a
//! Cauchy sequence with an explicit geometric tail: stopping after `n` steps
//! certifies the Green value to `d log C / (d^n (d - 1))`. Nonarchimedean
//! escaping orbits resolve exactly: once one coordinate strictly dominates
//! every other term of the recursion, ultrametric equality freezes the
//! valuation law and the limit is an exact rational multiple of `log p`.

pub mod padic;
pub mod scaled;

use crate::exact::scalar::{abs_arch, abs_p, rat_from_i64, rat_log_abs, rat_to_f64, val_p};
use crate::ffheight::StabilizationCert;
use crate::henon::{HenonFamily, InitialPoint};
use crate::{Error, QPoly, Rat, Result};
use num_complex::Complex64;
use num_traits::{One, Zero};
use padic::{PadicCtx, PadicFloat};
use scaled::ScaledComplex;

/// A place of `Q`: the archimedean absolute value or a p-adic one.
/// The normalizer `n_v` is 1 for every place of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Arch,
    Prime(u64),
}

impl Place {
    pub fn is_arch(&self) -> bool {
        matches!(self, Place::Arch)
    }

    /// Exact absolute value of a rational at this place.
    pub fn abs(&self, q: &Rat) -> Rat {
        match self {
            Place::Arch => abs_arch(q),
            Place::Prime(p) => abs_p(q, *p),
        }
    }

    pub fn log_abs(&self, q: &Rat) -> f64 {
        match self {
            Place::Arch => rat_log_abs(q),
            Place::Prime(p) => match val_p(q, *p) {
                None => f64::NEG_INFINITY,
                Some(v) => -(v as f64) * (*p as f64).ln(),
            },
        }
    }

    pub fn parse(s: &str) -> Result<Place> {
        if s == "inf" || s == "arch" || s == "oo" {
            return Ok(Place::Arch);
        }
        let p: u64 = s
            .parse()
            .map_err(|_| Error::Invalid(format!("bad place {s:?}")))?;
        if !crate::exact::finfield::FfCtx::new(p, 1).is_ok() {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        Ok(Place::Prime(p))
    }
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Arch => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Constants of the bounded-region filtration at one place.
///
/// `l` is the smallest power of two such that, on `|t| <= l`, every data
/// polynomial is bounded by `l^(m+1)`, the bracket bound `[3d] cap <= l^(m+1)`
/// holds, and the unbounded-region constants (`l^((m+1)(d-1)) >= kappa*cap`
/// plus the tail-fraction bound) hold just outside. All checks are exact
/// rational comparisons; for a p-adic place the value group is respected by
/// rounding `l` to the nearest p-powers.
#[derive(Clone, Debug)]
pub struct FiltrationConsts {
    pub place: Place,
    pub d: usize,
    pub kappa: Rat,
    /// max(1, deg of the data polynomials).
    pub m: i64,
    /// `max(|delta|_v, 1/|delta|_v)`.
    pub delta_cap: Rat,
    /// The region bound L (a power of two).
    pub l: Rat,
    /// `[3d]` at this place (3d archimedean, 1 otherwise).
    pub bracket_3d: Rat,
    /// `[3d] * delta_cap * l^(m+1)`.
    pub big_c: Rat,
    /// Escape certificate threshold: norms `S` with `S^(d-1) > big_c^d`
    /// grow monotonically under the filtration.
    pub c_pow_d: Rat,
    /// Per-step bound on `|log M_{n+1} - d log M_n|` over the region.
    pub step_log_bound: f64,
}

impl FiltrationConsts {
    pub fn l_pow_m1(&self) -> Rat {
        pow_rat(&self.l, (self.m + 1) as u32)
    }

    /// Certified truncation error of `(1/d^n) log M_n` after `n` steps.
    pub fn tail_bound(&self, n: u32) -> f64 {
        self.step_log_bound / ((self.d as f64).powi(n as i32) * (self.d as f64 - 1.0))
    }

    /// Steps needed to push the tail below `tol`.
    pub fn steps_for_tol(&self, tol: f64) -> u32 {
        let d = self.d as f64;
        let mut n = 1u32;
        while self.step_log_bound / (d.powi(n as i32) * (d - 1.0)) >= tol {
            n += 1;
            if n > 20_000 {
                break;
            }
        }
        n
    }

    /// Does a norm value certify escape?
    pub fn escapes(&self, norm: &Rat) -> bool {
        pow_rat(norm, (self.d - 1) as u32) > self.c_pow_d
    }

    /// Norms above this certify escape: `S^(d-1) > big_c^d`.
    pub fn escape_threshold_f64(&self) -> f64 {
        (rat_log_abs(&self.c_pow_d) / (self.d as f64 - 1.0)).exp()
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "place": self.place.to_string(),
            "kappa": crate::exact::scalar::rat_to_string(&self.kappa),
            "m": self.m,
            "delta_cap": crate::exact::scalar::rat_to_string(&self.delta_cap),
            "L": crate::exact::scalar::rat_to_string(&self.l),
            "big_c": crate::exact::scalar::rat_to_string(&self.big_c),
            "step_log_bound": self.step_log_bound,
        })
    }
}

fn pow_rat(q: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= q;
    }
    acc
}

/// Largest place-value <= x (archimedean: x itself; p-adic: a p power).
fn grid_floor(place: &Place, x: &Rat) -> Rat {
    match place {
        Place::Arch => x.clone(),
        Place::Prime(p) => {
            let mut v = Rat::one();
            let pr = rat_from_i64(*p as i64);
            if *x >= Rat::one() {
                while &v * &pr <= *x {
                    v *= &pr;
                }
            } else {
                while v > *x {
                    v /= &pr;
                }
            }
            v
        }
    }
}

/// Smallest place-value strictly greater than x.
fn grid_next(place: &Place, x: &Rat) -> Rat {
    match place {
        Place::Arch => x.clone(),
        Place::Prime(p) => grid_floor(place, x) * rat_from_i64(*p as i64),
    }
}

/// v-adic bound for `g(t)` over `|t| <= r`: archimedean coefficient-sum,
/// ultrametric coefficient-max otherwise.
fn poly_bound(place: &Place, g: &QPoly, r: &Rat) -> Rat {
    if g.is_zero() {
        return Rat::zero();
    }
    let mut acc = Rat::zero();
    let mut rpow = Rat::one();
    for c in g.coeffs() {
        let term = place.abs(c) * rpow.clone();
        match place {
            Place::Arch => acc += term,
            Place::Prime(_) => acc = acc.max(term),
        }
        rpow *= r;
    }
    acc
}

/// Filtration constants with the region forced to contain `radius` and the
/// starting point bound `point_bound`.
pub fn filtration_consts_with(
    family: &HenonFamily,
    data_polys: &[QPoly],
    place: &Place,
    kappa: &Rat,
    radius: &Rat,
    point_bound: &Rat,
) -> Result<FiltrationConsts> {
    if *kappa <= Rat::one() {
        return Err(Error::Invalid("kappa must be > 1".into()));
    }
    let d = family.degree();
    let m = data_polys
        .iter()
        .map(|p| p.degree_i64())
        .max()
        .unwrap_or(-1)
        .max(1);
    let dabs = place.abs(family.delta());
    let delta_cap = dabs.clone().max(dabs.recip());
    let bracket_3d = match place {
        Place::Arch => rat_from_i64(3 * d as i64),
        Place::Prime(_) => Rat::one(),
    };
    let one_minus = Rat::one() - kappa.recip();
    let two = rat_from_i64(2);
    let mut l = Rat::one();
    for _ in 0..4096 {
        let inner = grid_floor(place, &l);
        let outer = grid_next(place, &l);
        let l_m1 = pow_rat(&l, (m + 1) as u32);
        let data_ok = data_polys
            .iter()
            .all(|g| poly_bound(place, g, &inner) <= l_m1)
            && *point_bound <= l_m1;
        let bracket_ok = bracket_3d.clone() * delta_cap.clone() <= l_m1;
        let radius_ok = l >= *radius;
        let kd_ok =
            pow_rat(&outer, ((m + 1) * (d as i64 - 1)) as u32) >= kappa.clone() * delta_cap.clone();
        // Tail-fraction bound just outside the region, both orbit directions.
        let mut frac = Rat::zero();
        for (i, ci) in family.coeff_polys().iter().enumerate() {
            let norm1 = match place {
                Place::Arch => ci.coeffs().iter().map(abs_arch).fold(Rat::zero(), |a, b| a + b),
                Place::Prime(p) => ci
                    .coeffs()
                    .iter()
                    .map(|c| abs_p(c, *p))
                    .fold(Rat::zero(), |a, b| a.max(b)),
            };
            let e = ((i as i64 + 1) * (m + 1) - m) as u32;
            let term = norm1 / pow_rat(&outer, e);
            match place {
                Place::Arch => frac += term,
                Place::Prime(_) => frac = frac.max(term),
            }
        }
        let dterm = delta_cap.clone() / pow_rat(&outer, d as u32);
        match place {
            Place::Arch => frac += dterm,
            Place::Prime(_) => frac = frac.max(dterm),
        }
        let frac_ok = frac <= one_minus;
        if data_ok && bracket_ok && radius_ok && kd_ok && frac_ok {
            let big_c = bracket_3d.clone() * delta_cap.clone() * l_m1;
            let c_pow_d = pow_rat(&big_c, d as u32);
            let step_log_bound = (d as f64) * rat_log_abs(&big_c).max(0.0);
            return Ok(FiltrationConsts {
                place: *place,
                d,
                kappa: kappa.clone(),
                m,
                delta_cap,
                l,
                bracket_3d,
                big_c,
                c_pow_d,
                step_log_bound,
            });
        }
        l *= &two;
    }
    Err(Error::Invalid(
        "no admissible region bound below 2^4096".into(),
    ))
}

/// Filtration constants for a family and polynomial initial point: the
/// smallest power-of-two region bound passing every condition.
pub fn filtration_consts(
    family: &HenonFamily,
    point: &InitialPoint,
    place: &Place,
    kappa: &Rat,
) -> Result<FiltrationConsts> {
    let mut data = family.coeff_polys().to_vec();
    data.push(point.a.clone());
    data.push(point.b.clone());
    filtration_consts_with(family, &data, place, kappa, &Rat::one(), &Rat::zero())
}

/// Forward/backward tag for the invariant regions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VlSign {
    Plus,
    Minus,
}

/// Exact membership in the forward (`Plus`) or backward (`Minus`) invariant
/// region over a rational parameter in the bounded region.
pub fn in_vl(
    family: &HenonFamily,
    consts: &FiltrationConsts,
    t: &Rat,
    point: &(Rat, Rat),
    sign: VlSign,
) -> Result<bool> {
    let t_abs = consts.place.abs(t);
    if t_abs > consts.l {
        return Err(Error::OutsideBoundedRegion {
            t_abs: rat_to_f64(&t_abs),
            l: rat_to_f64(&consts.l),
        });
    }
    let norm = consts.place.abs(&point.0).max(consts.place.abs(&point.1));
    if norm <= consts.big_c {
        return Ok(true);
    }
    let spec = family.specialize(t)?;
    let image = match sign {
        VlSign::Plus => spec.step_forward(point),
        VlSign::Minus => spec.step_backward(point),
    };
    let inorm = consts.place.abs(&image.0).max(consts.place.abs(&image.1));
    Ok(inorm * consts.l_pow_m1() >= pow_rat(&norm, family.degree() as u32))
}

/// Exact orbit norms `M_0..M_n` at a rational parameter:
/// `M_k = max(|A_k|, |A_{k-1}|, |B_{k-1}|, |B_k|, 1)`.
pub fn exact_norm_table(
    family: &HenonFamily,
    point: &InitialPoint,
    t: &Rat,
    place: &Place,
    n: usize,
) -> Result<Vec<Rat>> {
    let spec = family.specialize(t)?;
    let start = point.specialize(t)?;
    let mut fwd = start.clone();
    let mut bwd = start.clone();
    let mut out = Vec::with_capacity(n + 1);
    out.push(
        place
            .abs(&start.0)
            .max(place.abs(&start.1))
            .max(Rat::one()),
    );
    for _ in 1..=n {
        fwd = spec.step_forward(&fwd);
        bwd = spec.step_backward(&bwd);
        let m = place
            .abs(&fwd.0)
            .max(place.abs(&fwd.1))
            .max(place.abs(&bwd.0))
            .max(place.abs(&bwd.1))
            .max(Rat::one());
        out.push(m);
    }
    Ok(out)
}

/// A numeric Green value with a certified truncation bound: the true value
/// lies within `tail_bound` of `value`.
#[derive(Clone, Copy, Debug)]
pub struct GreenValue {
    pub value: f64,
    pub tail_bound: f64,
    pub iterations_used: u32,
    pub escaped_at: Option<u32>,
}

impl GreenValue {
    fn exact(value: f64, iterations: u32, escaped_at: Option<u32>) -> Self {
        GreenValue {
            value,
            tail_bound: 0.0,
            iterations_used: iterations,
            escaped_at,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "value": self.value,
            "tail_bound": self.tail_bound,
            "iterations": self.iterations_used,
            "escaped_at": self.escaped_at,
            "exact": self.tail_bound == 0.0,
        })
    }
}

/// Forward rate, backward rate, and their max.
#[derive(Clone, Copy, Debug)]
pub struct GreenTriple {
    pub plus: GreenValue,
    pub minus: GreenValue,
    pub green: GreenValue,
}

fn combine_max(plus: &GreenValue, minus: &GreenValue) -> GreenValue {
    let value = plus.value.max(minus.value);
    GreenValue {
        value,
        tail_bound: plus.tail_bound.max(minus.tail_bound),
        iterations_used: plus.iterations_used.max(minus.iterations_used),
        escaped_at: match (plus.escaped_at, minus.escaped_at) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        },
    }
}

// --- archimedean evaluation -------------------------------------------------

/// The family specialized at a complex parameter, for float iteration.
pub(crate) struct ArchSpec {
    d: usize,
    delta: Complex64,
    c: Vec<Complex64>,
}

impl ArchSpec {
    pub(crate) fn new(family: &HenonFamily, tau: Complex64) -> ArchSpec {
        let eval = |p: &QPoly| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in p.coeffs().iter().rev() {
                acc = acc * tau + Complex64::new(rat_to_f64(c), 0.0);
            }
            acc
        };
        ArchSpec {
            d: family.degree(),
            delta: Complex64::new(rat_to_f64(family.delta()), 0.0),
            c: family.coeff_polys().iter().map(eval).collect(),
        }
    }

    fn f_eval(&self, x: &ScaledComplex) -> ScaledComplex {
        // Horner on the monic x^d + c_1 x^(d-1) + ... + c_d.
        let mut acc = ScaledComplex::from_c64(Complex64::new(1.0, 0.0));
        for c in &self.c {
            acc = acc.mul(x).add(&ScaledComplex::from_c64(*c));
        }
        acc
    }

    fn forward(&self, pt: &(ScaledComplex, ScaledComplex)) -> (ScaledComplex, ScaledComplex) {
        let (x, y) = pt;
        (y.mul_c64(self.delta).add(&self.f_eval(x)), *x)
    }

    fn backward(&self, pt: &(ScaledComplex, ScaledComplex)) -> (ScaledComplex, ScaledComplex) {
        let (x, y) = pt;
        (
            *y,
            x.add(&self.f_eval(y).mul_c64(Complex64::new(-1.0, 0.0)))
                .mul_c64(1.0 / self.delta),
        )
    }

    fn side(
        &self,
        start: (Complex64, Complex64),
        steps: u32,
        forward: bool,
        escape_ln: f64,
    ) -> (f64, Option<u32>) {
        let mut cur = (
            ScaledComplex::from_c64(start.0),
            ScaledComplex::from_c64(start.1),
        );
        let mut escaped_at = None;
        for k in 1..=steps {
            cur = if forward {
                self.forward(&cur)
            } else {
                self.backward(&cur)
            };
            let ln_norm = cur.0.ln_norm().max(cur.1.ln_norm());
            if escaped_at.is_none() && ln_norm > escape_ln {
                escaped_at = Some(k);
            }
        }
        let ln_norm = cur.0.ln_norm().max(cur.1.ln_norm()).max(0.0);
        (
            ln_norm / (self.d as f64).powi(steps as i32),
            escaped_at,
        )
    }
}

fn green_arch_core(
    family: &HenonFamily,
    consts: &FiltrationConsts,
    tau: Complex64,
    start: (Complex64, Complex64),
    tol: f64,
) -> GreenTriple {
    let spec = ArchSpec::new(family, tau);
    let steps = consts.steps_for_tol(tol);
    let tail = consts.tail_bound(steps);
    let escape_ln = rat_log_abs(&consts.c_pow_d) / (family.degree() as f64 - 1.0);
    let (vp, ep) = spec.side(start, steps, true, escape_ln);
    let (vm, em) = spec.side(start, steps, false, escape_ln);
    let plus = GreenValue {
        value: vp,
        tail_bound: tail,
        iterations_used: steps,
        escaped_at: ep,
    };
    let minus = GreenValue {
        value: vm,
        tail_bound: tail,
        iterations_used: steps,
        escaped_at: em,
    };
    GreenTriple {
        green: combine_max(&plus, &minus),
        plus,
        minus,
    }
}

/// Green functions at a complex parameter (archimedean place only).
pub fn green_arch_complex(
    family: &HenonFamily,
    tau: Complex64,
    start: (Complex64, Complex64),
    tol: f64,
) -> Result<GreenTriple> {
    if tol <= 0.0 {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    let radius_f = tau.norm().max(1.0);
    let radius = Rat::from_float(radius_f.ceil()).unwrap_or_else(Rat::one);
    let pt_f = start.0.norm().max(start.1.norm()).max(1.0);
    let pt_bound = Rat::from_float(pt_f.ceil()).unwrap_or_else(Rat::one);
    let consts = filtration_consts_with(
        family,
        family.coeff_polys(),
        &Place::Arch,
        &rat_from_i64(2),
        &radius,
        &pt_bound,
    )?;
    Ok(green_arch_core(family, &consts, tau, start, tol))
}

// --- nonarchimedean evaluation ----------------------------------------------

/// Strict ultrametric domination of the leading term; once true it stays
/// true, the subsequent valuation law is exact, and the limit is reached.
fn dominates(
    place_p: u64,
    lead: &Rat,
    other: &Rat,
    c_vals: &[Rat],
    delta: &Rat,
    d: usize,
    forward: bool,
) -> bool {
    let ab = |q: &Rat| abs_p(q, place_p);
    let la = ab(lead);
    if la <= Rat::one() {
        return false;
    }
    for (i, c) in c_vals.iter().enumerate() {
        if pow_rat(&la, i as u32 + 1) <= ab(c) {
            return false;
        }
    }
    let da = ab(delta);
    if pow_rat(&la, (d - 1) as u32) <= da.clone().max(da.clone().recip()) {
        return false;
    }
    if forward {
        pow_rat(&la, d as u32) > da * ab(other)
    } else {
        pow_rat(&la, d as u32) > ab(other)
    }
}

/// Exact one-sided limit after domination at step `n` with leading value of
/// p-adic valuation `v` (negative): forward `(-v)/d^n * log p`, backward has
/// the extra geometric delta correction.
fn dominated_value(p: u64, v: i64, vdelta: i64, d: usize, n: u32, forward: bool) -> f64 {
    let lnp = (p as f64).ln();
    let dn = (d as f64).powi(n as i32);
    if forward {
        (-(v as f64)) * lnp / dn
    } else {
        ((-(v as f64)) + (vdelta as f64) / (d as f64 - 1.0)) * lnp / dn
    }
}

struct PadicSideOutcome {
    value: GreenValue,
    cycle: bool,
}

fn green_padic_side(
    family: &HenonFamily,
    p: u64,
    tau: &Rat,
    start: &(Rat, Rat),
    forward: bool,
    exact_budget: u32,
    float_budget: u32,
    prec: u32,
) -> Result<PadicSideOutcome> {
    let d = family.degree();
    let spec = family.specialize(tau)?;
    let c_vals: Vec<Rat> = family
        .coeff_polys()
        .iter()
        .map(|g| g.eval(tau))
        .collect();
    let delta = family.delta().clone();
    let vdelta = val_p(&delta, p).unwrap();

    // Integrality shortcut: v-integral data and a contracting-or-isometric
    // delta keep this side inside the unit polydisk forever.
    let ints = c_vals.iter().all(|c| abs_p(c, p) <= Rat::one())
        && abs_p(&start.0, p) <= Rat::one()
        && abs_p(&start.1, p) <= Rat::one();
    let delta_ok = if forward { vdelta >= 0 } else { vdelta <= 0 };
    if ints && delta_ok {
        return Ok(PadicSideOutcome {
            value: GreenValue::exact(0.0, 0, None),
            cycle: false,
        });
    }

    // Exact phase: domination, cycles, or a size guard.
    let mut cur = start.clone();
    for n in 1..=exact_budget {
        cur = if forward {
            spec.step_forward(&cur)
        } else {
            spec.step_backward(&cur)
        };
        if cur == *start {
            return Ok(PadicSideOutcome {
                value: GreenValue::exact(0.0, n, None),
                cycle: true,
            });
        }
        let (lead, other) = if forward {
            (&cur.0, &cur.1)
        } else {
            (&cur.1, &cur.0)
        };
        if dominates(p, lead, other, &c_vals, &delta, d, forward) {
            let v = val_p(lead, p).unwrap();
            let value = dominated_value(p, v, vdelta, d, n, forward);
            return Ok(PadicSideOutcome {
                value: GreenValue::exact(value, n, Some(n)),
                cycle: false,
            });
        }
        let bits = cur.0.numer().bits()
            + cur.0.denom().bits()
            + cur.1.numer().bits()
            + cur.1.denom().bits();
        if bits > 1 << 16 {
            break;
        }
    }

    // Capped-precision phase: valuations only.
    let ctx = PadicCtx::new(p, prec);
    let fr = |q: &Rat| PadicFloat::from_rat(&ctx, q);
    let cf: Vec<PadicFloat> = c_vals.iter().map(fr).collect();
    let df = fr(&delta);
    let dinv = fr(&delta.recip());
    let mut x = fr(&start.0);
    let mut y = fr(&start.1);
    let f_eval = |x: &PadicFloat| -> Result<PadicFloat> {
        let mut acc = x.clone();
        for c in &cf {
            acc = acc.mul(&ctx, x).add(&ctx, c)?;
        }
        Ok(acc)
    };
    for n in 1..=float_budget {
        if forward {
            let nx = df.mul(&ctx, &y).add(&ctx, &f_eval(&x)?)?;
            y = x;
            x = nx;
        } else {
            let ny = x.add(&ctx, &f_eval(&y)?.neg(&ctx))?.mul(&ctx, &dinv);
            x = y;
            y = ny;
        }
        let (lead, other) = if forward { (&x, &y) } else { (&y, &x) };
        if let Some(v) = lead.valuation() {
            // Valuation-level domination checks.
            let la_ok = v < 0;
            let ci_ok = c_vals.iter().enumerate().all(|(i, c)| {
                let vc = val_p(c, p);
                match vc {
                    None => true,
                    Some(vc) => (i as i64 + 1) * v < vc,
                }
            });
            let dd_ok = (d as i64 - 1) * v < -vdelta.abs();
            let other_ok = match other.valuation() {
                None => true,
                Some(vo) => {
                    if forward {
                        (d as i64) * v < vdelta + vo
                    } else {
                        (d as i64) * v < vo
                    }
                }
            };
            if la_ok && ci_ok && dd_ok && other_ok {
                let value = dominated_value(p, v, vdelta, d, n, forward);
                return Ok(PadicSideOutcome {
                    value: GreenValue::exact(value, n, Some(n)),
                    cycle: false,
                });
            }
        }
    }
    Err(Error::Unresolved(format!(
        "{}-adic {} orbit neither integral, periodic, nor escaping within budget",
        p,
        if forward { "forward" } else { "backward" }
    )))
}

// --- the public Green evaluators ---------------------------------------------

/// Local Green functions `(G+, G-, G)` of a starting point at a rational
/// parameter. Never returns a silent zero: bounded-looking archimedean
/// orbits carry the certified tail, and undecidable p-adic orbits error out.
pub fn green(
    family: &HenonFamily,
    tau: &Rat,
    start: &(Rat, Rat),
    place: &Place,
    tol: f64,
) -> Result<GreenTriple> {
    if tol <= 0.0 {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    match place {
        Place::Arch => {
            // Exact cycle shortcut.
            if let Some(n) = exact_cycle(family, tau, start, 64)? {
                let z = GreenValue::exact(0.0, n, None);
                return Ok(GreenTriple {
                    plus: z,
                    minus: z,
                    green: z,
                });
            }
            let radius = place.abs(tau).max(Rat::one());
            let pt_bound = place.abs(&start.0).max(place.abs(&start.1));
            let consts = filtration_consts_with(
                family,
                family.coeff_polys(),
                place,
                &rat_from_i64(2),
                &radius,
                &pt_bound,
            )?;
            let tau_c = Complex64::new(rat_to_f64(tau), 0.0);
            let start_c = (
                Complex64::new(rat_to_f64(&start.0), 0.0),
                Complex64::new(rat_to_f64(&start.1), 0.0),
            );
            Ok(green_arch_core(family, &consts, tau_c, start_c, tol))
        }
        Place::Prime(p) => {
            let fwd = green_padic_side(family, *p, tau, start, true, 48, 4096, 64)?;
            if fwd.cycle {
                let z = GreenValue::exact(0.0, fwd.value.iterations_used, None);
                return Ok(GreenTriple {
                    plus: z,
                    minus: z,
                    green: z,
                });
            }
            let bwd = green_padic_side(family, *p, tau, start, false, 48, 4096, 64)?;
            let (plus, minus) = (fwd.value, bwd.value);
            Ok(GreenTriple {
                green: combine_max(&plus, &minus),
                plus,
                minus,
            })
        }
    }
}

/// `G_P(t)`: the Green triple of the family point specialized at `t`.
pub fn green_at_param(
    family: &HenonFamily,
    point: &InitialPoint,
    t: &Rat,
    place: &Place,
    tol: f64,
) -> Result<GreenTriple> {
    let start = point.specialize(t)?;
    green(family, t, &start, place, tol)
}

fn exact_cycle(
    family: &HenonFamily,
    tau: &Rat,
    start: &(Rat, Rat),
    budget: u32,
) -> Result<Option<u32>> {
    let spec = family.specialize(tau)?;
    let mut cur = start.clone();
    for n in 1..=budget {
        cur = spec.step_forward(&cur);
        if cur == *start {
            return Ok(Some(n));
        }
        let bits = cur.0.numer().bits()
            + cur.0.denom().bits()
            + cur.1.numer().bits()
            + cur.1.denom().bits();
        if bits > 1 << 14 {
            return Ok(None);
        }
    }
    Ok(None)
}

// --- classification -----------------------------------------------------------

/// Verdict of the bounded/escaping dichotomy at one parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KwClass {
    /// Bounded orbit. `heuristic` is false only for an exact certificate
    /// (a cycle, or p-adic integrality); a full-budget archimedean trap is
    /// heuristic by nature.
    Bounded { heuristic: bool, period: Option<u32> },
    /// Certified escape (norm crossed the filtration threshold).
    Escaping { at: u32 },
    Unresolved,
}

pub fn classify(
    family: &HenonFamily,
    point: &InitialPoint,
    t: &Rat,
    place: &Place,
    budget: u32,
) -> Result<KwClass> {
    let start = point.specialize(t)?;
    match place {
        Place::Arch => {
            if let Some(n) = exact_cycle(family, t, &start, budget.min(128))? {
                return Ok(KwClass::Bounded {
                    heuristic: false,
                    period: Some(n),
                });
            }
            let radius = place.abs(t).max(Rat::one());
            let pt_bound = place.abs(&start.0).max(place.abs(&start.1));
            let consts = filtration_consts_with(
                family,
                family.coeff_polys(),
                place,
                &rat_from_i64(2),
                &radius,
                &pt_bound,
            )?;
            let spec = ArchSpec::new(
                family,
                Complex64::new(rat_to_f64(t), 0.0),
            );
            let start_c = (
                Complex64::new(rat_to_f64(&start.0), 0.0),
                Complex64::new(rat_to_f64(&start.1), 0.0),
            );
            let escape_ln = rat_log_abs(&consts.c_pow_d) / (family.degree() as f64 - 1.0);
            let (_, ef) = spec.side(start_c, budget, true, escape_ln);
            if let Some(at) = ef {
                return Ok(KwClass::Escaping { at });
            }
            let (_, eb) = spec.side(start_c, budget, false, escape_ln);
            if let Some(at) = eb {
                return Ok(KwClass::Escaping { at });
            }
            Ok(KwClass::Bounded {
                heuristic: true,
                period: None,
            })
        }
        Place::Prime(p) => {
            let fwd = green_padic_side(family, *p, t, &start, true, 48, budget, 64);
            let bwd = green_padic_side(family, *p, t, &start, false, 48, budget, 64);
            match (fwd, bwd) {
                (Ok(f), _) if f.cycle => Ok(KwClass::Bounded {
                    heuristic: false,
                    period: Some(f.value.iterations_used),
                }),
                (Ok(f), Ok(b)) => {
                    if let Some(at) = f.value.escaped_at.or(b.value.escaped_at) {
                        Ok(KwClass::Escaping { at })
                    } else {
                        // Both sides exactly zero by integrality.
                        Ok(KwClass::Bounded {
                            heuristic: false,
                            period: None,
                        })
                    }
                }
                (Ok(f), Err(_)) if f.value.escaped_at.is_some() => Ok(KwClass::Escaping {
                    at: f.value.escaped_at.unwrap(),
                }),
                (Err(_), Ok(b)) if b.value.escaped_at.is_some() => Ok(KwClass::Escaping {
                    at: b.value.escaped_at.unwrap(),
                }),
                _ => Ok(KwClass::Unresolved),
            }
        }
    }
}

// --- pulled-back metrics -------------------------------------------------------

/// `log ||a0 X0 + a1 X1||_n` at the parameter `(t : 1)`:
/// `log|a0 t + a1| - (1/l_n) log M_n(t)` with `l_n = l * d^n`.
pub fn log_metric_norm_n(
    family: &HenonFamily,
    point: &InitialPoint,
    cert: &StabilizationCert,
    a0: Complex64,
    a1: Complex64,
    t: Complex64,
    n: u32,
) -> Result<f64> {
    let min_n = cert
        .fwd
        .iter()
        .chain(cert.bwd.iter())
        .map(|s| s.n_stab)
        .max()
        .unwrap_or(0);
    if (n as usize) < min_n {
        return Err(Error::BeforeStabilization(n as usize));
    }
    let ell_n = cert.ell.clone() * rat_from_i64((family.degree() as i64).pow(n));
    if ell_n <= Rat::zero() {
        return Err(Error::BeforeStabilization(n as usize));
    }
    let spec = ArchSpec::new(family, t);
    let start = {
        let ev = |p: &QPoly| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in p.coeffs().iter().rev() {
                acc = acc * t + Complex64::new(rat_to_f64(c), 0.0);
            }
            acc
        };
        (ev(&point.a), ev(&point.b))
    };
    let mut fwd = (
        ScaledComplex::from_c64(start.0),
        ScaledComplex::from_c64(start.1),
    );
    let mut bwd = fwd;
    for _ in 0..n {
        fwd = spec.forward(&fwd);
        bwd = spec.backward(&bwd);
    }
    let ln_m = fwd
        .0
        .ln_norm()
        .max(fwd.1.ln_norm())
        .max(bwd.0.ln_norm())
        .max(bwd.1.ln_norm())
        .max(0.0);
    let num = (a0 * t + a1).norm().ln();
    Ok(num - ln_m / rat_to_f64(&ell_n))
}

/// The same metric at the point at infinity `(1:0)`, computed from the
/// stabilized leading coefficients (constant in `n`).
pub fn log_metric_norm_at_infinity(cert: &StabilizationCert, a0: Complex64) -> f64 {
    let ell = rat_to_f64(&cert.ell);
    let mut best = f64::NEG_INFINITY;
    for side in cert.fwd.iter().chain(cert.bwd.iter()) {
        let rate = side.deg_at_stab as f64 / (cert.degree as f64).powi(side.n_stab as i32);
        if (rate - ell).abs() < 1e-12 {
            let v = rat_log_abs(&side.leading)
                / (cert.degree as f64).powi(side.n_stab as i32);
            best = best.max(v);
        }
    }
    a0.norm().ln() - best / ell
}

/// The limit of `G_P(t) - l*log|t|` as `t` grows, from the leading
/// coefficients: `-(1/d^N) log max(|lead|, .., 1)`.
pub fn asymptotic_constant(cert: &StabilizationCert, place: &Place) -> f64 {
    let ell = rat_to_f64(&cert.ell);
    let mut best: f64 = 0.0; // the constant entry's contribution
    for side in cert.fwd.iter().chain(cert.bwd.iter()) {
        let rate = side.deg_at_stab as f64 / (cert.degree as f64).powi(side.n_stab as i32);
        if (rate - ell).abs() < 1e-12 {
            let v = place.log_abs(&side.leading)
                / (cert.degree as f64).powi(side.n_stab as i32);
            best = best.max(v);
        }
    }
    best
}

/// Explicit uniform bound on `|log||.||_{n+1} - log||.||_n|`:
/// `(1/(l d^n)) log(kappa L^(m+1))`.
pub fn convergence_gap(cert: &StabilizationCert, consts: &FiltrationConsts, n: u32) -> f64 {
    let ell = rat_to_f64(&cert.ell);
    let kl = rat_to_f64(&consts.kappa) * rat_to_f64(&consts.l_pow_m1());
    kl.ln() / (ell * (cert.degree as f64).powi(n as i32))
}

#[cfg(test)]
mod tests;
