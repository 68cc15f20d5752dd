//! The Eisenstein series itself: a direct lattice-sum evaluation in Re s > 1,
//! Fourier extraction from it, the product of local factors, the constant
//! term and the central-derivative coefficients.
//!
//! Direct sum. With Ψ(C,D) = χ(D) if q | C and −i q^{−1/2} χ(C) otherwise,
//! Ψ(nC,nD) = χ(n)Ψ(C,D), so summing over all (C,D) ≠ 0 (mod ±) instead of
//! coprime pairs multiplies by L(1+s,χ):
//!   E*(τ,s) = q^{(s+1)/2} π^{−(s+2)/2} Γ(s/2+1) v^{s/2} Σ_{C≥0} Σ_D Ψ(C,D) (x − iy)/(x² + y²)^{1+s/2},
//! with x = Cu + D, y = Cv, and D ≥ 1 on the row C = 0. Each row is cut
//! by a smooth window h(x/A) (1 on |x| ≤ A, 0 beyond 2A) that moves with u,
//! so a truncated row is still exactly periodic in u: period 1/C, or q/C
//! when q | C. A row therefore only feeds the modes that are multiples of C
//! (resp. C/q), and equispaced trapezoid sums recover those modes with
//! error set by aliasing alone.

use rug::ops::Pow;
use rug::Float;

use crate::numerics::{beta1, pi, BigComplex, Kahan, NumError, NumResult, GUARD_BITS};
use crate::par::{self, Exec};
use crate::quadfield::{factorize, ord, FieldContext};
use crate::whittaker::{arch_factor, arch_factor_quadrature, e_t_tau, finite_factor, q_factor, Place};
use crate::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct HalfPlanePoint {
    pub u: Float,
    pub v: Float,
}

impl HalfPlanePoint {
    pub fn new(u: Float, v: Float) -> Result<Self, Error> {
        if v <= 0 {
            return Err(Error::Invalid("Im τ must be positive".into()));
        }
        let p = u.prec().max(v.prec());
        Ok(HalfPlanePoint { u: Float::with_val(p, u), v: Float::with_val(p, v) })
    }

    pub fn prec(&self) -> u32 {
        self.u.prec().max(self.v.prec())
    }
}

/// A Fourier coefficient of E* (if `vanishing_place` is None) or of ∂E*/∂s at s = 0.
#[derive(Debug, Clone)]
pub struct FourierCoefficient {
    pub t: i64,
    pub value: BigComplex,
    pub v_dependent: bool,
    pub vanishing_place: Option<Place>,
}

/// Truncation of the direct sum: rows C ≤ `rows`, window half-width `window` in x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectCutoff {
    pub rows: u64,
    pub window: u64,
}

#[derive(Debug, Clone)]
pub struct DirectValue {
    pub value: BigComplex,
    pub tail_bound: Float,
}

/// Archimedean factor source for `coefficient_product_with`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArchMethod {
    Closed,
    Quadrature,
}

/// C^∞ step: 1 on [0,1], 0 on [2,∞), built from e^{−1/x}.
fn taper(r: &Float) -> Float {
    let w = r.prec();
    if *r <= 1 {
        return Float::with_val(w, 1);
    }
    if *r >= 2 {
        return Float::new(w);
    }
    let y = Float::with_val(w, 2u32 - r);
    let a = Float::with_val(w, -Float::with_val(w, y.recip_ref())).exp();
    let b = Float::with_val(w, -Float::with_val(w, 1u32 - &y).recip()).exp();
    let den = Float::with_val(w, &a + &b);
    a / den
}

/// q^{(s+1)/2} π^{−(s+2)/2} Γ(s/2+1) v^{s/2}.
fn direct_prefactor(ctx: &FieldContext, v: &Float, s: &Float, w: u32) -> Float {
    let hs = Float::with_val(w, s / 2u32);
    let qf = Float::with_val(w, ctx.q).pow(Float::with_val(w, s + 1u32) / 2u32);
    let pf = pi(w).pow(-(Float::with_val(w, &hs + 1u32)));
    let g = Float::with_val(w, &hs + 1u32).gamma();
    let vf = Float::with_val(w, v).pow(&hs);
    qf * pf * g * vf
}

/// Values of one row on the nodes u_j = j/P (P = `panels`), or at a single u if `single`.
fn row_on_nodes(ctx: &FieldContext, c: u64, v: &Float, s: &Float, window: u64, panels: u64, w: u32) -> Vec<BigComplex> {
    let p_i = panels as i64;
    let c_i = c as i64;
    let y = Float::with_val(w, v * c);
    let y2 = Float::with_val(w, y.square_ref());
    let expo = -(Float::with_val(w, s / 2u32) + 1u32);
    let a = Float::with_val(w, window);
    let nmax = 2 * window as i64 * p_i;
    let q = ctx.q as i64;
    let qdiv = c % ctx.q == 0;
    let mut re: Vec<Kahan> = (0..panels).map(|_| Kahan::new(w)).collect();
    let mut im: Vec<Kahan> = (0..panels).map(|_| Kahan::new(w)).collect();
    // x = n/P with n = C j + P D; g(−n) = −conj(g(n)), so each |n| costs one power
    for n_abs in 0..=nmax {
        let x = Float::with_val(w, n_abs) / p_i;
        let h = taper(&Float::with_val(w, &x / &a));
        if h.is_zero() {
            continue;
        }
        let r2 = Float::with_val(w, x.square_ref()) + &y2;
        if r2.is_zero() {
            continue;
        }
        let m = r2.pow(&expo) * h;
        let gre = Float::with_val(w, &x * &m);
        let gim = Float::with_val(w, &y * &m);
        for sign in [1i64, -1] {
            if n_abs == 0 && sign == -1 {
                continue;
            }
            let n = sign * n_abs;
            // g(n) = (x − iy) m with x = n/P
            let (tre, tim) = if sign == 1 {
                (gre.clone(), Float::with_val(w, -&gim))
            } else {
                (Float::with_val(w, -&gre), Float::with_val(w, -&gim))
            };
            for j in 0..p_i {
                let rem = n - c_i * j;
                if rem.rem_euclid(p_i) != 0 {
                    continue;
                }
                let d = rem / p_i;
                if c == 0 && d <= 0 {
                    continue;
                }
                let wt = if qdiv {
                    let k = ctx.chi(d);
                    if k == 0 {
                        continue;
                    }
                    k
                } else {
                    1
                };
                let ju = j as usize;
                if wt > 0 {
                    re[ju].add(&tre);
                    im[ju].add(&tim);
                } else {
                    re[ju].add(&Float::with_val(w, -&tre));
                    im[ju].add(&Float::with_val(w, -&tim));
                }
            }
        }
    }
    let mut out: Vec<BigComplex> = re.into_iter().zip(im).map(|(r, i)| BigComplex { re: r.total(), im: i.total() }).collect();
    if !qdiv {
        // −i q^{−1/2} χ(C)
        let f = Float::with_val(w, q).recip_sqrt() * ctx.chi(c_i);
        for z in out.iter_mut() {
            *z = z.scale(&f).mul_i();
            *z = -&*z;
        }
    }
    out
}

/// Upper bound for Σ_{|x| ≥ A} |x|^{−1−s} over unit-spaced x, both sides.
fn window_tail(a: &Float, s: &Float, w: u32) -> Float {
    let am = Float::with_val(w, a).pow(-Float::with_val(w, s));
    let am1 = Float::with_val(w, &am / a);
    am / s * 2u32 + am1 * 2u32
}

/// E*(τ, s) by the tapered full-lattice sum (Re s > 1), with a bound on the truncation error.
pub fn eisenstein_star_direct(ctx: &FieldContext, tau: &HalfPlanePoint, s: &Float, cutoff: DirectCutoff, exec: Exec) -> NumResult<DirectValue> {
    if *s <= 1 {
        return Err(NumError::Domain("direct sum needs Re s > 1".into()));
    }
    let p = tau.prec().max(s.prec());
    let w = p + GUARD_BITS;
    let rows: Vec<u64> = (0..=cutoff.rows).collect();
    // a single node: evaluate each row at u by shifting D ranges, which is the P = 1 case with u folded into x
    let u = Float::with_val(w, &tau.u);
    let v = Float::with_val(w, &tau.v);
    let vals = par::map(exec, &rows, |&c| row_at(ctx, c, &u, &v, s, cutoff.window, w));
    let total = crate::numerics::compensated_sum(w, vals.iter());
    let k = direct_prefactor(ctx, &v, s, w);
    let bound = direct_tail_bound(ctx, &v, s, cutoff, w) * &k;
    Ok(DirectValue { value: total.scale(&k).with_prec(p), tail_bound: Float::with_val(p, bound) })
}

/// E(τ, s) = E*(τ, s) / (q^{(s+1)/2} Λ(s+1, χ)): the coprime-pair sum.
pub fn eisenstein_direct(ctx: &FieldContext, tau: &HalfPlanePoint, s: &Float, cutoff: DirectCutoff, exec: Exec) -> NumResult<DirectValue> {
    let p = tau.prec().max(s.prec());
    let w = p + GUARD_BITS;
    let star = eisenstein_star_direct(ctx, tau, s, cutoff, exec)?;
    let s1 = Float::with_val(w, s + 1u32);
    let norm = ctx.lambda_chi(&s1)? * Float::with_val(w, ctx.q).pow(Float::with_val(w, &s1 / 2u32));
    Ok(DirectValue {
        value: star.value.with_prec(w).scale(&Float::with_val(w, norm.recip_ref())).with_prec(p),
        tail_bound: Float::with_val(p, star.tail_bound / norm),
    })
}

fn row_at(ctx: &FieldContext, c: u64, u: &Float, v: &Float, s: &Float, window: u64, w: u32) -> BigComplex {
    let y = Float::with_val(w, v * c);
    let y2 = Float::with_val(w, y.square_ref());
    let expo = -(Float::with_val(w, s / 2u32) + 1u32);
    let a = Float::with_val(w, window);
    let x0 = Float::with_val(w, u * c);
    let lo = (-x0.to_f64() - 2.0 * window as f64).floor() as i64 - 1;
    let hi = (-x0.to_f64() + 2.0 * window as f64).ceil() as i64 + 1;
    let qdiv = c % ctx.q == 0;
    let mut re = Kahan::new(w);
    let mut im = Kahan::new(w);
    for d in lo..=hi {
        if c == 0 && d <= 0 {
            continue;
        }
        let wt = if qdiv { ctx.chi(d) } else { 1 };
        if wt == 0 {
            continue;
        }
        let x = Float::with_val(w, &x0 + d);
        let h = taper(&(Float::with_val(w, x.abs_ref()) / &a));
        if h.is_zero() {
            continue;
        }
        let r2 = Float::with_val(w, x.square_ref()) + &y2;
        let m = r2.pow(&expo) * h * wt;
        re.add(&Float::with_val(w, &x * &m));
        im.add(&-Float::with_val(w, &y * &m));
    }
    let z = BigComplex { re: re.total(), im: im.total() };
    if qdiv {
        z
    } else {
        let f = Float::with_val(w, ctx.q).recip_sqrt() * ctx.chi(c as i64);
        -z.scale(&f).mul_i()
    }
}

/// Bound on the direct-sum truncation, before the prefactor:
/// window part (R+1)·Σ_{|x|≥A}|x|^{−1−s}, plus rows C > R through
/// Σ_D (D² + y²)^{−(1+s)/2} ≤ y^{−1−s} + B(s) y^{−s}, B(s) = √π Γ(s/2)/Γ((s+1)/2).
pub fn direct_tail_bound(ctx: &FieldContext, v: &Float, s: &Float, cutoff: DirectCutoff, w: u32) -> Float {
    let _ = ctx;
    let a = Float::with_val(w, cutoff.window);
    let win = window_tail(&a, s, w) * (cutoff.rows + 1);
    let r = Float::with_val(w, cutoff.rows.max(1));
    let b = pi(w).sqrt() * Float::with_val(w, s / 2u32).gamma() / (Float::with_val(w, s + 1u32) / 2u32).gamma();
    let sm1 = Float::with_val(w, s - 1u32);
    let t1 = Float::with_val(w, v).pow(-(Float::with_val(w, s + 1u32))) * Float::with_val(w, &r).pow(-Float::with_val(w, s)) / s;
    let t2 = b * Float::with_val(w, v).pow(-Float::with_val(w, s)) * Float::with_val(w, &r).pow(-Float::with_val(w, &sm1)) / &sm1;
    win + t1 + t2
}

/// Rows that can carry mode t ≠ 0: C | t, or q | C with C/q | t.
pub fn rows_for_modes(ctx: &FieldContext, ts: &[i64]) -> Vec<u64> {
    let mut rows = Vec::new();
    for &t in ts {
        if t == 0 {
            continue;
        }
        let a = t.unsigned_abs();
        for d in 1..=a {
            if a % d == 0 {
                rows.push(d);
                rows.push(d * ctx.q);
            }
        }
    }
    rows.sort_unstable();
    rows.dedup();
    rows
}

/// Classical Fourier coefficients ∫₀¹ E*(u + iv, s) e(−tu) du for every t in `ts`,
/// by the trapezoid rule on `panels` nodes.
///
/// For t ≠ 0 only rows that can carry mode t are summed (the others
/// contribute exactly zero to it), so the truncation error is the window
/// tail of those rows plus aliasing from modes t ± P. The row cutoff is
/// implied: every row C ≤ q·max|t| that matters is included.
pub fn fourier_extract_many(
    ctx: &FieldContext,
    v: &Float,
    s: &Float,
    ts: &[i64],
    window: u64,
    panels: u64,
    exec: Exec,
) -> NumResult<Vec<(BigComplex, Float)>> {
    if *s <= 1 {
        return Err(NumError::Domain("direct sum needs Re s > 1".into()));
    }
    let tmax = ts.iter().map(|t| t.unsigned_abs()).max().unwrap_or(0);
    if 2 * tmax >= panels {
        return Err(NumError::Domain(format!("aliasing: |t| = {tmax} needs more than {panels} panels")));
    }
    let p = v.prec().max(s.prec());
    let w = p + GUARD_BITS;
    let v = Float::with_val(w, v);
    let mut rows = rows_for_modes(ctx, ts);
    if ts.contains(&0) {
        rows = (0..=ctx.q * tmax.max(1)).collect();
    }
    let per_row = par::map(exec, &rows, |&c| row_on_nodes(ctx, c, &v, s, window, panels, w));
    let k = direct_prefactor(ctx, &v, s, w);
    let mut nodes = Vec::with_capacity(panels as usize);
    for j in 0..panels as usize {
        let col: Vec<BigComplex> = per_row.iter().map(|r| r[j].clone()).collect();
        nodes.push(crate::numerics::compensated_sum(w, col.iter()).scale(&k));
    }
    let a = Float::with_val(w, window);
    let wt = window_tail(&a, s, w);
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        let terms: Vec<BigComplex> = nodes
            .iter()
            .enumerate()
            .map(|(j, z)| {
                let ph = BigComplex::e(&(Float::with_val(w, -t) * j as u32 / panels as u32));
                z * &ph
            })
            .collect();
        let c = crate::numerics::compensated_sum(w, terms.iter()).scale(&Float::with_val(w, Float::with_val(w, panels).recip_ref()));
        let contributing = rows_for_modes(ctx, &[t]).len().max(1) as u32;
        let mut bound = Float::with_val(w, &wt * contributing) * &k;
        // aliasing: modes t ± P carry at most ~e^{−2π(P−|t|)v} of the row scale
        let alias = (pi(w) * Float::with_val(w, &v * (panels - t.unsigned_abs())) * -2i32).exp() * &k * 10u32;
        bound += alias;
        if t == 0 {
            let cut = DirectCutoff { rows: ctx.q * tmax.max(1), window };
            bound = direct_tail_bound(ctx, &v, s, cut, w) * &k;
        }
        out.push((c.with_prec(p), Float::with_val(p, bound)));
    }
    Ok(out)
}

pub fn fourier_extract(ctx: &FieldContext, v: &Float, s: &Float, t: i64, window: u64, panels: u64) -> NumResult<(BigComplex, Float)> {
    Ok(fourier_extract_many(ctx, v, s, &[t], window, panels, Exec::default())?.remove(0))
}

/// Smallest window whose tail bound (for the rows feeding modes up to |t|) is below `tol`.
pub fn window_for_tolerance(ctx: &FieldContext, v: &Float, s: &Float, ts: &[i64], tol: f64) -> u64 {
    let w = 64;
    let k = direct_prefactor(ctx, &Float::with_val(w, v), &Float::with_val(w, s), w).to_f64();
    let rows = ts.iter().map(|&t| rows_for_modes(ctx, &[t]).len()).max().unwrap_or(1) as f64;
    let sf = s.to_f64();
    let mut a = 8u64;
    loop {
        let af = a as f64;
        let b = k * rows * (2.0 * af.powf(-sf) / sf + 2.0 * af.powf(-1.0 - sf));
        if b < tol {
            return a;
        }
        a = (a as f64 * 1.1).ceil() as u64;
    }
}

/// E*_t(g_τ, s) = q^{(s+1)/2} W*_{t,∞} W*_{t,q} Π_{p≠q} W*_{t,p}(s).
pub fn coefficient_product(ctx: &FieldContext, tau: &HalfPlanePoint, t: i64, s: &Float) -> Result<BigComplex, Error> {
    coefficient_product_with(ctx, tau, t, s, ArchMethod::Closed)
}

pub fn coefficient_product_with(ctx: &FieldContext, tau: &HalfPlanePoint, t: i64, s: &Float, arch: ArchMethod) -> Result<BigComplex, Error> {
    if t == 0 {
        return Err(Error::Invalid("coefficient_product needs t ≠ 0".into()));
    }
    let p = tau.prec().max(s.prec());
    let w = p + GUARD_BITS;
    let sw = Float::with_val(w, s);
    let tw = HalfPlanePoint { u: Float::with_val(w, &tau.u), v: Float::with_val(w, &tau.v) };
    let a = match arch {
        ArchMethod::Closed => arch_factor(&tw, t, &sw)?,
        ArchMethod::Quadrature => arch_factor_quadrature(&tw, t, &sw)?,
    };
    let mut acc = &a * &q_factor(ctx, t, &sw);
    for (pr, _) in factorize(t.unsigned_abs()) {
        if pr != ctx.q {
            acc = &acc * &finite_factor(ctx, pr, t, &sw)?;
        }
    }
    let qf = Float::with_val(w, ctx.q).pow(Float::with_val(w, &sw + 1u32) / 2u32);
    Ok(acc.scale(&qf).with_prec(p))
}

/// Places whose local factor vanishes at s = 0.
pub fn vanishing_places(ctx: &FieldContext, t: i64) -> Vec<Place> {
    let mut out = Vec::new();
    if t < 0 {
        out.push(Place::Infinity);
    }
    if ctx.chi_q_local(t) == 1 {
        out.push(Place::Q);
    }
    for (p, e) in factorize(t.unsigned_abs()) {
        if ctx.is_inert(p) && e % 2 == 1 {
            out.push(Place::Finite(p));
        }
    }
    out
}

/// E*'_t(g_τ, 0) in closed form:
///   ρ(−t) ≠ 0:  −2 v^{1/2} e(tτ) β₁(4π|t|v) ρ(−t)
///   ρ(t) ≠ 0:   −2 v^{1/2} e(tτ) log q (ord_q t + 1) ρ(t)
///   ρ(t/p) ≠ 0: −2 v^{1/2} e(tτ) log p (ord_p t + 1) ρ(t/p), p inert
/// and 0 when three or more local factors vanish.
pub fn central_deriv_coefficient(ctx: &FieldContext, tau: &HalfPlanePoint, t: i64) -> Result<FourierCoefficient, Error> {
    if t == 0 {
        return Err(Error::Invalid("use constant_term_deriv0 for t = 0".into()));
    }
    let p = tau.prec();
    let w = p + GUARD_BITS;
    let places = vanishing_places(ctx, t);
    let base = e_t_tau(tau, t).with_prec(w).scale(&(Float::with_val(w, tau.v.sqrt_ref()) * -2i32));
    let zero = |pl: Option<Place>| FourierCoefficient { t, value: BigComplex::zero(p), v_dependent: t < 0, vanishing_place: pl };
    if places.len() != 1 {
        return Ok(zero(None));
    }
    let place = places[0];
    let factor = match place {
        Place::Infinity => {
            let r = ctx.rho0(-t);
            let z = pi(w) * Float::with_val(w, &tau.v * t.unsigned_abs()) * 4u32;
            beta1(&z)? * r
        }
        Place::Q => Float::with_val(w, ctx.q).ln() * (ord(ctx.q, t) + 1) * ctx.rho0(t),
        Place::Finite(pr) => Float::with_val(w, pr).ln() * (ord(pr, t) + 1) * ctx.rho0(t / pr as i64),
    };
    Ok(FourierCoefficient { t, value: base.scale(&factor).with_prec(p), v_dependent: t < 0, vanishing_place: Some(place) })
}

/// E*_0(τ, s) = q^{(s+1)/2} Λ(s+1,χ) v^{(s+1)/2} − q^{(1−s)/2} Λ(1−s,χ) v^{(1−s)/2}.
pub fn constant_term(ctx: &FieldContext, tau: &HalfPlanePoint, s: &Float) -> NumResult<Float> {
    let p = tau.prec().max(s.prec());
    let w = p + GUARD_BITS;
    let s = Float::with_val(w, s);
    let v = Float::with_val(w, &tau.v);
    let piece = |x: &Float| -> NumResult<Float> {
        // q^{x/2} Λ(x, χ) v^{x/2} with x = 1 ± s
        let hx = Float::with_val(w, x / 2u32);
        let l = ctx.lambda_chi(x)?;
        Ok(Float::with_val(w, ctx.q).pow(&hx) * l * Float::with_val(w, &v).pow(&hx))
    };
    let a = piece(&Float::with_val(w, &s + 1u32))?;
    let b = piece(&Float::with_val(w, 1u32 - &s))?;
    Ok(Float::with_val(p, a - b))
}

/// ∂E*_0/∂s at s = 0: h v^{1/2} (log q + log v + 2 Λ'/Λ(1,χ)).
pub fn constant_term_deriv0(ctx: &FieldContext, tau: &HalfPlanePoint) -> Float {
    let p = tau.prec();
    let w = p + GUARD_BITS;
    let v = Float::with_val(w, &tau.v);
    let br = Float::with_val(w, ctx.q).ln() + Float::with_val(w, v.ln_ref()) + Float::with_val(w, &ctx.lambda_logderiv1 * 2u32);
    Float::with_val(p, br * v.sqrt() * ctx.h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{dec, rel_err};

    const P: u32 = 128;

    fn tau(u: &str, v: &str) -> HalfPlanePoint {
        HalfPlanePoint::new(dec(P, u), dec(P, v)).unwrap()
    }

    #[test]
    fn taper_shape() {
        let w = 96;
        assert_eq!(taper(&dec(w, "0.5")), 1);
        assert_eq!(taper(&dec(w, "2.5")), 0);
        let m = taper(&dec(w, "1.5")).to_f64();
        assert!((m - 0.5).abs() < 1e-20);
    }

    #[test]
    fn central_vanishing_and_parity() {
        for q in [7, 11, 19] {
            let k = FieldContext::new(q, 64).unwrap();
            let tt = HalfPlanePoint::new(dec(64, "0.2"), dec(64, "0.9")).unwrap();
            let zero = Float::new(64);
            for t in (-50..=50).filter(|&t| t != 0) {
                assert!(coefficient_product(&k, &tt, t, &zero).unwrap().is_zero());
            }
            for t in (-200..=200i64).filter(|&t| t != 0) {
                assert_eq!(vanishing_places(&k, t).len() % 2, 1, "q = {q}, t = {t}");
            }
        }
    }

    #[test]
    fn central_deriv_examples() {
        let k = FieldContext::new(7, P).unwrap();
        let tt = tau("0.1", "1.3");
        let sv = tt.v.clone().sqrt();
        let l3 = Float::with_val(P, 3).ln();
        // t = 3: 3 inert, ord 1, ρ(1) = 1
        let c = central_deriv_coefficient(&k, &tt, 3).unwrap();
        assert_eq!(c.vanishing_place, Some(Place::Finite(3)));
        let want = e_t_tau(&tt, 3).scale(&(Float::with_val(P, &sv * -2i32) * &l3 * 2u32));
        assert!((&c.value - &want).abs() / want.abs() < 1e-35);
        // t = −2: ρ(2) = 2
        let c = central_deriv_coefficient(&k, &tt, -2).unwrap();
        assert_eq!(c.vanishing_place, Some(Place::Infinity));
        let b = beta1(&(pi(P) * &tt.v * 8u32)).unwrap();
        let want = e_t_tau(&tt, -2).scale(&(Float::with_val(P, &sv * -2i32) * b * 2u32));
        assert!((&c.value - &want).abs() / want.abs() < 1e-35);
        // t = 6 = 2·3: case through p = 3 with ρ(2) = 2
        let c = central_deriv_coefficient(&k, &tt, 6).unwrap();
        assert_eq!(c.vanishing_place, Some(Place::Finite(3)));
        let want = e_t_tau(&tt, 6).scale(&(Float::with_val(P, &sv * -2i32) * &l3 * 2u32 * 2u32));
        assert!((&c.value - &want).abs() / want.abs() < 1e-35);
        // 3·5 with both inert: three factors vanish
        let c = central_deriv_coefficient(&k, &tt, 15).unwrap();
        assert!(c.value.is_zero() && c.vanishing_place.is_none());
    }

    #[test]
    fn central_deriv_is_numerical_derivative() {
        let k = FieldContext::new(11, P).unwrap();
        let tt = tau("0.25", "0.8");
        let h = dec(P, "1e-10");
        for t in [-7i64, -3, -1, 1, 2, 3, 5, 9, 12, 22] {
            let up = coefficient_product(&k, &tt, t, &h).unwrap();
            let dn = coefficient_product(&k, &tt, t, &Float::with_val(P, -&h)).unwrap();
            let fd = (&up - &dn).scale(&Float::with_val(P, Float::with_val(P, &h * 2u32).recip_ref()));
            let c = central_deriv_coefficient(&k, &tt, t).unwrap().value;
            let err = (&fd - &c).abs();
            let scale = c.abs().max(&Float::with_val(P, 1));
            assert!(err / scale < 1e-15, "t = {t}: {:?} vs {:?}", fd, c);
        }
    }

    #[test]
    fn constant_term_properties() {
        let k = FieldContext::new(7, P).unwrap();
        let tt = tau("0", "1.7");
        assert!(constant_term(&k, &tt, &Float::new(P)).unwrap().abs() < 1e-35);
        for s in ["0.3", "0.7", "1.2"] {
            let s = dec(P, s);
            let a = constant_term(&k, &tt, &s).unwrap();
            let b = constant_term(&k, &tt, &Float::with_val(P, -&s)).unwrap();
            assert!(rel_err(&Float::with_val(P, -b), &a) < 1e-33);
        }
        let h = dec(P, "1e-12");
        let fd = (constant_term(&k, &tt, &h).unwrap() - constant_term(&k, &tt, &Float::with_val(P, -&h)).unwrap()) / (h * 2u32);
        assert!(rel_err(&fd, &constant_term_deriv0(&k, &tt)) < 1e-20);
        // v = 1, h = 1: log 7 + 2 Λ'/Λ(1,χ)
        let d = constant_term_deriv0(&k, &tau("0", "1"));
        let want = Float::with_val(P, 7).ln() + Float::with_val(P, &k.lambda_logderiv1 * 2u32);
        assert!(rel_err(&d, &want) < 1e-35);
    }

    #[test]
    fn direct_sum_against_fourier_expansion() {
        let k = FieldContext::new(7, 96).unwrap();
        let tt = HalfPlanePoint::new(dec(96, "0.3"), dec(96, "1")).unwrap();
        let s = dec(96, "3");
        let d = eisenstein_star_direct(&k, &tt, &s, DirectCutoff { rows: 200, window: 200 }, Exec::default()).unwrap();
        let mut sum = BigComplex::from_real(constant_term(&k, &tt, &s).unwrap());
        for t in (-30..=30).filter(|&t| t != 0) {
            sum = sum + coefficient_product(&k, &tt, t, &s).unwrap();
        }
        let gap = (&d.value - &sum).abs();
        assert!(gap <= d.tail_bound, "gap {:e}, bound {:e}", gap.to_f64(), d.tail_bound.to_f64());
        let coarse = eisenstein_star_direct(&k, &tt, &s, DirectCutoff { rows: 100, window: 100 }, Exec::default()).unwrap();
        assert!((&coarse.value - &sum).abs() <= coarse.tail_bound);
        let e = eisenstein_direct(&k, &tt, &s, DirectCutoff { rows: 100, window: 100 }, Exec::default()).unwrap();
        assert!(e.tail_bound < coarse.tail_bound);
    }

    #[test]
    fn extraction_matches_product() {
        let k = FieldContext::new(7, 96).unwrap();
        let v = dec(96, "1");
        let s = dec(96, "3");
        let ts = [1i64, -1, 2];
        let got = fourier_extract_many(&k, &v, &s, &ts, 60, 16, Exec::default()).unwrap();
        let tt = HalfPlanePoint::new(Float::new(96), v.clone()).unwrap();
        for (&t, (c, bound)) in ts.iter().zip(&got) {
            let prod = coefficient_product(&k, &tt, t, &s).unwrap().scale(&Float::with_val(96, v.recip_sqrt_ref()));
            let gap = (c - &prod).abs();
            assert!(gap < 1e-8 && gap <= *bound, "t = {t}: gap {:e}", gap.to_f64());
        }
    }
}
