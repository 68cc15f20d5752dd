//! Normalized local Whittaker factors W*_{t,p}(s), W*_{t,q}(s), W*_{t,∞}(τ,s).
//!
//! Conventions: e(x) = e^{2πix}, c_q = i q^{-1/2}. The archimedean factor is
//! the Siegel integral
//!   v^{(1−s)/2} e(tu) 2iπ^{s/2} e^{2πtv} / Γ(s/2) · ∫_{max(2tv,0)}^∞ e^{−2πu} u^{s/2} (u − 2tv)^{s/2−1} du.
//! With z = 4π|t|v its closed forms are
//!   t > 0:  2i v^{1/2} e(tτ) (4πv)^{s/2} t^s U(s/2, s+1, z)
//!   t < 0:  i s v^{(1−s)/2} π^{s/2} (2|t|v)^s e(tu) e^{−2π|t|v} U(s/2+1, s+1, z)
//!   t = 0:  i v^{(1−s)/2} π^{−(s+1)/2} Γ((s+1)/2)

use rug::ops::Pow;
use rug::Float;

use crate::eisenstein::HalfPlanePoint;
use crate::numerics::{beta1, gamma, kummer_u, pi, BigComplex, NumError, NumResult, Quadrature, GUARD_BITS};
use crate::quadfield::{factorize, ord, FieldContext};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(u64),
    Q,
    Infinity,
}

/// A local factor with its value and first derivative at the center.
#[derive(Debug, Clone)]
pub struct LocalFactor {
    pub place: Place,
    pub value_at_0: BigComplex,
    pub deriv_at_0: Option<BigComplex>,
}

/// c_q = i q^{-1/2}.
pub fn c_q(ctx: &FieldContext, prec: u32) -> BigComplex {
    BigComplex::from_imag(Float::with_val(prec, ctx.q).recip_sqrt())
}

/// Σ_{r=0}^{ord_p t} (χ(p) p^{-s})^r.
pub fn finite_factor(ctx: &FieldContext, p: u64, t: i64, s: &Float) -> Result<BigComplex, Error> {
    if p == ctx.q || t == 0 {
        return Err(Error::Invalid("finite_factor needs p ≠ q and t ≠ 0".into()));
    }
    let e = ord(p, t);
    let w = s.prec() + GUARD_BITS;
    let x = Float::with_val(w, p).pow(-Float::with_val(w, s)) * ctx.chi(p as i64);
    let mut acc = Float::with_val(w, 1);
    let mut pw = Float::with_val(w, 1);
    for _ in 0..e {
        pw *= &x;
        acc += &pw;
    }
    Ok(BigComplex::from_real(Float::with_val(s.prec(), acc)))
}

/// W*'_{t,p}(0) = log p · (ord_p t + 1)/2 for p inert with ord_p t odd.
pub fn finite_factor_deriv0(ctx: &FieldContext, p: u64, t: i64, prec: u32) -> Result<Float, Error> {
    let e = ord(p, t);
    if !ctx.is_inert(p) || e % 2 == 0 {
        return Err(Error::Invalid(format!("p = {p} must be inert with odd ord_p(t); got ord {e}")));
    }
    Ok(Float::with_val(prec, p).ln() * (e + 1) / 2u32)
}

/// (1 − χ_q(t) q^{−s(ord_q t + 1)}) c_q.
pub fn q_factor(ctx: &FieldContext, t: i64, s: &Float) -> BigComplex {
    let p = s.prec();
    let w = p + GUARD_BITS;
    let e = ord(ctx.q, t);
    let x = Float::with_val(w, ctx.q).pow(-Float::with_val(w, s * (e + 1)));
    let f = Float::with_val(w, 1) - x * ctx.chi_q_local(t);
    c_q(ctx, p).scale(&Float::with_val(p, f))
}

/// c_q log q (ord_q t + 1) when χ_q(t) = +1; zero otherwise.
pub fn q_factor_deriv0(ctx: &FieldContext, t: i64, prec: u32) -> BigComplex {
    if ctx.chi_q_local(t) != 1 {
        return BigComplex::zero(prec);
    }
    let e = ord(ctx.q, t);
    c_q(ctx, prec).scale(&(Float::with_val(prec, ctx.q).ln() * (e + 1)))
}

/// e(tτ) = e^{2πitu} e^{−2πtv}.
pub fn e_t_tau(tau: &HalfPlanePoint, t: i64) -> BigComplex {
    let p = tau.prec();
    let w = p + GUARD_BITS;
    let ph = BigComplex::e(&Float::with_val(w, &tau.u * t));
    let m = (Float::with_val(w, &tau.v * t) * pi(w) * -2i32).exp();
    ph.scale(&m).with_prec(p)
}

/// Closed form of W*_{t,∞}(τ, s) for any real s.
pub fn arch_factor(tau: &HalfPlanePoint, t: i64, s: &Float) -> NumResult<BigComplex> {
    let p = tau.prec().max(s.prec());
    let w = p + GUARD_BITS;
    let s = Float::with_val(w, s);
    let v = Float::with_val(w, &tau.v);
    if s.is_zero() {
        let out = match t.signum() {
            1 => e_t_tau(tau, t).with_prec(w).scale(&(v.sqrt() * 2u32)).mul_i(),
            0 => BigComplex::from_imag(v.sqrt()),
            _ => BigComplex::zero(w),
        };
        return Ok(out.with_prec(p));
    }
    let out = if t == 0 {
        let h = Float::with_val(w, &s + 1u32) / 2u32;
        let g = gamma(&h)?;
        let vp = v.pow(Float::with_val(w, 1u32 - &s) / 2u32);
        let pp = pi(w).pow(-h);
        BigComplex::from_imag(vp * pp * g)
    } else {
        let at = t.unsigned_abs();
        let z = pi(w) * Float::with_val(w, &v * at) * 4u32;
        if t > 0 {
            let a = Float::with_val(w, &s / 2u32);
            let b = Float::with_val(w, &s + 1u32);
            let u = kummer_u(&a, &b, &z)?;
            let f = (pi(w) * &v * 4u32).pow(&a) * Float::with_val(w, at).pow(&s) * u * v.sqrt() * 2u32;
            e_t_tau(tau, t).with_prec(w).scale(&f).mul_i()
        } else {
            let a = Float::with_val(w, &s / 2u32) + 1u32;
            let b = Float::with_val(w, &s + 1u32);
            let u = kummer_u(&a, &b, &z)?;
            let vp = Float::with_val(w, &v).pow(Float::with_val(w, 1u32 - &s) / 2u32);
            let av = Float::with_val(w, &v * (2 * at));
            let decay = (pi(w) * Float::with_val(w, &v * at) * -2i32).exp();
            let f = Float::with_val(w, &s * vp) * pi(w).pow(Float::with_val(w, &s / 2u32)) * av.pow(&s) * decay * u;
            let ph = BigComplex::e(&Float::with_val(w, &tau.u * t));
            ph.scale(&f).mul_i()
        }
    };
    Ok(out.with_prec(p))
}

/// W*'_{t,∞}(τ, 0) = i v^{1/2} e(tτ) β₁(4π|t|v) for t < 0.
pub fn arch_factor_deriv0(tau: &HalfPlanePoint, t: i64) -> Result<BigComplex, Error> {
    if t >= 0 {
        return Err(Error::Invalid("arch_factor_deriv0 needs t < 0".into()));
    }
    let p = tau.prec();
    let w = p + GUARD_BITS;
    let z = pi(w) * Float::with_val(w, &tau.v * t.unsigned_abs()) * 4u32;
    let b = beta1(&z)?;
    let f = Float::with_val(w, tau.v.sqrt_ref()) * b;
    Ok(e_t_tau(tau, t).with_prec(w).scale(&f).mul_i().with_prec(p))
}

/// The Siegel integral by exp-sinh quadrature, after u → u + max(2tv, 0).
///
/// For t > 0 and s < 1 the integrand w^{s/2−1}(w+A)^{s/2} e^{−2πw} is first
/// integrated by parts, which gives
///   Γ(s/2+1)^{-1} ∫ w^{s/2} e^{−2πw} (w+A)^{s/2−1} [2π(w+A) − s/2] dw
/// in place of Γ(s/2)^{-1} ∫ w^{s/2−1} e^{−2πw} (w+A)^{s/2} dw; this converges for s > −2.
pub fn arch_factor_quadrature(tau: &HalfPlanePoint, t: i64, s: &Float) -> NumResult<BigComplex> {
    let p = tau.prec().max(s.prec());
    let w = p + GUARD_BITS;
    let s = Float::with_val(w, s);
    if s <= -2 || (t == 0 && s <= 0) {
        return Err(NumError::Domain("Siegel integral diverges".into()));
    }
    let v = Float::with_val(w, &tau.v);
    let at = t.unsigned_abs();
    let a_shift = Float::with_val(w, &v * (2 * at));
    let two_pi = pi(w) * 2u32;
    let hs = Float::with_val(w, &s / 2u32);
    let hs_m1 = Float::with_val(w, &hs - 1u32);
    let quad = Quadrature::new(p);
    let zero = Float::new(w);
    let cut = 4.0 * w as f64;
    let decay = |x: &Float| Float::with_val(w, x * &two_pi);
    let ibp = t > 0 && s < 1;
    let (integral, gam) = if t == 0 {
        let sm1 = Float::with_val(w, &s - 1u32);
        let f = |x: &Float| -> Float {
            if x.to_f64() > cut {
                return Float::new(w);
            }
            (Float::with_val(w, x.ln_ref()) * &sm1 - decay(x)).exp()
        };
        (quad.half_line(&f, &zero)?.value, Float::with_val(w, &hs))
    } else if t > 0 && !ibp {
        let f = |x: &Float| -> Float {
            if x.to_f64() > cut {
                return Float::new(w);
            }
            let l = Float::with_val(w, x.ln_ref()) * &hs_m1 + Float::with_val(w, x + &a_shift).ln() * &hs;
            (l - decay(x)).exp()
        };
        (quad.half_line(&f, &zero)?.value, Float::with_val(w, &hs))
    } else if ibp {
        let f = |x: &Float| -> Float {
            if x.to_f64() > cut {
                return Float::new(w);
            }
            let xa = Float::with_val(w, x + &a_shift);
            let l = Float::with_val(w, x.ln_ref()) * &hs + Float::with_val(w, xa.ln_ref()) * &hs_m1;
            let bracket = Float::with_val(w, &xa * &two_pi) - &hs;
            (l - decay(x)).exp() * bracket
        };
        (quad.half_line(&f, &zero)?.value, Float::with_val(w, &hs + 1u32))
    } else {
        if s.is_zero() {
            return Ok(BigComplex::zero(p));
        }
        let f = |x: &Float| -> Float {
            if x.to_f64() > cut {
                return Float::new(w);
            }
            let l = Float::with_val(w, x.ln_ref()) * &hs + Float::with_val(w, x + &a_shift).ln() * &hs_m1;
            (l - decay(x)).exp()
        };
        (quad.half_line(&f, &zero)?.value, Float::with_val(w, &hs))
    };
    // v^{(1−s)/2} 2 π^{s/2} e^{−2π|t|v} / Γ(·), times i e(tu)
    let vp = Float::with_val(w, &v).pow(Float::with_val(w, 1u32 - &s) / 2u32);
    let mut f = vp * pi(w).pow(&hs) * 2u32 * integral;
    if gam.is_integer() && gam <= 0 {
        f = Float::new(w);
    } else {
        f /= Float::with_val(w, gam.gamma_ref());
    }
    if t != 0 {
        f *= (Float::with_val(w, &v * at) * &two_pi * -1i32).exp();
    }
    let ph = BigComplex::e(&Float::with_val(w, &tau.u * t));
    Ok(ph.scale(&f).mul_i().with_prec(p))
}

/// All local factors of the t-th coefficient, with values and derivatives at s = 0.
pub fn local_factors(ctx: &FieldContext, tau: &HalfPlanePoint, t: i64) -> Result<Vec<LocalFactor>, Error> {
    if t == 0 {
        return Err(Error::Invalid("local factors need t ≠ 0".into()));
    }
    let p = tau.prec();
    let zero = Float::new(p);
    let mut out = Vec::new();
    let arch0 = arch_factor(tau, t, &zero)?;
    let arch_d = if t < 0 { Some(arch_factor_deriv0(tau, t)?) } else { None };
    out.push(LocalFactor { place: Place::Infinity, value_at_0: arch0, deriv_at_0: arch_d });
    let qd = if ctx.chi_q_local(t) == 1 { Some(q_factor_deriv0(ctx, t, p)) } else { None };
    out.push(LocalFactor { place: Place::Q, value_at_0: q_factor(ctx, t, &zero), deriv_at_0: qd });
    for (pr, e) in factorize(t.unsigned_abs()) {
        if pr == ctx.q {
            continue;
        }
        let d = if ctx.is_inert(pr) && e % 2 == 1 {
            Some(BigComplex::from_real(finite_factor_deriv0(ctx, pr, t, p)?))
        } else {
            None
        };
        out.push(LocalFactor { place: Place::Finite(pr), value_at_0: finite_factor(ctx, pr, t, &zero)?, deriv_at_0: d });
    }
    Ok(out)
}
