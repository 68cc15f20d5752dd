//! The form φ = −∂E*/∂s at s = 0: its Fourier coefficients, evaluation by
//! truncated expansion, and the Mellin transform of φ(iv) − a₀(φ, v).

use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::Float;

use crate::eisenstein::HalfPlanePoint;
use crate::numerics::quad::Quadrature;
use crate::numerics::{beta1, digamma, gamma, mellin_beta1_identity_lhs, pi, riemann_zeta, zeta_logderiv, BigComplex, Kahan, NumError, NumResult, GUARD_BITS};
use crate::par::{self, Exec};
use crate::quadfield::{factorize, ord, FieldContext};
use crate::Error;

/// Σ c_p log p with integer c_p, kept exact.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LogCombination {
    terms: BTreeMap<u64, i64>,
}

impl LogCombination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, p: u64, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(p).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// (prime, coefficient) pairs in increasing prime order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.terms.iter().map(|(&p, &c)| (p, c))
    }

    pub fn coeff(&self, p: u64) -> i64 {
        self.terms.get(&p).copied().unwrap_or(0)
    }

    pub fn eval(&self, prec: u32) -> Float {
        let w = prec + GUARD_BITS;
        let mut acc = Float::new(w);
        for (p, c) in self.terms() {
            acc += Float::with_val(w, p).ln() * c;
        }
        Float::with_val(prec, acc)
    }
}

impl fmt::Display for LogCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(p, c)| format!("{c}·log {p}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// a_n(φ) = 2 log q (ord_q n + 1) ρ(n) + 2 Σ_{p inert} log p (ord_p n + 1) ρ(n/p), exactly.
pub fn coeff_positive_exact(ctx: &FieldContext, n: i64) -> Result<LogCombination, Error> {
    if n < 1 {
        return Err(Error::Invalid(format!("coeff_positive needs n ≥ 1, got {n}")));
    }
    let mut out = LogCombination::new();
    let r = ctx.rho0(n);
    if r > 0 {
        out.add(ctx.q, 2 * (ord(ctx.q, n) as i64 + 1) * r as i64);
    }
    for (p, e) in factorize(n as u64) {
        if ctx.is_inert(p) {
            let r = ctx.rho0(n / p as i64);
            out.add(p, 2 * (e as i64 + 1) * r as i64);
        }
    }
    Ok(out)
}

pub fn coeff_positive(ctx: &FieldContext, n: i64) -> Result<Float, Error> {
    Ok(coeff_positive_exact(ctx, n)?.eval(ctx.prec))
}

/// Coefficient of e(−nτ): 2 β₁(4πnv) ρ(n).
pub fn coeff_negative(ctx: &FieldContext, n: i64, v: &Float) -> Result<Float, Error> {
    if n < 1 {
        return Err(Error::Invalid(format!("coeff_negative needs n ≥ 1, got {n}")));
    }
    if *v <= 0 {
        return Err(Error::Invalid("v must be positive".into()));
    }
    let p = v.prec();
    let r = ctx.rho0(n);
    if r == 0 {
        return Ok(Float::new(p));
    }
    let w = p + GUARD_BITS;
    let z = pi(w) * Float::with_val(w, v * n) * 4u32;
    let b = Float::with_val(p, beta1(&z)? * 2u32);
    Ok(Float::with_val(p, b * r))
}

/// a₀(φ, v) = −h (log q + log v + 2 Λ'/Λ(1, χ)).
pub fn coeff_constant(ctx: &FieldContext, v: &Float) -> Result<Float, Error> {
    if *v <= 0 {
        return Err(Error::Invalid("v must be positive".into()));
    }
    let p = v.prec();
    let w = p + GUARD_BITS;
    let br = Float::with_val(w, ctx.q).ln() + Float::with_val(w, v.ln_ref()) + Float::with_val(w, &ctx.lambda_logderiv1 * 2u32);
    Ok(Float::with_val(p, -br * ctx.h))
}

/// Coefficient tables up to `nmax`, for repeated evaluation.
#[derive(Debug, Clone)]
pub struct PhiExpansion {
    pub nmax: u64,
    /// a_n, n = 1..=nmax (index n − 1)
    pub positive: Vec<LogCombination>,
    /// ρ(n), n = 1..=nmax
    pub rho: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct PhiValue {
    pub value: BigComplex,
    pub tail_bound: Float,
}

impl PhiExpansion {
    pub fn new(ctx: &FieldContext, nmax: u64, exec: Exec) -> Result<Self, Error> {
        if nmax < 1 {
            return Err(Error::Invalid("nmax must be at least 1".into()));
        }
        let positive = par::map_range(exec, 1, nmax as i64 + 1, |n| coeff_positive_exact(ctx, n).expect("n ≥ 1"));
        let rho = par::map_range(exec, 1, nmax as i64 + 1, |n| ctx.rho0(n));
        Ok(PhiExpansion { nmax, positive, rho })
    }

    /// Coefficient of e(tτ) as a function of v: a₀(v), a_t, or 2β₁(4π|t|v)ρ(|t|).
    pub fn coefficient(&self, ctx: &FieldContext, t: i64, v: &Float) -> Result<Float, Error> {
        let n = t.unsigned_abs();
        if n > self.nmax {
            return Err(Error::Invalid(format!("|t| = {n} beyond nmax = {}", self.nmax)));
        }
        match t {
            0 => coeff_constant(ctx, v),
            t if t > 0 => Ok(self.positive[n as usize - 1].eval(v.prec())),
            _ => coeff_negative(ctx, n as i64, v),
        }
    }

    /// a₀(φ,v) + Σ_{n≤N} a_n e(nτ) + Σ_{n≤N} 2ρ(n)β₁(4πnv) e(−nτ), with a tail bound.
    ///
    /// Tail: ρ(n) ≤ d(n) ≤ 2√n and Σ_{p|n}(ord_p n + 1) log p ≤ 2 log n give
    /// a_n ≤ 8n, and β₁(y) ≤ e^{−y}/y gives 2ρ(n)β₁(4πnv)e^{2πnv} ≤ x^n/(πv)
    /// with x = e^{−2πv}; the bound is Σ_{n>N} (8n + 1/(πv)) x^n in closed form.
    pub fn eval(&self, ctx: &FieldContext, tau: &HalfPlanePoint) -> Result<PhiValue, Error> {
        let p = tau.prec();
        let w = p + GUARD_BITS;
        let v = Float::with_val(w, &tau.v);
        let mut re = Kahan::new(w);
        let mut im = Kahan::new(w);
        re.add(&coeff_constant(ctx, &v)?);
        let xq = BigComplex::e(&Float::with_val(w, &tau.u)).scale(&(pi(w) * &v * -2i32).exp());
        let xq_bar = BigComplex::e(&Float::with_val(w, -&tau.u)).scale(&(pi(w) * &v * -2i32).exp());
        let mut pw = BigComplex::one(w);
        let mut pw_bar = BigComplex::one(w);
        let fourpv = pi(w) * &v * 4u32;
        for n in 1..=self.nmax {
            pw = &pw * &xq;
            // e(−nτ) = e(−nu)e^{−2πnv}·e^{4πnv}, the last factor folded into β₁
            pw_bar = &pw_bar * &xq_bar;
            let a = &self.positive[n as usize - 1];
            if !a.is_zero() {
                let z = pw.scale(&a.eval(w));
                re.add(&z.re);
                im.add(&z.im);
            }
            let r = self.rho[n as usize - 1];
            if r > 0 {
                let y = Float::with_val(w, &fourpv * n);
                let b = beta1(&y)? * Float::with_val(w, y.exp_ref()) * (2 * r);
                let z = pw_bar.scale(&b);
                re.add(&z.re);
                im.add(&z.im);
            }
        }
        let x = (pi(w) * &v * -2i32).exp();
        let n1 = Float::with_val(w, self.nmax + 1);
        let xn1 = Float::with_val(w, (&x).pow(&n1));
        let omx = Float::with_val(w, 1u32 - &x);
        // Σ_{n>N} n xⁿ and Σ_{n>N} xⁿ
        let s1 = Float::with_val(w, &xn1 * (Float::with_val(w, &n1 - Float::with_val(w, &x * self.nmax)))) / Float::with_val(w, omx.square_ref());
        let s0 = Float::with_val(w, &xn1 / &omx);
        let tail = s1 * 8u32 + s0 / (pi(w) * &v);
        Ok(PhiValue { value: BigComplex { re: re.total(), im: im.total() }.with_prec(p), tail_bound: Float::with_val(p, tail) })
    }
}

pub fn eval_phi(ctx: &FieldContext, tau: &HalfPlanePoint, nmax: u64) -> Result<PhiValue, Error> {
    PhiExpansion::new(ctx, nmax, Exec::default())?.eval(ctx, tau)
}

/// Λ(s) = π^{−s/2} Γ(s/2) ζ(s).
pub fn lambda_zeta(s: &Float) -> NumResult<Float> {
    let w = s.prec() + GUARD_BITS;
    let h = Float::with_val(w, s / 2u32);
    let z = riemann_zeta(&Float::with_val(w, s))?;
    Ok(Float::with_val(s.prec(), pi(w).pow(-Float::with_val(w, &h)) * gamma(&h)? * z))
}

/// Λ'/Λ(s) = −½ log π + ½ ψ(s/2) + ζ'/ζ(s).
pub fn lambda_zeta_logderiv(s: &Float) -> NumResult<Float> {
    let w = s.prec() + GUARD_BITS;
    let h = Float::with_val(w, s / 2u32);
    let zl = zeta_logderiv(&Float::with_val(w, s))?;
    Ok(Float::with_val(s.prec(), (digamma(&h)? - pi(w).ln()) / 2u32 + zl))
}

fn check_mellin_s(s: &Float) -> NumResult<()> {
    if *s == 1 {
        return Err(NumError::Pole("Λ(s, φ) has a pole at s = 1".into()));
    }
    if *s < 1 {
        return Err(NumError::Domain("Λ(s, φ) is only evaluated for s > 1".into()));
    }
    Ok(())
}

/// Λ(s, φ) = Λ_k(s) [log q + Λ'/Λ(s, χ) − Λ'/Λ(s)], Λ_k(s) = Λ(s) Λ(s, χ).
pub fn mellin_closed(ctx: &FieldContext, s: &Float) -> NumResult<Float> {
    check_mellin_s(s)?;
    let p = s.prec().max(ctx.prec);
    let w = p + GUARD_BITS;
    let s = Float::with_val(w, s);
    let lk = lambda_zeta(&s)? * ctx.lambda_chi(&s)?;
    let br = Float::with_val(w, ctx.q).ln() + ctx.lambda_logderiv(&s)? - lambda_zeta_logderiv(&s)?;
    Ok(Float::with_val(p, lk * br))
}

/// The same value grouped as Λ_k(s)[log q + L'/L(s,χ) − ζ'/ζ(s)] + Λ_k(s)·½[ψ((s+1)/2) − ψ(s/2)].
pub fn mellin_closed_split(ctx: &FieldContext, s: &Float) -> NumResult<(Float, Float)> {
    check_mellin_s(s)?;
    let p = s.prec().max(ctx.prec);
    let w = p + GUARD_BITS;
    let s = Float::with_val(w, s);
    let lk = lambda_zeta(&s)? * ctx.lambda_chi(&s)?;
    let arith = Float::with_val(w, ctx.q).ln() + ctx.l_logderiv(&s)? - zeta_logderiv(&s)?;
    let gam = (digamma(&(Float::with_val(w, &s + 1u32) / 2u32))? - digamma(&Float::with_val(w, &s / 2u32))?) / 2u32;
    Ok((Float::with_val(p, &lk * arith), Float::with_val(p, lk * gam)))
}

#[derive(Debug, Clone, Copy)]
pub struct MellinOptions {
    /// inert primes up to this bound enter the Dirichlet-series tail exactly
    pub sieve_limit: u64,
    pub exec: Exec,
}

impl Default for MellinOptions {
    fn default() -> Self {
        MellinOptions { sieve_limit: 1_000_000, exec: Exec::default() }
    }
}

#[derive(Debug, Clone)]
pub struct MellinQuadrature {
    pub value: Float,
    /// ∫₀^∞ of the n ≤ nmax holomorphic terms
    pub head_holomorphic: Float,
    /// ∫₀^∞ of the n ≤ nmax nonholomorphic terms
    pub head_nonholomorphic: Float,
    /// termwise Mellin transform of n > nmax
    pub tail_holomorphic: Float,
    pub tail_nonholomorphic: Float,
}

pub(crate) fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

/// D_a(s) = Σ a_n n^{−s} = 2ζ_k(s)[log q/(1 − q^{−s}) + Σ_{p inert} 2 log p · p^{−s}/(1 − p^{−2s})],
/// from Σ (ord_q t + 1)ρ(t) t^{−s} = ζ_k(s)/(1 − q^{−s}) and
/// Σ (ord_p t + 1)ρ(t/p) t^{−s} = 2p^{−s}ζ_k(s)/(1 − p^{−2s}). The prime sum runs to
/// `limit`, and the rest is X^{1−s}/(s−1) (inert primes have density ½).
pub fn dirichlet_a(ctx: &FieldContext, s: &Float, limit: u64) -> NumResult<Float> {
    let w = s.prec().max(ctx.prec) + GUARD_BITS;
    let s = Float::with_val(w, s);
    let zk = riemann_zeta(&s)? * ctx.dirichlet_l(&s)?;
    let lq = Float::with_val(w, ctx.q).ln();
    let qs = Float::with_val(w, ctx.q).pow(-Float::with_val(w, &s));
    let mut acc = Kahan::new(w);
    acc.add(&(lq / (1u32 - qs)));
    let ms = Float::with_val(w, -&s);
    for p in primes_up_to(limit) {
        if !ctx.is_inert(p) {
            continue;
        }
        let ps = Float::with_val(w, p).pow(&ms);
        let den = 1u32 - Float::with_val(w, ps.square_ref());
        acc.add(&(Float::with_val(w, p).ln() * ps * 2u32 / den));
    }
    let sm1 = Float::with_val(w, &s - 1u32);
    acc.add(&(Float::with_val(w, limit).pow(-Float::with_val(w, &sm1)) / &sm1));
    Ok(acc.total() * zk * 2u32)
}

/// Λ(s, φ) = ∫₀^∞ (φ(iv) − a₀(φ,v)) v^{s−1} dv.
///
/// The n ≤ nmax part of the expansion is integrated numerically over v,
/// split at 1, with v = 1/w on (0,1). The remaining terms are added by
/// their termwise transforms: Γ(s)(2πn)^{−s} a_n, summed through D_a(s), and
/// 2ρ(n)(2πn)^{−s}·∫₀^∞ β₁(2x)eˣx^{s−1}dx, summed through ζ_k(s), with that
/// last integral also done by quadrature.
pub fn mellin_quadrature(ctx: &FieldContext, s: &Float, nmax: u64, opts: MellinOptions) -> Result<MellinQuadrature, Error> {
    check_mellin_s(s)?;
    let p = s.prec().max(ctx.prec);
    let w = p + GUARD_BITS;
    let s = Float::with_val(w, s);
    let exp = PhiExpansion::new(ctx, nmax, opts.exec)?;
    let a: Vec<Float> = exp.positive.iter().map(|c| c.eval(w)).collect();
    let rho = &exp.rho;
    let sm1 = Float::with_val(w, &s - 1u32);
    let two_pi = pi(w) * 2u32;
    // terms with 2πnv beyond this are below 2^{−w} relative to the n = 1 term
    let cut = (w as f64) * std::f64::consts::LN_2 + 40.0;

    let hol = |v: &Float| -> Float {
        let x = (-Float::with_val(w, &two_pi * v)).exp();
        let mut pw = Float::with_val(w, 1);
        let mut acc = Float::new(w);
        let lim = (cut / (2.0 * std::f64::consts::PI * v.to_f64())).floor() as u64;
        for (i, an) in a.iter().enumerate().take(nmax.min(lim) as usize) {
            pw *= &x;
            if i > 0 && pw.is_zero() {
                break;
            }
            if !an.is_zero() {
                acc += Float::with_val(w, an * &pw);
            }
        }
        acc * Float::with_val(w, v.pow(&sm1))
    };
    let nonhol = |v: &Float| -> Float {
        let mut acc = Float::new(w);
        let lim = (cut / (2.0 * std::f64::consts::PI * v.to_f64())).floor() as u64;
        for n in 1..=nmax.min(lim) {
            let r = rho[n as usize - 1];
            if r == 0 {
                continue;
            }
            let y = Float::with_val(w, &two_pi * v) * n;
            let b = beta1(&Float::with_val(w, &y * 2u32)).expect("y > 0") * y.exp();
            acc += b * (2 * r);
        }
        acc * Float::with_val(w, v.pow(&sm1))
    };
    let quad = Quadrature::new(p).with_tolerance(Float::with_val(w, Float::i_exp(1, -48)));
    let one = Float::with_val(w, 1);
    let integrate = |f: &(dyn Fn(&Float) -> Float + Sync)| -> NumResult<Float> {
        let outer = quad.half_line(f, &one)?.value;
        let inv = |t: &Float| -> Float {
            let v = Float::with_val(w, t.recip_ref());
            // f includes v^{s−1}; dv = t^{−2} dt
            f(&v) / Float::with_val(w, t.square_ref())
        };
        let inner = quad.half_line(&inv, &one)?.value;
        Ok(Float::with_val(w, outer + inner))
    };
    let pieces = par::map(opts.exec, &[0u8, 1], |&k| if k == 0 { integrate(&hol) } else { integrate(&nonhol) });
    let mut it = pieces.into_iter();
    let head_h = it.next().expect("two pieces")?;
    let head_n = it.next().expect("two pieces")?;

    let ms = Float::with_val(w, -&s);
    let mut da_head = Kahan::new(w);
    let mut zk_head = Kahan::new(w);
    for n in 1..=nmax {
        let ns = Float::with_val(w, n).pow(&ms);
        da_head.add(&Float::with_val(w, &a[n as usize - 1] * &ns));
        zk_head.add(&(ns * rho[n as usize - 1]));
    }
    let da = dirichlet_a(ctx, &s, opts.sieve_limit)?;
    let zk = riemann_zeta(&s)? * ctx.dirichlet_l(&s)?;
    let j = mellin_beta1_identity_lhs(&s)?;
    let scale = Float::with_val(w, (&two_pi).pow(&ms));
    let tail_h = Float::with_val(w, &scale * gamma(&s)?) * (da - da_head.total());
    let tail_n = scale * j * 2u32 * (zk - zk_head.total());
    let value = Float::with_val(w, &head_h + &head_n) + &tail_h + &tail_n;
    Ok(MellinQuadrature {
        value: Float::with_val(p, value),
        head_holomorphic: Float::with_val(p, head_h),
        head_nonholomorphic: Float::with_val(p, head_n),
        tail_holomorphic: Float::with_val(p, tail_h),
        tail_nonholomorphic: Float::with_val(p, tail_n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{dec, rel_err};

    const P: u32 = 128;

    fn ctx(q: u64) -> FieldContext {
        FieldContext::new(q, P).unwrap()
    }

    fn ln(n: u64) -> Float {
        Float::with_val(P, n).ln()
    }

    #[test]
    fn positive_examples() {
        let k = ctx(7);
        assert_eq!(coeff_positive(&k, 1).unwrap(), ln(7) * 2u32);
        assert_eq!(coeff_positive(&k, 3).unwrap(), ln(3) * 4u32);
        assert_eq!(coeff_positive(&k, 7).unwrap(), ln(7) * 4u32);
        let e = coeff_positive_exact(&k, 3).unwrap();
        assert_eq!(e.terms().collect::<Vec<_>>(), vec![(3, 4)]);
        assert!(coeff_positive(&k, 0).is_err());
    }

    #[test]
    fn negative_and_constant() {
        let k = ctx(7);
        let v = Float::with_val(P, 1);
        let want = beta1(&(pi(P) * 8u32)).unwrap() * 4u32;
        assert!(rel_err(&coeff_negative(&k, 2, &v).unwrap(), &want) < 1e-36);
        assert!(coeff_negative(&k, 3, &v).unwrap().is_zero());
        let a = coeff_negative(&k, 1, &v).unwrap();
        let b = coeff_negative(&k, 1, &dec(P, "1.5")).unwrap();
        assert!(b < a && b > 0);
        let c = coeff_constant(&k, &v).unwrap();
        let want = -(ln(7) + Float::with_val(P, &k.lambda_logderiv1 * 2u32));
        assert!(rel_err(&c, &want) < 1e-36);
        // the sign change sits at v* = exp(−log q − 2Λ'/Λ)
        let vstar = Float::with_val(P, &want).exp();
        let lo = coeff_constant(&k, &Float::with_val(P, &vstar * dec(P, "0.99"))).unwrap();
        let hi = coeff_constant(&k, &Float::with_val(P, &vstar * dec(P, "1.01"))).unwrap();
        assert!(lo > 0 && hi < 0);
    }

    #[test]
    fn constant_matches_eisenstein() {
        let k = ctx(11);
        let tau = HalfPlanePoint::new(dec(P, "0.2"), dec(P, "0.8")).unwrap();
        let d = crate::eisenstein::constant_term_deriv0(&k, &tau);
        let c = coeff_constant(&k, &tau.v).unwrap();
        let want = -d / tau.v.clone().sqrt();
        assert!(rel_err(&c, &want) < 1e-35);
    }

    #[test]
    fn support_criterion() {
        for q in [7, 11, 19] {
            let k = ctx(q);
            for n in 1..=2000i64 {
                let crit = k.rho0(n) > 0 || factorize(n as u64).iter().any(|&(p, _)| k.is_inert(p) && k.rho0(n / p as i64) > 0);
                let a = coeff_positive_exact(&k, n).unwrap();
                assert_eq!(!a.is_zero(), crit, "q = {q}, n = {n}");
                assert!(a.terms().all(|(_, c)| c > 0));
            }
        }
    }

    #[test]
    fn eval_real_on_axis_and_self_consistent() {
        let k = ctx(7);
        let tau = HalfPlanePoint::new(Float::new(P), Float::with_val(P, 1)).unwrap();
        let a = eval_phi(&k, &tau, 10).unwrap();
        let b = eval_phi(&k, &tau, 20).unwrap();
        assert!(a.value.im.is_zero());
        assert!((&a.value - &b.value).abs() <= a.tail_bound);
        assert!(b.tail_bound < 1e-40);
    }

    #[test]
    fn eval_matches_central_derivatives() {
        let k = ctx(11);
        let tau = HalfPlanePoint::new(dec(P, "0.37"), dec(P, "0.6")).unwrap();
        let n = 40;
        let phi = eval_phi(&k, &tau, n).unwrap();
        let sv = Float::with_val(P, tau.v.sqrt_ref());
        let mut sum = BigComplex::from_real(-crate::eisenstein::constant_term_deriv0(&k, &tau));
        for t in (-(n as i64)..=n as i64).filter(|&t| t != 0) {
            sum = sum - crate::eisenstein::central_deriv_coefficient(&k, &tau, t).unwrap().value;
        }
        let sum = sum.scale(&Float::with_val(P, sv.recip_ref()));
        assert!((&phi.value - &sum).abs() < 1e-30);
    }

    #[test]
    fn dirichlet_identities() {
        // (ord_q t + 1)ρ(t) and (ord_p t + 1)ρ(t/p) summed to N = 10^5 at s = 3
        let k = ctx(7);
        let s = Float::with_val(P, 3);
        let zk = riemann_zeta(&s).unwrap() * k.dirichlet_l(&s).unwrap();
        let n = 100_000i64;
        let mut sq = Kahan::new(P);
        let mut s3 = Kahan::new(P);
        for t in 1..=n {
            let ts = Float::with_val(P, t).pow(-3i32);
            let r = k.rho0(t);
            if r > 0 {
                sq.add(&(Float::with_val(P, &ts) * ((ord(7, t) as u64 + 1) * r)));
            }
            if t % 3 == 0 {
                let r = k.rho0(t / 3);
                if r > 0 {
                    s3.add(&(ts * ((ord(3, t) as u64 + 1) * r)));
                }
            }
        }
        // tails are below Σ_{t>N} (log t)² t^{−3} < 1e-8
        let wq = Float::with_val(P, &zk) / (1u32 - Float::with_val(P, 7).pow(-3i32));
        assert!((sq.total() - wq).abs() < 1e-8);
        let p3 = Float::with_val(P, 3).pow(-3i32);
        let w3 = zk * &p3 * 2u32 / (1u32 - Float::with_val(P, p3.square_ref()));
        assert!((s3.total() - w3).abs() < 1e-8);
    }

    #[test]
    fn closed_groupings_agree() {
        for q in [7, 11] {
            let k = ctx(q);
            for s in ["1.5", "2", "3"] {
                let s = dec(P, s);
                let a = mellin_closed(&k, &s).unwrap();
                let (x, y) = mellin_closed_split(&k, &s).unwrap();
                assert!(rel_err(&a, &(x + y)) < 1e-35);
            }
        }
        assert!(matches!(mellin_closed(&ctx(7), &Float::with_val(P, 1)), Err(NumError::Pole(_))));
    }

    #[test]
    fn closed_double_pole_growth() {
        let k = ctx(7);
        for e in ["1e-3", "3e-3", "1e-2"] {
            let eps = dec(P, e);
            let s = Float::with_val(P, &eps + 1u32);
            let m = mellin_closed(&k, &s).unwrap();
            let r = (m * Float::with_val(P, eps.square_ref())).to_f64();
            // (s−1)²Λ(s,φ) → Λ(1,χ) since Λ(s) ~ 1/(s−1) and −ζ'/ζ ~ 1/(s−1)
            let lim = k.lambda_chi(&Float::with_val(P, 1)).unwrap().to_f64();
            assert!(r / lim > 0.5 && r / lim < 2.0, "ε = {e}: ratio {}", r / lim);
        }
    }

    #[test]
    fn quadrature_matches_closed() {
        let k = FieldContext::new(7, 96).unwrap();
        let s = dec(96, "2.5");
        let opts = MellinOptions { sieve_limit: 100_000, ..Default::default() };
        let m = mellin_quadrature(&k, &s, 60, opts).unwrap();
        let c = mellin_closed(&k, &s).unwrap();
        assert!(rel_err(&m.value, &c) < 1e-6, "{}", rel_err(&m.value, &c).to_f64());
        // each half against its grouping of the closed form
        let (arith, gam) = mellin_closed_split(&k, &s).unwrap();
        let nh = Float::with_val(96, &m.head_nonholomorphic + &m.tail_nonholomorphic);
        assert!(rel_err(&nh, &gam) < 1e-12);
        let h = Float::with_val(96, &m.head_holomorphic + &m.tail_holomorphic);
        assert!(rel_err(&h, &arith) < 1e-6);
    }
}
