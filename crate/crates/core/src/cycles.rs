//! Degrees of the special 0-cycles Z(t): Gross multiplicities, two
//! independent routes to deg Z(t), and the Arakelov divisors for t ≠ 0.

use std::collections::BTreeMap;

use rug::Float;

use crate::numerics::{beta1, pi, GUARD_BITS};
use crate::phi::{coeff_positive_exact, LogCombination};
use crate::quadfield::{factorize, ord, FieldContext, ReducedForm, UNIT_COUNT};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrossMultiplicity {
    pub p: u64,
    /// residue degree [κ(℘) : F_p]
    pub f: u32,
    /// ord_p of the discriminant
    pub d: u32,
    pub nu: u32,
}

/// ν_p(t) = (ord_p t + d_p − 1)/f_p + 1 at a non-split p.
pub fn gross_multiplicity(ctx: &FieldContext, p: u64, t: i64) -> Result<GrossMultiplicity, Error> {
    if t < 1 {
        return Err(Error::Invalid(format!("t = {t} must be positive")));
    }
    let e = ord(p, t);
    if p == ctx.q {
        return Ok(GrossMultiplicity { p, f: 1, d: 1, nu: e + 1 });
    }
    if !ctx.is_inert(p) {
        return Err(Error::Invalid(format!("{p} splits in Q(√−{})", ctx.q)));
    }
    if e % 2 == 0 {
        return Err(Error::Invalid(format!("ord_{p}({t}) = {e} is even: Z({t}) has no points over {p}")));
    }
    Ok(GrossMultiplicity { p, f: 2, d: 0, nu: (e + 1) / 2 })
}

/// Non-split primes whose fibre can carry Z(t), with the norm t/κ_p the ideals must have.
fn fibres(ctx: &FieldContext, t: i64) -> Vec<(u64, i64)> {
    let mut out = vec![(ctx.q, t)];
    for (p, e) in factorize(t as u64) {
        if ctx.is_inert(p) && e % 2 == 1 {
            out.push((p, t / p as i64));
        }
    }
    out
}

/// 2 log q (ord_q t + 1) ρ(t) + 2 Σ_{p inert} log p (ord_p t + 1) ρ(t/p).
pub fn deg_z_closed(ctx: &FieldContext, t: i64) -> Result<LogCombination, Error> {
    coeff_positive_exact(ctx, t)
}

/// Σ_p f_p log p ν_p(t) Σ_i |{x ∈ V(E_i, ι_i) : Q(x) = t}|, where the i-th
/// lattice count is |O_k^×| times the number of ideals of norm t/κ_p in the
/// i-th class (κ_p = p inert, 1 at q), counted by representations of the form.
pub fn deg_z_lattice(ctx: &FieldContext, t: i64) -> Result<LogCombination, Error> {
    if t < 1 {
        return Err(Error::Invalid(format!("t = {t} must be positive")));
    }
    let mut out = LogCombination::new();
    for (p, m) in fibres(ctx, t) {
        let count: u64 = ctx.forms.iter().map(|c| ctx.class_rep_count(c, m)).sum::<u64>() * UNIT_COUNT;
        if count == 0 {
            continue;
        }
        let g = gross_multiplicity(ctx, p, t)?;
        out.add(p, (g.f * g.nu) as i64 * count as i64);
    }
    Ok(out)
}

/// Finite part: (p, class) ↦ n_𝔭; archimedean part: class ↦ r_λ.
#[derive(Debug, Clone, Default)]
pub struct ArakelovDivisor {
    pub finite_part: BTreeMap<(u64, ReducedForm), u64>,
    pub archimedean_part: BTreeMap<ReducedForm, Float>,
    /// for t < 0: 2β₁(4π|t|v), and the per-class ideal counts it multiplies
    pub arch_scale: Option<Float>,
    pub arch_counts: BTreeMap<ReducedForm, u64>,
}

impl ArakelovDivisor {
    /// Σ log p · n_𝔭 (f_p is already inside n_𝔭), exactly.
    pub fn finite_degree(&self) -> LogCombination {
        let mut out = LogCombination::new();
        for (&(p, _), &n) in &self.finite_part {
            out.add(p, n as i64);
        }
        out
    }

    /// Σ r_λ, evaluated as 2β₁(4π|t|v) · Σ counts.
    pub fn archimedean_degree(&self, prec: u32) -> Float {
        match &self.arch_scale {
            Some(b) => Float::with_val(prec, b * self.arch_counts.values().sum::<u64>()),
            None => Float::new(prec),
        }
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.finite_part.keys().map(|k| k.0).collect();
        ps.dedup();
        ps
    }
}

/// n_𝔭(t) = f_p ν_p(t) |O_k^×| · |{𝔠 : [𝔠] = C_𝔭, N𝔠 = t/κ_p}|, one 𝔭 per class
/// over each non-split p. The f_p and unit factors are folded in so that
/// Σ log p · n_𝔭 is deg Z(t).
pub fn arakelov_finite(ctx: &FieldContext, t: i64) -> Result<ArakelovDivisor, Error> {
    if t < 1 {
        return Err(Error::Invalid(format!("t = {t} must be positive")));
    }
    let mut d = ArakelovDivisor::default();
    for (p, m) in fibres(ctx, t) {
        let g = gross_multiplicity(ctx, p, t)?;
        for c in &ctx.forms {
            let n = ctx.class_rep_count(c, m);
            if n > 0 {
                d.finite_part.insert((p, *c), (g.f * g.nu) as u64 * UNIT_COUNT * n);
            }
        }
    }
    Ok(d)
}

/// r_λ = 2β₁(4π|t|v) · |{𝔠 : [𝔠] = C_λ, N𝔠 = −t}|.
pub fn arakelov_archimedean(ctx: &FieldContext, t: i64, v: &Float) -> Result<ArakelovDivisor, Error> {
    if t > -1 {
        return Err(Error::Invalid(format!("t = {t} must be negative")));
    }
    if *v <= 0 {
        return Err(Error::Invalid("v must be positive".into()));
    }
    let p = v.prec();
    let w = p + GUARD_BITS;
    let mut d = ArakelovDivisor::default();
    let z = pi(w) * Float::with_val(w, v * t.unsigned_abs()) * 4u32;
    let scale = Float::with_val(p, beta1(&z)? * 2u32);
    for c in &ctx.forms {
        let n = ctx.class_rep_count(c, -t);
        if n > 0 {
            d.arch_counts.insert(*c, n);
            d.archimedean_part.insert(*c, Float::with_val(p, &scale * n));
        }
    }
    d.arch_scale = Some(scale);
    Ok(d)
}
