//! j at CM points, the singular-moduli product J(−q, −d) and the
//! singular-moduli identity against the coefficients a_m(φ).

use rug::{Float, Integer};

use crate::numerics::{pi, BigComplex, GUARD_BITS};
use crate::par::{self, Exec};
use crate::phi::{coeff_positive_exact, LogCombination};
use crate::quadfield::{factorize, gcd, legendre, reduced_forms, validate_q, FieldContext, ReducedForm};
use crate::Error;

/// Series terms allowed before the q-expansion is declared too slow.
const MAX_TERMS: u64 = 200_000;

#[derive(Debug, Clone)]
pub struct CmPoint {
    pub form: ReducedForm,
    pub tau: BigComplex,
}

impl CmPoint {
    pub fn new(form: ReducedForm, prec: u32) -> Self {
        CmPoint { form, tau: form.cm_point(prec) }
    }
}

/// j(τ) = E₄(τ)³/Δ(τ), Δ = x Π(1 − xⁿ)²⁴, E₄ = 1 + 240 Σ σ₃(n) xⁿ, x = e(τ).
/// Both series stop once |x|ⁿ < 2^{−bits−32}.
pub fn j_invariant(tau: &BigComplex, bits: u32) -> Result<BigComplex, Error> {
    if tau.im <= 0 {
        return Err(Error::Invalid("Im τ must be positive".into()));
    }
    let w = bits + GUARD_BITS + 32;
    let tau = tau.with_prec(w);
    let x = (BigComplex::i(w) * tau.scale(&(pi(w) * 2u32))).exp();
    // |x|ⁿ = e^{−2πn Im τ}
    let decay = 2.0 * std::f64::consts::PI * tau.im.to_f64();
    let need = ((bits as f64 + 32.0) * std::f64::consts::LN_2 / decay).ceil() as u64 + 1;
    if need > MAX_TERMS {
        return Err(Error::Num(crate::NumError::Precision(format!("q-expansion needs {need} terms at Im τ = {:e}", tau.im.to_f64()))));
    }
    let mut prod = BigComplex::one(w);
    let mut e4 = BigComplex::zero(w);
    let mut xn = BigComplex::one(w);
    for n in 1..=need {
        xn = &xn * &x;
        let one_minus = BigComplex::one(w) - xn.clone();
        prod = &prod * &one_minus;
        let s3: u64 = (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum();
        e4 = e4 + xn.scale(&Float::with_val(w, s3));
    }
    let e4 = BigComplex::one(w) + e4.scale(&Float::with_val(w, 240));
    let mut p24 = prod.clone();
    for _ in 0..3 {
        p24 = &p24 * &p24;
    }
    // prod⁸ → prod²⁴
    let p24 = &(&p24 * &p24) * &p24;
    let delta = &x * &p24;
    let e43 = &(&e4 * &e4) * &e4;
    Ok(e43.div(&delta).with_prec(bits))
}

#[derive(Debug, Clone)]
pub struct SingularModuliProduct {
    pub q: u64,
    pub d: u64,
    pub j: BigComplex,
    pub nearest_integer: Integer,
    pub integrality_gap: Float,
    pub pairs: usize,
}

fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// −d is a fundamental discriminant.
pub fn is_fundamental(d: u64) -> bool {
    match d % 4 {
        3 => is_squarefree(d),
        0 => {
            let m = d / 4;
            (m % 4 == 1 || m % 4 == 2) && is_squarefree(m)
        }
        _ => false,
    }
}

fn validate_pair(q: u64, d: u64) -> Result<(), Error> {
    validate_q(q)?;
    if d <= 4 || !is_fundamental(d) {
        return Err(Error::Invalid(format!("−{d} must be a fundamental discriminant with d > 4")));
    }
    if gcd(d as i64, q as i64) != 1 {
        return Err(Error::Invalid(format!("d = {d} and q = {q} must be coprime")));
    }
    Ok(())
}

/// J(−q, −d) = Π_{[τ₁],[τ₂]} (j(τ₁) − j(τ₂)) over all class pairs.
pub fn singular_moduli_product(q: u64, d: u64, bits: u32, exec: Exec) -> Result<SingularModuliProduct, Error> {
    validate_pair(q, d)?;
    let w = bits + GUARD_BITS;
    let f1 = reduced_forms(-(q as i64))?;
    let f2 = reduced_forms(-(d as i64))?;
    let all: Vec<ReducedForm> = f1.iter().chain(f2.iter()).copied().collect();
    let js = par::map(exec, &all, |f| j_invariant(&f.cm_point(w), w));
    let js: Vec<BigComplex> = js.into_iter().collect::<Result<_, _>>()?;
    let (j1, j2) = js.split_at(f1.len());
    let mut acc = BigComplex::one(w);
    for a in j1 {
        for b in j2 {
            acc = &acc * &(a - b);
        }
    }
    let (nearest, _) = acc.re.to_integer_round(rug::float::Round::Nearest).ok_or_else(|| Error::Invalid("J is not finite".into()))?;
    let gap = Float::with_val(w, &acc.re - &nearest).abs() + Float::with_val(w, acc.im.abs_ref());
    if gap > 1e-5 {
        return Err(Error::Num(crate::NumError::Precision(format!("J is {:e} away from an integer at {bits} bits", gap.to_f64()))));
    }
    Ok(SingularModuliProduct { q, d, j: acc.with_prec(bits), nearest_integer: nearest, integrality_gap: Float::with_val(bits, gap), pairs: f1.len() * f2.len() })
}

#[derive(Debug, Clone)]
pub struct GrossZagierCheck {
    /// 2 log |J|
    pub lhs: Float,
    /// Σ_{n ∈ Z, n² < dq, n² ≡ dq (4)} a_{(dq−n²)/4}
    pub sum_all_n: LogCombination,
    /// the same with n ≥ 0
    pub sum_nonneg_n: LogCombination,
    /// ¼ Σ_{n ∈ Z}: the normalization that matches
    pub rhs: Float,
    pub gap: Float,
    pub gap_all_n_literal: Float,
    pub gap_nonneg_n_literal: Float,
    /// Σ_x Σ_{nn' = (dq−x²)/4} ε(n') log n, which equals 2 log|J| exactly
    pub genus_exponent: LogCombination,
    /// |2 log|J| − genus_exponent|
    pub genus_gap: Float,
    pub product: SingularModuliProduct,
}

/// 2 log|J(−q,−d)| against Σ_n a_{(dq−n²)/4}(φ).
///
/// With a_m normalized as in the coefficient formulas here, 8 log|J| equals
/// the sum over all n ∈ Z, so `rhs` is a quarter of it. Both literal readings
/// (n ∈ Z, n ≥ 0) are reported alongside.
pub fn gross_zagier_check(ctx: &FieldContext, d: u64, bits: u32, exec: Exec) -> Result<GrossZagierCheck, Error> {
    let q = ctx.q;
    let prod = singular_moduli_product(q, d, bits, exec)?;
    let w = bits + GUARD_BITS;
    let dq = (d * q) as i64;
    let mut all = LogCombination::new();
    let mut nonneg = LogCombination::new();
    let mut n = 0i64;
    while n * n < dq {
        if (dq - n * n) % 4 == 0 {
            let m = (dq - n * n) / 4;
            let a = coeff_positive_exact(ctx, m)?;
            for (p, c) in a.terms() {
                nonneg.add(p, c);
                all.add(p, if n == 0 { c } else { 2 * c });
            }
        }
        n += 1;
    }
    let lhs = Float::with_val(w, prod.j.abs().ln()) * 2u32;
    let all_v = all.eval(w);
    let nonneg_v = nonneg.eval(w);
    let rhs = Float::with_val(w, &all_v / 4u32);
    let gap = Float::with_val(w, &lhs - &rhs).abs();
    let genus = genus_exponent(q, d)?;
    let genus_gap = Float::with_val(w, &lhs - genus.eval(w)).abs();
    let g_all = Float::with_val(w, &lhs - &all_v).abs();
    let g_non = Float::with_val(w, &lhs - &nonneg_v).abs();
    Ok(GrossZagierCheck {
        lhs: Float::with_val(bits, lhs),
        sum_all_n: all,
        sum_nonneg_n: nonneg,
        rhs: Float::with_val(bits, rhs),
        gap: Float::with_val(bits, gap),
        gap_all_n_literal: Float::with_val(bits, g_all),
        gap_nonneg_n_literal: Float::with_val(bits, g_non),
        genus_exponent: genus,
        genus_gap: Float::with_val(bits, genus_gap),
        product: prod,
    })
}

/// The genus character on primes: χ_{−q}(l) for l ≠ q, and (−d/q) at l = q.
fn genus_char(q: u64, d: u64, l: u64) -> i32 {
    if l == q {
        legendre(-(d as i64), q)
    } else {
        legendre(l as i64, q)
    }
}

/// Σ_{x² < dq, x ≡ dq (2)} Σ_{nn' = m} ε(n') log n, m = (dq − x²)/4: the
/// exponent form of the singular-moduli factorization, log J² = this sum.
pub fn genus_exponent(q: u64, d: u64) -> Result<LogCombination, Error> {
    validate_pair(q, d)?;
    let dq = (d * q) as i64;
    let mut out = LogCombination::new();
    let mut x = -(crate::quadfield::isqrt(dq).unwrap_or(0));
    while x * x < dq {
        if (dq - x * x) % 4 == 0 {
            let m = ((dq - x * x) / 4) as u64;
            for n in (1..=m).filter(|n| m % n == 0) {
                let e: i32 = factorize(m / n).iter().map(|&(l, k)| genus_char(q, d, l).pow(k)).product();
                if e != 0 {
                    for (l, k) in factorize(n) {
                        out.add(l, e as i64 * k as i64);
                    }
                }
            }
        }
        x += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::dec;

    const B: u32 = 256;

    fn j_at(a: i64, b: i64, c: i64) -> BigComplex {
        j_invariant(&ReducedForm { a, b, c }.cm_point(B + 64), B).unwrap()
    }

    #[test]
    fn classical_values() {
        let j = j_at(1, 0, 1);
        assert!((j.re - 1728u32).abs() < 1e-60 && j.im.abs() < 1e-60);
        let j = j_at(1, 1, 1);
        assert!(j.abs() < 1e-60);
        let j = j_at(1, 1, 2);
        assert!((j.re + 3375u32).abs() < 1e-30 && j.im.abs() < 1e-30);
        let j = j_at(1, 0, 2);
        assert!((j.re - 8000u32).abs() < 1e-30);
    }

    #[test]
    fn modular_invariance() {
        let tau = BigComplex::new(dec(B, "0.1234"), dec(B, "1.05"));
        let j = j_invariant(&tau, B).unwrap();
        let j1 = j_invariant(&(&tau + &BigComplex::one(B)), B).unwrap();
        let ji = j_invariant(&(-tau.recip()), B).unwrap();
        let tol = Float::with_val(B, Float::i_exp(1, -(B as i32) + 16)) * j.abs();
        assert!((&j - &j1).abs() <= tol);
        assert!((&j - &ji).abs() <= tol);
    }

    #[test]
    fn fundamental_discriminants() {
        assert!(is_fundamental(8) && is_fundamental(11) && is_fundamental(20) && is_fundamental(15));
        assert!(!is_fundamental(12) && !is_fundamental(16) && !is_fundamental(27) && !is_fundamental(9));
    }

    #[test]
    fn single_pair_products() {
        let p = singular_moduli_product(7, 8, 512, Exec::default()).unwrap();
        assert_eq!(p.pairs, 1);
        assert_eq!(p.nearest_integer, -11375);
        assert!(p.integrality_gap < 1e-20);
        let p = singular_moduli_product(7, 11, 512, Exec::default()).unwrap();
        assert_eq!(p.nearest_integer, 29393);
        assert!(singular_moduli_product(7, 7, 128, Exec::default()).is_err());
        assert!(singular_moduli_product(7, 4, 128, Exec::default()).is_err());
        assert!(singular_moduli_product(11, 12, 128, Exec::default()).is_err());
    }

    #[test]
    fn prime_factors_are_nonsplit() {
        // observational: every prime dividing |J| is inert or ramified in k or in Q(√−d)
        for (q, d) in [(7u64, 8u64), (7, 11)] {
            let p = singular_moduli_product(q, d, 512, Exec::default()).unwrap();
            let n = p.nearest_integer.clone().abs().to_u64().unwrap();
            let kq = FieldContext::new(q, 64).unwrap();
            for (l, _) in factorize(n) {
                let split_q = l != q && kq.chi(l as i64) == 1;
                let kd = crate::quadfield::legendre(-(d as i64), l);
                let split_d = l != 2 && (d as i64) % l as i64 != 0 && kd == 1;
                assert!(!(split_q && split_d), "{l} splits in both fields");
            }
        }
    }

    #[test]
    fn identity_7_8() {
        let k = FieldContext::new(7, 512).unwrap();
        let g = gross_zagier_check(&k, 8, 512, Exec::default()).unwrap();
        assert!(g.gap < 1e-100);
        // Σ_{n∈Z} = 8 log 11375 = 8 log 7 + 24 log 5 + 8 log 13
        assert_eq!(g.sum_all_n.terms().collect::<Vec<_>>(), vec![(5, 24), (7, 8), (13, 8)]);
        assert!(g.gap_all_n_literal > 1 && g.gap_nonneg_n_literal > 1);
        assert!(g.genus_gap < 1e-100);
    }

    #[test]
    fn coefficient_sum_misses_log_2_when_2_is_inert_and_4_divides_d() {
        // 4·genus − Σ_{n∈Z} a_m is exactly 4 log 2, all of it from n = 0, m = dq/4
        for q in [11u64, 19] {
            let k = FieldContext::new(q, 256).unwrap();
            let g = gross_zagier_check(&k, 8, 256, Exec::default()).unwrap();
            let mut diff = LogCombination::new();
            for (p, c) in g.genus_exponent.terms() {
                diff.add(p, 4 * c);
            }
            for (p, c) in g.sum_all_n.terms() {
                diff.add(p, -c);
            }
            assert_eq!(diff.terms().collect::<Vec<_>>(), vec![(2, 4)]);
            assert_eq!(coeff_positive_exact(&k, 2 * q as i64).unwrap().terms().collect::<Vec<_>>(), vec![(2, 4)]);
        }
    }

    #[test]
    fn genus_exponent_matches_j() {
        for (q, d) in [(7u64, 8u64), (7, 11), (11, 8), (19, 8), (23, 7), (11, 15)] {
            let k = FieldContext::new(q, 256).unwrap();
            let g = gross_zagier_check(&k, d, 256, Exec::default()).unwrap();
            assert!(g.genus_gap < 1e-60, "q = {q}, d = {d}: {:e}", g.genus_gap.to_f64());
        }
    }
}
