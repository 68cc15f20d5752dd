//! Hurwitz zeta ζ(s, a) and ∂ζ/∂s by Euler-Maclaurin summation.
//!
//! With X = N + a,
//!   ζ(s,a) = Σ_{n<N} (n+a)^{-s} + X^{1-s}/(s-1) + X^{-s}/2
//!            + Σ_{k≥1} B_{2k}/(2k)! · (s)_{2k-1} · X^{-s-2k+1} + R.
//! N is taken ≥ 0.35·prec + |s| so that the correction terms decay at least
//! like ((|s|+2k)/(2πX))^{2k}; the series is cut once a term falls below
//! 2^{-prec-guard} of the running total, which bounds |R| by the next term.

use rug::ops::Pow;
use rug::Float;

use super::bernoulli::b2k_over_fact;
use super::{NumError, NumResult, GUARD_BITS};

pub fn hurwitz_zeta(s: &Float, a: &Float) -> NumResult<Float> {
    hurwitz_zeta_with_deriv(s, a).map(|(z, _)| z)
}

/// (ζ(s,a), ∂ζ/∂s(s,a)), valid for any real s ≠ 1 and a > 0.
pub fn hurwitz_zeta_with_deriv(s: &Float, a: &Float) -> NumResult<(Float, Float)> {
    if *s == 1 {
        return Err(NumError::Pole("Hurwitz zeta at s = 1".into()));
    }
    euler_maclaurin(s, a, false)
}

/// ζ(s,a) − 1/(s−1) and its s-derivative; entire in s, so s = 1 is allowed.
/// Character sums over a use this form since the poles cancel.
pub fn hurwitz_zeta_regular(s: &Float, a: &Float) -> NumResult<(Float, Float)> {
    euler_maclaurin(s, a, true)
}

/// (X^{1−s} − 1)/(s − 1) and its s-derivative.
fn regular_tail(s: &Float, lx: &Float, w: u32) -> (Float, Float) {
    let eps = Float::with_val(w, s - 1u32);
    let el = Float::with_val(w, &eps * lx);
    if el.to_f64().abs() < 0.5 {
        // Σ_{k≥1} (−L)^k ε^{k−1}/k! and its ε-derivative
        let ml = Float::with_val(w, -lx);
        let tiny = Float::with_val(w, Float::i_exp(1, -(w as i32)));
        let mut f = Float::new(w);
        let mut df = Float::new(w);
        let mut c = Float::with_val(w, &ml); // (−L)^k/k!
        let mut epk = Float::with_val(w, 1); // ε^{k−1}
        let mut epk1 = Float::new(w); // (k−1) ε^{k−2}
        for k in 1u32..10_000 {
            let t = Float::with_val(w, &c * &epk);
            f += &t;
            df += Float::with_val(w, &c * &epk1);
            if k > 2 && Float::with_val(w, t.abs_ref()) <= Float::with_val(w, f.abs_ref()) * &tiny {
                break;
            }
            epk1 = Float::with_val(w, &epk * k);
            epk *= &eps;
            c *= &ml;
            c /= k + 1;
        }
        (f, df)
    } else {
        let e = Float::with_val(w, -&el).exp();
        let em1 = Float::with_val(w, -&el).exp_m1();
        let f = Float::with_val(w, &em1 / &eps);
        let df = (-(Float::with_val(w, lx * &e) * &eps) - em1) / Float::with_val(w, eps.square_ref());
        (f, df)
    }
}

fn euler_maclaurin(s: &Float, a: &Float, regular: bool) -> NumResult<(Float, Float)> {
    if *a <= 0 {
        return Err(NumError::Domain("Hurwitz zeta needs a > 0".into()));
    }
    let p = s.prec().max(a.prec());
    let w = p + GUARD_BITS;
    let s = Float::with_val(w, s);
    let a = Float::with_val(w, a);
    let n_terms = (0.35 * p as f64 + s.to_f64().abs()).ceil() as u32 + 8;

    let neg_s = Float::with_val(w, -&s);
    let mut z = Float::new(w);
    let mut dz = Float::new(w);
    for n in (0..n_terms).rev() {
        let x = Float::with_val(w, &a + n);
        let t = Float::with_val(w, (&x).pow(&neg_s));
        dz -= Float::with_val(w, x.ln_ref()) * &t;
        z += t;
    }

    let x = Float::with_val(w, &a + n_terms);
    let lx = Float::with_val(w, x.ln_ref());
    let xs = Float::with_val(w, (&x).pow(&neg_s)); // X^{-s}
    let sm1 = Float::with_val(w, &s - 1u32);
    if regular {
        let (f, df) = regular_tail(&s, &lx, w);
        z += f;
        dz += df;
    } else {
        let tail = Float::with_val(w, &xs * &x) / &sm1; // X^{1-s}/(s-1)
        z += &tail;
        dz -= Float::with_val(w, &tail * &lx) + Float::with_val(w, &tail / &sm1);
    }
    let half = Float::with_val(w, &xs / 2u32);
    dz -= Float::with_val(w, &half * &lx);
    z += half;

    // T_k = c_k P_k X^{-s-2k+1}, P_k = Π_{j=0}^{2k-2} (s+j); P and P' carried together
    let mut poly = s.clone();
    let mut dpoly = Float::with_val(w, 1);
    let mut xp = Float::with_val(w, &xs / &x); // X^{-s-1}
    let x2 = Float::with_val(w, x.square_ref());
    let eps = Float::with_val(w, Float::i_exp(1, -(w as i32)));
    let mut last = None;
    for k in 1u32..=4 * w {
        let c = b2k_over_fact(k, w);
        let t = Float::with_val(w, &c * &poly) * &xp;
        let dt = Float::with_val(w, &c * &dpoly) * &xp - Float::with_val(w, &t * &lx);
        let mag = Float::with_val(w, t.abs_ref()).max(&Float::with_val(w, dt.abs_ref()));
        z += &t;
        dz += &dt;
        let scale = Float::with_val(w, z.abs_ref()).max(&Float::with_val(w, dz.abs_ref()));
        if mag <= Float::with_val(w, &scale * &eps) {
            return Ok((Float::with_val(p, z), Float::with_val(p, dz)));
        }
        if let Some(prev) = last.as_ref() {
            if mag > *prev && k > 4 {
                return Err(NumError::Convergence("Euler-Maclaurin terms started growing".into()));
            }
        }
        last = Some(mag);
        for j in [2 * k - 1, 2 * k] {
            let f = Float::with_val(w, &s + j);
            dpoly = Float::with_val(w, &dpoly * &f) + &poly;
            poly *= f;
        }
        xp /= &x2;
    }
    Err(NumError::Convergence("Euler-Maclaurin did not converge".into()))
}
