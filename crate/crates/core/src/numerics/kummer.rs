//! Tricomi U(a, b, z) for real a, b and z > 0.
//!
//! Non-integer b: the connection formula through two Kummer M series.
//! Integer b ≥ 1: the logarithmic series (limit of the connection formula).
//! b ≤ 0 is mapped to 2 − b by U(a,b,z) = z^{1-b} U(a-b+1, 2-b, z).
//! Both series cancel down from size e^z to size z^{-a}, so the working
//! precision is raised by about 1.5·z·log₂e bits.

use rug::ops::Pow;
use rug::Float;

use super::{NumError, NumResult, GUARD_BITS};

fn rgamma(x: &Float) -> Float {
    if x.is_integer() && *x <= 0 {
        Float::new(x.prec())
    } else {
        Float::with_val(x.prec(), x.gamma_ref()).recip()
    }
}

/// Σ_k (a)_k/(b)_k z^k/k!, stopped when the term drops below eps·(largest partial).
fn kummer_m(a: &Float, b: &Float, z: &Float, w: u32) -> NumResult<Float> {
    let eps = Float::with_val(w, Float::i_exp(1, -(w as i32)));
    let mut term = Float::with_val(w, 1);
    let mut sum = Float::with_val(w, 1);
    let mut big = Float::with_val(w, 1);
    for k in 0u32..200_000 {
        let num = Float::with_val(w, a + k);
        if num.is_zero() {
            return Ok(sum);
        }
        term *= num * z;
        term /= Float::with_val(w, b + k) * (k + 1);
        sum += &term;
        let at = Float::with_val(w, term.abs_ref());
        let asum = Float::with_val(w, sum.abs_ref());
        if asum > big {
            big = asum;
        }
        if Float::with_val(w, z - (k + 1)) < 0 && at <= Float::with_val(w, &big * &eps) {
            return Ok(sum);
        }
    }
    Err(NumError::Convergence("Kummer M series".into()))
}

pub fn kummer_u(a: &Float, b: &Float, z: &Float) -> NumResult<Float> {
    if *z <= 0 {
        return Err(NumError::Domain("Kummer U needs z > 0".into()));
    }
    let p = a.prec().max(b.prec()).max(z.prec());
    let boost = (1.5 * z.to_f64() * std::f64::consts::LOG2_E).ceil() as u32;
    let w = p + GUARD_BITS + 64 + boost;
    let a = Float::with_val(w, a);
    let b = Float::with_val(w, b);
    let z = Float::with_val(w, z);
    if a.is_zero() {
        return Ok(Float::with_val(p, 1));
    }
    if a.is_integer() && a < 0 {
        // U(−m, b, z) = (−1)^m (b)_m M(−m, b, z)
        let m = (-a.to_f64()) as u32;
        let mut poch = Float::with_val(w, 1);
        for j in 0..m {
            poch *= Float::with_val(w, &b + j);
        }
        if m % 2 == 1 {
            poch = -poch;
        }
        return Ok(Float::with_val(p, poch * kummer_m(&a, &b, &z, w)?));
    }
    if b.is_integer() && b <= 0 {
        let one_mb = Float::with_val(w, 1u32 - &b);
        let a2 = Float::with_val(w, &a + &one_mb);
        let b2 = Float::with_val(w, 2u32 - &b);
        let u = kummer_u(&a2, &b2, &z)?;
        return Ok(Float::with_val(p, Float::with_val(w, z.pow(&one_mb)) * u));
    }
    let out = if b.is_integer() { u_integer_b(&a, &b, &z, w)? } else { u_generic(&a, &b, &z, w)? };
    Ok(Float::with_val(p, out))
}

fn u_generic(a: &Float, b: &Float, z: &Float, w: u32) -> NumResult<Float> {
    let one_mb = Float::with_val(w, 1u32 - b);
    let amb1 = Float::with_val(w, a + &one_mb);
    let bm1 = Float::with_val(w, b - 1u32);
    let two_mb = Float::with_val(w, 2u32 - b);
    let m1 = kummer_m(a, b, z, w)?;
    let m2 = kummer_m(&amb1, &two_mb, z, w)?;
    let t1 = Float::with_val(w, one_mb.gamma_ref()) * rgamma(&amb1) * m1;
    let t2 = Float::with_val(w, bm1.gamma_ref()) * rgamma(a) * Float::with_val(w, z.pow(&one_mb)) * m2;
    Ok(t1 + t2)
}

/// b = n + 1 with n ≥ 0, a not a nonpositive integer.
fn u_integer_b(a: &Float, b: &Float, z: &Float, w: u32) -> NumResult<Float> {
    let n = (b.to_f64() as u32) - 1;
    let lz = Float::with_val(w, z.ln_ref());
    let amn = Float::with_val(w, a - n);
    let lead = rgamma(&amn) / Float::with_val(w, Float::factorial(n));
    let mut total = Float::new(w);
    if !lead.is_zero() {
        let eps = Float::with_val(w, Float::i_exp(1, -(w as i32)));
        let g = Float::with_val(w, rug::float::Constant::Euler);
        // ψ(a+k), ψ(1+k) = H_k − γ, ψ(n+k+1) = H_{n+k} − γ
        let mut psi_a = Float::with_val(w, a.digamma_ref());
        let mut h_k = Float::new(w);
        let mut h_nk = Float::new(w);
        for j in 1..=n {
            h_nk += Float::with_val(w, 1) / j;
        }
        let mut coef = Float::with_val(w, 1);
        let mut sum = Float::new(w);
        let mut big = Float::new(w);
        let mut k = 0u32;
        loop {
            let bracket = Float::with_val(w, &lz + &psi_a) - Float::with_val(w, &h_k - &g) - Float::with_val(w, &h_nk - &g);
            let term = Float::with_val(w, &coef * &bracket);
            sum += &term;
            let asum = Float::with_val(w, sum.abs_ref());
            if asum > big {
                big = asum;
            }
            if Float::with_val(w, z - (k + 1)) < 0 && Float::with_val(w, term.abs_ref()) <= Float::with_val(w, &big * &eps) {
                break;
            }
            let ak = Float::with_val(w, a + k);
            psi_a += Float::with_val(w, ak.recip_ref());
            coef *= ak * z;
            coef /= Float::with_val(w, (n + 1 + k) as u64 * (k + 1) as u64);
            k += 1;
            h_k += Float::with_val(w, 1) / k;
            h_nk += Float::with_val(w, 1) / (n + k);
            if k > 200_000 {
                return Err(NumError::Convergence("logarithmic U series".into()));
            }
        }
        if n % 2 == 0 {
            sum = -sum;
        }
        total += lead * sum;
    }
    if n >= 1 {
        let ra = rgamma(a);
        let mut fin = Float::new(w);
        for k in 1..=n {
            let mut poch = Float::with_val(w, 1);
            for j in 0..(n - k) {
                poch *= Float::with_val(w, 1u32 - a) + (k + j);
            }
            let c = Float::with_val(w, Float::factorial(k - 1)) * poch / Float::with_val(w, Float::factorial(n - k));
            fin += c / Float::with_val(w, z.pow(k));
        }
        total += ra * fin;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{dec, rel_err, Quadrature};

    const P: u32 = 128;

    /// U(a,b,z) = Γ(a)^{-1} ∫₀^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt, a > 0.
    fn u_integral(a: &Float, b: &Float, z: &Float) -> Float {
        let w = P + 32;
        let am1 = Float::with_val(w, a - 1u32);
        let e2 = Float::with_val(w, b - a) - 1u32;
        let f = |t: &Float| -> Float {
            let l = Float::with_val(w, t.ln_ref()) * &am1 + Float::with_val(w, t + 1u32).ln() * &e2;
            (l - Float::with_val(w, z * t)).exp()
        };
        let q = Quadrature::new(P);
        let v = q.half_line(&f, &Float::new(w)).unwrap().value;
        v / Float::with_val(P, a.gamma_ref())
    }

    #[test]
    fn against_integral() {
        let cases = [("0.25", "1.5", "8.7"), ("1.25", "1.5", "3.1"), ("0.5", "2", "12.5"), ("1.5", "2", "0.7"), ("1", "3", "5"), ("2.5", "4", "30"), ("1.5", "4", "2"), ("0.3", "1", "1.1"), ("1.2", "1.4", "100")];
        for (a, b, z) in cases {
            let (a, b, z) = (dec(P, a), dec(P, b), dec(P, z));
            let u = kummer_u(&a, &b, &z).unwrap();
            let i = u_integral(&a, &b, &z);
            assert!(rel_err(&u, &i) < 1e-30, "U({}, {}, {}) = {} vs {}", a.to_f64(), b.to_f64(), z.to_f64(), u.to_f64(), i.to_f64());
        }
    }

    #[test]
    fn elementary_cases() {
        let z = dec(P, "2.5");
        let u = kummer_u(&dec(P, "1"), &dec(P, "3"), &z).unwrap();
        let want = Float::with_val(P, z.recip_ref()) + Float::with_val(P, z.square_ref()).recip();
        assert!(rel_err(&u, &want) < 1e-35);
        assert_eq!(kummer_u(&dec(P, "0"), &dec(P, "1"), &z).unwrap(), 1);
        // U(−1, b, z) = z − b
        let u = kummer_u(&dec(P, "-1"), &dec(P, "0.5"), &z).unwrap();
        assert!((u - 2u32).abs() < 1e-35);
        // b = 0 branch: U(a,0,z) = z U(a+1,2,z)
        let a = dec(P, "0.75");
        let l = kummer_u(&a, &dec(P, "0"), &z).unwrap();
        let r = Float::with_val(P, &z * kummer_u(&dec(P, "1.75"), &dec(P, "2"), &z).unwrap());
        assert!(rel_err(&l, &r) < 1e-35);
    }
}
