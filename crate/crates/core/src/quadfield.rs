//! Arithmetic of k = Q(√−q): the character, reduced forms, ideal counts, L-values.

use rug::ops::Pow;
use rug::Float;

use crate::numerics::{hurwitz_zeta_regular, pi, BigComplex, NumResult, GUARD_BITS};
use crate::Error;

pub const UNIT_COUNT: u64 = 2;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn ord(p: u64, n: i64) -> u32 {
    assert!(n != 0);
    let mut n = n.unsigned_abs();
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Legendre symbol (n/p) for an odd prime p.
pub fn legendre(n: i64, p: u64) -> i32 {
    let r = n.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn isqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    Some(r)
}

fn exact_sqrt(n: i64) -> Option<i64> {
    isqrt(n).filter(|r| r * r == n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl ReducedForm {
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    /// The reduced form equivalent to (a, b, c) under SL₂(Z).
    pub fn reduce(a: i64, b: i64, c: i64) -> ReducedForm {
        let (mut a, mut b, mut c) = (a, b, c);
        loop {
            if b.abs() > a {
                // b ← b mod 2a into (−a, a]
                let two_a = 2 * a;
                let mut nb = b.rem_euclid(two_a);
                if nb > a {
                    nb -= two_a;
                }
                let k = (nb - b) / two_a;
                c = a * k * k + b * k + c;
                b = nb;
            } else if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
            } else {
                break;
            }
        }
        if (b.abs() == a || a == c) && b < 0 {
            b = -b;
        }
        ReducedForm { a, b, c }
    }

    /// The inverse class (a, −b, c), reduced.
    pub fn inverse(&self) -> ReducedForm {
        ReducedForm::reduce(self.a, -self.b, self.c)
    }

    /// The CM point (−b + i√|D|)/(2a).
    pub fn cm_point(&self, prec: u32) -> BigComplex {
        let d = Float::with_val(prec, -self.disc()).sqrt();
        let two_a = 2 * self.a;
        BigComplex::new(Float::with_val(prec, -self.b) / two_a, d / two_a)
    }

    /// |{(x, y) ∈ Z² : F(x, y) = m}|, scanning |y| ≤ √(4am/|D|) and solving for x.
    pub fn count_reps(&self, m: i64) -> u64 {
        if m <= 0 {
            return u64::from(m == 0);
        }
        let d = -self.disc();
        let ymax = isqrt(4 * self.a * m / d).unwrap_or(0) + 1;
        let mut n = 0;
        for y in -ymax..=ymax {
            // a x² + b y x + (c y² − m) = 0, discriminant 4am − |D| y²
            let disc = 4 * self.a * m - d * y * y;
            let Some(k) = exact_sqrt(disc) else { continue };
            for root in if k == 0 { vec![-self.b * y] } else { vec![-self.b * y + k, -self.b * y - k] } {
                if root % (2 * self.a) == 0 {
                    n += 1;
                }
            }
        }
        n
    }
}

/// One reduced form per class of discriminant `disc` (primitive forms only).
pub fn reduced_forms(disc: i64) -> Result<Vec<ReducedForm>, Error> {
    if disc >= 0 || !(disc.rem_euclid(4) == 0 || disc.rem_euclid(4) == 1) {
        return Err(Error::Invalid(format!("{disc} is not a negative discriminant")));
    }
    let d = -disc;
    let mut out = Vec::new();
    let amax = isqrt(d / 3).unwrap_or(0);
    for a in 1..=amax {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = ReducedForm { a, b, c };
            if f.is_reduced() && gcd(gcd(a, b), c) == 1 {
                out.push(f);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Everything attached to a fixed prime q ≡ 3 (mod 4), q > 3.
#[derive(Debug, Clone)]
pub struct FieldContext {
    pub q: u64,
    pub prec: u32,
    pub forms: Vec<ReducedForm>,
    pub h: u64,
    /// L(1, χ)
    pub l1: Float,
    /// Λ'(1, χ)/Λ(1, χ)
    pub lambda_logderiv1: Float,
}

impl FieldContext {
    pub fn new(q: u64, prec: u32) -> Result<Self, Error> {
        validate_q(q)?;
        let forms = reduced_forms(-(q as i64))?;
        let h = forms.len() as u64;
        let mut ctx = FieldContext { q, prec, forms, h, l1: Float::new(prec), lambda_logderiv1: Float::new(prec) };
        let one = Float::with_val(prec, 1);
        ctx.l1 = ctx.dirichlet_l(&one)?;
        ctx.lambda_logderiv1 = ctx.lambda_logderiv(&one)?;
        Ok(ctx)
    }

    pub fn disc(&self) -> i64 {
        -(self.q as i64)
    }

    /// The Kronecker symbol (−q/n).
    pub fn chi(&self, n: i64) -> i32 {
        legendre(n, self.q)
    }

    /// χ_q at q: the Legendre symbol of the q-free part of t, sign included.
    pub fn chi_q_local(&self, t: i64) -> i32 {
        let e = ord(self.q, t);
        legendre(t / (self.q as i64).pow(e), self.q)
    }

    pub fn is_inert(&self, p: u64) -> bool {
        p != self.q && self.chi(p as i64) == -1
    }

    /// Number of integral ideals of norm n; 0 for n < 0.
    pub fn rho(&self, n: i64) -> Result<u64, Error> {
        if n == 0 {
            return Err(Error::Invalid("rho(0) is undefined".into()));
        }
        if n < 0 {
            return Ok(0);
        }
        let mut r = 1u64;
        for (p, e) in factorize(n as u64) {
            if p == self.q {
                continue;
            }
            r *= match self.chi(p as i64) {
                1 => e as u64 + 1,
                _ => u64::from(e % 2 == 0),
            };
            if r == 0 {
                break;
            }
        }
        Ok(r)
    }

    /// ρ(n) for n ≥ 1, 0 otherwise (no error for n = 0).
    pub fn rho0(&self, n: i64) -> u64 {
        if n <= 0 {
            0
        } else {
            self.rho(n).expect("n > 0")
        }
    }

    pub fn rho_brute(&self, n: i64) -> u64 {
        self.forms.iter().map(|f| f.count_reps(n)).sum::<u64>() / UNIT_COUNT
    }

    /// Ideals of norm m in the class labelled by `form`, counted through the inverse form.
    pub fn class_rep_count(&self, form: &ReducedForm, m: i64) -> u64 {
        form.inverse().count_reps(m) / UNIT_COUNT
    }

    /// (L(s,χ), L'(s,χ)) from L(s,χ) = q^{-s} Σ_{a<q} χ(a) ζ(s, a/q), with the
    /// pole of each ζ(s, a/q) removed (Σ χ(a) = 0), so s = 1 needs no special case.
    pub fn dirichlet_l_with_deriv(&self, s: &Float) -> NumResult<(Float, Float)> {
        let w = s.prec().max(self.prec) + GUARD_BITS;
        let s = Float::with_val(w, s);
        let mut l = Float::new(w);
        let mut dl = Float::new(w);
        for a in 1..self.q {
            let c = self.chi(a as i64);
            if c == 0 {
                continue;
            }
            let x = Float::with_val(w, a) / self.q;
            let (z, dz) = hurwitz_zeta_regular(&s, &x)?;
            if c > 0 {
                l += z;
                dl += dz;
            } else {
                l -= z;
                dl -= dz;
            }
        }
        let lq = Float::with_val(w, self.q).ln();
        let qs = Float::with_val(w, self.q).pow(-Float::with_val(w, &s));
        let l_out = Float::with_val(w, &l * &qs);
        let dl_out = (dl - lq * l) * qs;
        let p = self.prec;
        Ok((Float::with_val(p, l_out), Float::with_val(p, dl_out)))
    }

    pub fn dirichlet_l(&self, s: &Float) -> NumResult<Float> {
        self.dirichlet_l_with_deriv(s).map(|x| x.0)
    }

    pub fn l_logderiv(&self, s: &Float) -> NumResult<Float> {
        let (l, dl) = self.dirichlet_l_with_deriv(s)?;
        Ok(dl / l)
    }

    /// Λ(s,χ) = π^{-(s+1)/2} Γ((s+1)/2) L(s,χ).
    ///
    /// At s = −1, −3, … the Γ pole meets a trivial zero of L; there the value
    /// comes from Λ(s,χ) = q^{1/2−s} Λ(1−s,χ).
    pub fn lambda_chi(&self, s: &Float) -> NumResult<Float> {
        let w = s.prec().max(self.prec) + GUARD_BITS;
        let s = Float::with_val(w, s);
        let h = Float::with_val(w, &s + 1u32) / 2u32;
        if h.is_integer() && h <= 0 {
            let one_ms = Float::with_val(w, 1u32 - &s);
            let e = Float::with_val(w, 0.5) - &s;
            let v = self.lambda_chi(&one_ms)? * Float::with_val(w, self.q).pow(e);
            return Ok(Float::with_val(self.prec, v));
        }
        let l = self.dirichlet_l(&s)?;
        let g = Float::with_val(w, h.gamma_ref());
        let pp = pi(w).pow(-Float::with_val(w, &h));
        Ok(Float::with_val(self.prec, l * g * pp))
    }

    /// Λ'/Λ(s,χ) = −½ log π + ½ ψ((s+1)/2) + L'/L(s,χ).
    pub fn lambda_logderiv(&self, s: &Float) -> NumResult<Float> {
        let w = s.prec().max(self.prec) + GUARD_BITS;
        let h = Float::with_val(w, s + 1u32) / 2u32;
        let psi = h.digamma();
        let lp = pi(w).ln();
        let ll = self.l_logderiv(&Float::with_val(w, s))?;
        Ok(Float::with_val(self.prec, (psi - lp) / 2u32 + ll))
    }
}

pub fn validate_q(q: u64) -> Result<(), Error> {
    if q <= 3 || q % 4 != 3 || !is_prime(q) {
        return Err(Error::Invalid(format!("q = {q} must be a prime ≡ 3 (mod 4) with q > 3")));
    }
    Ok(())
}
