//! Complex Γ through the Stirling series after shifting Re z above 0.15·prec + 10,
//! where the optimal truncation error e^{-2π|z|} is below 2^{-prec}.

use rug::float::Constant;
use rug::Float;

use super::bernoulli::b2k_over_fact;
use super::{BigComplex, NumError, NumResult, GUARD_BITS};

pub fn complex_log_gamma(z: &BigComplex) -> NumResult<BigComplex> {
    let p = z.prec();
    let w = p + GUARD_BITS;
    if z.im.is_zero() && z.re.is_integer() && z.re <= 0 {
        return Err(NumError::Pole(format!("gamma at {}", z.re.to_f64())));
    }
    let z = z.with_prec(w);
    let target = 0.15 * w as f64 + 10.0;
    let shift = (target - z.re.to_f64()).ceil().max(0.0) as u32;

    // Π_{j<shift} (z + j), accumulated then logged once
    let mut prod = BigComplex::one(w);
    for j in 0..shift {
        let zj = BigComplex::new(Float::with_val(w, &z.re + j), z.im.clone());
        prod = &prod * &zj;
    }
    let zs = BigComplex::new(Float::with_val(w, &z.re + shift), z.im.clone());

    let lz = zs.ln();
    let half = Float::with_val(w, 0.5);
    let zm = BigComplex::new(Float::with_val(w, &zs.re - &half), zs.im.clone());
    let mut acc = &(&zm * &lz) - &zs;
    let l2pi = (Float::with_val(w, Constant::Pi) * 2u32).ln() / 2u32;
    acc.re += l2pi;

    let inv = zs.recip();
    let inv2 = &inv * &inv;
    let mut pw = inv.clone();
    let eps = Float::with_val(w, Float::i_exp(1, -(w as i32)));
    let scale = acc.abs();
    for k in 1u32..=2 * w {
        // B_{2k} / (2k(2k-1)) = (B_{2k}/(2k)!) (2k-2)!
        let fact = Float::with_val(w, Float::factorial(2 * k - 2));
        let c = b2k_over_fact(k, w) * fact;
        let t = pw.scale(&c);
        let mag = t.abs();
        acc = &acc + &t;
        if mag <= Float::with_val(w, &scale * &eps) {
            let out = &acc - &prod.ln();
            return Ok(out.with_prec(p));
        }
        pw = &pw * &inv2;
    }
    Err(NumError::Convergence("Stirling series".into()))
}

pub fn complex_gamma(z: &BigComplex) -> NumResult<BigComplex> {
    let p = z.prec();
    Ok(complex_log_gamma(&z.with_prec(p + GUARD_BITS))?.exp().with_prec(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{dec, pi, real, Quadrature};

    const P: u32 = 128;

    #[test]
    fn real_values() {
        let g = complex_gamma(&BigComplex::from_real(real(P, 0.5))).unwrap();
        assert!((g.re - pi(P).sqrt()).abs() < 1e-36 && g.im.abs() < 1e-36);
        let g = complex_gamma(&BigComplex::from_real(real(P, 5.0))).unwrap();
        assert!((g.re - 24u32).abs() < 1e-33);
        let g = complex_gamma(&BigComplex::from_real(real(P, -2.5))).unwrap();
        let want = real(P, -2.5).gamma();
        assert!(((g.re - &want) / want).abs() < 1e-35);
        assert!(complex_gamma(&BigComplex::from_real(real(P, -3.0))).is_err());
    }

    #[test]
    fn euler_integral() {
        // Γ(z) = ∫₀^∞ x^{z-1} e^{-x} dx with z = 1.3 + 0.2i, real and imaginary parts separately
        let z = BigComplex::new(dec(P, "1.3"), dec(P, "0.2"));
        let w = P + 32;
        let a1 = Float::with_val(w, &z.re - 1u32);
        let b1 = Float::with_val(w, &z.im);
        let re = |x: &Float| -> Float {
            let lx = Float::with_val(w, x.ln_ref());
            let m = (Float::with_val(w, &lx * &a1) - x).exp();
            m * Float::with_val(w, &lx * &b1).cos()
        };
        let im = |x: &Float| -> Float {
            let lx = Float::with_val(w, x.ln_ref());
            let m = (Float::with_val(w, &lx * &a1) - x).exp();
            m * Float::with_val(w, &lx * &b1).sin()
        };
        let q = Quadrature::new(P);
        let zero = Float::new(w);
        let a = q.half_line(&re, &zero).unwrap().value;
        let b = q.half_line(&im, &zero).unwrap().value;
        let g = complex_gamma(&z).unwrap();
        assert!((g.re - a).abs() < 1e-30 && (g.im - b).abs() < 1e-30);
    }
}
