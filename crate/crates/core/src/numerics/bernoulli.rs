//! Even Bernoulli numbers scaled by the factorial, via B_{2k}/(2k)! = (−1)^{k+1} 2ζ(2k)/(2π)^{2k}.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

/// B_{2k}/(2k)! for k ≥ 1.
pub fn b2k_over_fact(k: u32, prec: u32) -> Float {
    assert!(k >= 1);
    let w = prec + 16;
    let z = Float::with_val(w, Float::zeta_u(2 * k));
    let tp = Float::with_val(w, Constant::Pi) * 2u32;
    let mut v = z * 2u32 / tp.pow(2 * k);
    if k % 2 == 0 {
        v = -v;
    }
    Float::with_val(prec, v)
}
