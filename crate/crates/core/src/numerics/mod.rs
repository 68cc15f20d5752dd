//! Arbitrary-precision real and complex arithmetic on top of MPFR, plus the
//! special functions used by the rest of the crate.

pub mod bernoulli;
pub mod gamma;
pub mod hurwitz;
pub mod kummer;
pub mod quad;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

pub use gamma::{complex_gamma, complex_log_gamma};
pub use hurwitz::{hurwitz_zeta, hurwitz_zeta_regular, hurwitz_zeta_with_deriv};
pub use kummer::kummer_u;
pub use quad::{QuadResult, Quadrature};

/// Real numbers at an explicit precision. The precision is carried by the
/// value itself (`Float::prec`).
pub type BigReal = Float;

/// Extra bits used internally by every special function.
pub const GUARD_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumError {
    #[error("pole at {0}")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
}

pub type NumResult<T> = Result<T, NumError>;

pub fn real(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

/// Exact decimal literal rounded once at `prec`.
pub fn dec(prec: u32, s: &str) -> Float {
    Float::with_val(prec, Float::parse(s).expect("decimal literal"))
}

pub fn int(prec: u32, n: i64) -> Float {
    Float::with_val(prec, n)
}

pub fn ratio(prec: u32, a: i64, b: i64) -> Float {
    Float::with_val(prec, a) / b
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn euler_gamma(prec: u32) -> Float {
    Float::with_val(prec, Constant::Euler)
}

pub fn ln_int(prec: u32, n: u64) -> Float {
    Float::with_val(prec, n).ln()
}

/// Relative difference |a - b| / max(|b|, tiny).
pub fn rel_err(a: &Float, b: &Float) -> Float {
    let p = a.prec().max(b.prec());
    let d = Float::with_val(p, a - b).abs();
    let den = Float::with_val(p, b.abs_ref());
    if den.is_zero() {
        d
    } else {
        d / den
    }
}

pub fn gamma(s: &Float) -> NumResult<Float> {
    if s.is_integer() && *s <= 0 {
        return Err(NumError::Pole(format!("gamma at {}", s.to_f64())));
    }
    Ok(s.clone().gamma())
}

/// ψ(s) for s > 0.
pub fn digamma(s: &Float) -> NumResult<Float> {
    if *s <= 0 {
        return Err(NumError::Domain(format!("digamma needs s > 0, got {}", s.to_f64())));
    }
    Ok(s.clone().digamma())
}

/// β₁(t) = E₁(t) = ∫₁^∞ u⁻¹ e^{-ut} du.
pub fn beta1(t: &Float) -> NumResult<Float> {
    if *t <= 0 {
        return Err(NumError::Domain(format!("beta1 needs t > 0, got {}", t.to_f64())));
    }
    let p = t.prec();
    let w = p + GUARD_BITS;
    let x = Float::with_val(w, -t);
    Ok(Float::with_val(p, -x.eint()))
}

pub fn riemann_zeta(s: &Float) -> NumResult<Float> {
    if *s == 1 {
        return Err(NumError::Pole("zeta at s = 1".into()));
    }
    Ok(s.clone().zeta())
}

/// ζ'(s)/ζ(s) from the Euler-Maclaurin derivative of ζ(s, 1).
pub fn zeta_logderiv(s: &Float) -> NumResult<Float> {
    let one = Float::with_val(s.prec(), 1);
    let (z, dz) = hurwitz_zeta_with_deriv(s, &one)?;
    Ok(dz / z)
}

/// ∫₀^∞ β₁(2v) eᵛ v^{s-1} dv by tanh-sinh quadrature, split at v = 1.
pub fn mellin_beta1_identity_lhs(s: &Float) -> NumResult<Float> {
    if *s <= 1 {
        return Err(NumError::Domain("Mellin integral of beta1 needs s > 1".into()));
    }
    let p = s.prec();
    let w = p + GUARD_BITS;
    let sm1 = Float::with_val(w, s - 1u32);
    // beyond v_cut the integrand is below e^{-v_cut}
    let v_cut = 2.0 * w as f64 + 40.0 * s.to_f64().abs();
    let f = |v: &Float| -> Float {
        if v.to_f64() > v_cut {
            return Float::new(w);
        }
        let b = beta1(&Float::with_val(w, v * 2u32)).expect("v > 0");
        let e = Float::with_val(w, v.exp_ref());
        let pw = Float::with_val(w, v.pow(&sm1));
        b * e * pw
    };
    let q = Quadrature::new(p);
    let a = q.finite(&f, &Float::with_val(w, 0), &Float::with_val(w, 1))?;
    let b = q.half_line(&f, &Float::with_val(w, 1))?;
    Ok(Float::with_val(p, a.value + b.value))
}

/// ½Γ(s)[ψ((s+1)/2) − ψ(s/2)].
pub fn mellin_beta1_identity_rhs(s: &Float) -> NumResult<Float> {
    let p = s.prec();
    let w = p + GUARD_BITS;
    let s = Float::with_val(w, s);
    let a = digamma(&(Float::with_val(w, &s + 1u32) / 2u32))?;
    let b = digamma(&Float::with_val(w, &s / 2u32))?;
    let g = gamma(&s)?;
    Ok(Float::with_val(p, g * (a - b) / 2u32))
}

#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e} + {:e}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        let p = re.prec().max(im.prec());
        BigComplex { re: Float::with_val(p, re), im: Float::with_val(p, im) }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_real(Float::with_val(prec, 1))
    }

    pub fn i(prec: u32) -> Self {
        BigComplex { re: Float::new(prec), im: Float::with_val(prec, 1) }
    }

    pub fn from_real(re: Float) -> Self {
        let p = re.prec();
        BigComplex { re, im: Float::new(p) }
    }

    pub fn from_imag(im: Float) -> Self {
        let p = im.prec();
        BigComplex { re: Float::new(p), im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: Float::with_val(self.prec(), -&self.im) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, x: &Float) -> Self {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re * x), im: Float::with_val(p, &self.im * x) }
    }

    /// Multiply by i.
    pub fn mul_i(&self) -> Self {
        BigComplex { re: Float::with_val(self.prec(), -&self.im), im: self.re.clone() }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        BigComplex {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        }
    }

    pub fn div(&self, o: &BigComplex) -> Self {
        self * &o.recip()
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        BigComplex { re: Float::with_val(p, &m * &c), im: m * s }
    }

    /// Principal branch.
    pub fn ln(&self) -> Self {
        BigComplex { re: self.abs().ln(), im: self.arg() }
    }

    /// e^{iθ}.
    pub fn cis(theta: &Float) -> Self {
        let p = theta.prec();
        let (s, c) = theta.clone().sin_cos(Float::new(p));
        BigComplex { re: c, im: s }
    }

    /// e(x) = e^{2πix}.
    pub fn e(x: &Float) -> Self {
        let p = x.prec();
        Self::cis(&(pi(p) * x * 2u32))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        BigComplex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        BigComplex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        let rr = Float::with_val(p, &self.re * &o.re);
        let ii = Float::with_val(p, &self.im * &o.im);
        let ri = Float::with_val(p, &self.re * &o.im);
        let ir = Float::with_val(p, &self.im * &o.re);
        BigComplex { re: rr - ii, im: ri + ir }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, -&self.re), im: Float::with_val(p, -&self.im) }
    }
}

impl Add for BigComplex {
    type Output = BigComplex;
    fn add(self, o: BigComplex) -> BigComplex {
        &self + &o
    }
}

impl Sub for BigComplex {
    type Output = BigComplex;
    fn sub(self, o: BigComplex) -> BigComplex {
        &self - &o
    }
}

impl Mul for BigComplex {
    type Output = BigComplex;
    fn mul(self, o: BigComplex) -> BigComplex {
        &self * &o
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -&self
    }
}

/// x^y for x > 0.
pub fn powr(x: &Float, y: &Float) -> Float {
    Float::with_val(x.prec().max(y.prec()), x.pow(y))
}

/// Neumaier-compensated sum of complex values, in the given order.
pub fn compensated_sum<'a, I>(prec: u32, it: I) -> BigComplex
where
    I: IntoIterator<Item = &'a BigComplex>,
{
    let mut re = Kahan::new(prec);
    let mut im = Kahan::new(prec);
    for z in it {
        re.add(&z.re);
        im.add(&z.im);
    }
    BigComplex { re: re.total(), im: im.total() }
}

pub struct Kahan {
    sum: Float,
    c: Float,
}

impl Kahan {
    pub fn new(prec: u32) -> Self {
        Kahan { sum: Float::new(prec), c: Float::new(prec) }
    }

    pub fn add(&mut self, x: &Float) {
        let p = self.sum.prec();
        let t = Float::with_val(p, &self.sum + x);
        if Float::with_val(p, self.sum.abs_ref()) >= Float::with_val(p, x.abs_ref()) {
            self.c += Float::with_val(p, &self.sum - &t) + x;
        } else {
            self.c += Float::with_val(p, x - &t) + &self.sum;
        }
        self.sum = t;
    }

    pub fn total(self) -> Float {
        self.sum + self.c
    }
}
