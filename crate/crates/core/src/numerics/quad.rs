//! Double-exponential quadrature: tanh-sinh on finite intervals and exp-sinh
//! on half lines. Levels halve the step until two successive estimates agree
//! to `tol` (default 2^{-prec/2}); the converged estimate is then accurate to
//! roughly tol², which is why the residual test is relative to the half precision.

use rug::Float;

use super::{NumError, NumResult, GUARD_BITS};

/// Largest |t| visited. At t = 8 the tanh-sinh endpoint gap is about e^{-4600}.
const T_MAX: f64 = 8.0;
const MAX_LEVEL: u32 = 12;

#[derive(Debug, Clone)]
pub struct QuadResult {
    pub value: Float,
    pub residual: Float,
    pub level: u32,
}

#[derive(Debug, Clone)]
pub struct Quadrature {
    prec: u32,
    tol: Float,
    max_level: u32,
}

impl Quadrature {
    pub fn new(prec: u32) -> Self {
        let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
        Quadrature { prec, tol, max_level: MAX_LEVEL }
    }

    pub fn with_tolerance(mut self, tol: Float) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_level(mut self, lvl: u32) -> Self {
        self.max_level = lvl;
        self
    }

    fn wp(&self) -> u32 {
        self.prec + GUARD_BITS
    }

    /// ∫_a^b f. Endpoint singularities are fine; f is never evaluated at a or b.
    pub fn finite<F>(&self, f: &F, a: &Float, b: &Float) -> NumResult<QuadResult>
    where
        F: Fn(&Float) -> Float + ?Sized,
    {
        let w = self.wp();
        let a = Float::with_val(w, a);
        let b = Float::with_val(w, b);
        let half = Float::with_val(w, &b - &a) / 2u32;
        let mid = Float::with_val(w, &a + &b) / 2u32;
        let pi2 = Float::with_val(w, rug::float::Constant::Pi) / 2u32;
        let node = |t: &Float| -> Float {
            let y = Float::with_val(w, t.sinh_ref()) * &pi2;
            let cy = Float::with_val(w, y.cosh_ref());
            let wt = Float::with_val(w, t.cosh_ref()) * &pi2 / Float::with_val(w, cy.square_ref()) * &half;
            if t.is_zero() {
                return wt * f(&mid);
            }
            // distance from the nearer endpoint, computed without cancellation
            let e2y = (Float::with_val(w, y.abs_ref()) * 2u32).exp();
            let d = Float::with_val(w, 2u32) / (e2y + 1u32) * &half;
            let xl = Float::with_val(w, &a + &d);
            let xr = Float::with_val(w, &b - &d);
            let mut acc = Float::new(w);
            if xl != a {
                acc += f(&xl);
            }
            if xr != b {
                acc += f(&xr);
            }
            wt * acc
        };
        self.run(&node, true)
    }

    /// ∫_a^∞ f via x = a + exp(π/2 · sinh t).
    pub fn half_line<F>(&self, f: &F, a: &Float) -> NumResult<QuadResult>
    where
        F: Fn(&Float) -> Float + ?Sized,
    {
        let w = self.wp();
        let a = Float::with_val(w, a);
        let pi2 = Float::with_val(w, rug::float::Constant::Pi) / 2u32;
        let node = |t: &Float| -> Float {
            let y = Float::with_val(w, t.sinh_ref()) * &pi2;
            let ey = y.exp();
            let x = Float::with_val(w, &a + &ey);
            if x == a {
                return Float::new(w);
            }
            let wt = Float::with_val(w, t.cosh_ref()) * &pi2 * ey;
            wt * f(&x)
        };
        self.run(&node, false)
    }

    /// Drives the level loop. `symmetric` nodes fold ±t into a single call at t ≥ 0.
    fn run<N>(&self, node: &N, symmetric: bool) -> NumResult<QuadResult>
    where
        N: Fn(&Float) -> Float,
    {
        let w = self.wp();
        let eps = Float::with_val(w, Float::i_exp(1, -(w as i32) - 8));
        let mut total = Float::new(w);
        let mut prev: Option<Float> = None;
        for level in 0..=self.max_level {
            let h = Float::with_val(w, Float::i_exp(1, -(level as i32)));
            let mut part = Float::new(w);
            // level 0 visits every integer multiple of h, later levels only odd ones
            let (start, step) = if level == 0 { (0i64, 1i64) } else { (1, 2) };
            let kmax = (T_MAX * (1u64 << level) as f64) as i64;
            let dirs: &[i64] = if symmetric { &[1] } else { &[1, -1] };
            for &dir in dirs {
                let mut small = 0;
                let mut k = start;
                while k <= kmax {
                    if !(symmetric || dir == 1) && k == 0 {
                        k += step;
                        continue;
                    }
                    let t = Float::with_val(w, &h * (dir * k));
                    let v = node(&t);
                    if !v.is_finite() {
                        return Err(NumError::Convergence(format!("non-finite integrand at t = {}", t.to_f64())));
                    }
                    let mag = Float::with_val(w, v.abs_ref());
                    part += &v;
                    let scale = Float::with_val(w, &total + &part).abs();
                    if k > 0 && mag <= Float::with_val(w, &scale * &eps) {
                        small += 1;
                        if small >= 3 {
                            break;
                        }
                    } else {
                        small = 0;
                    }
                    k += step;
                }
            }
            total += part;
            let est = Float::with_val(w, &total * &h);
            if let Some(p) = prev.as_ref() {
                let res = Float::with_val(w, &est - p).abs();
                let scale = Float::with_val(w, est.abs_ref());
                if level >= 3 && res <= Float::with_val(w, &self.tol * &scale) {
                    return Ok(QuadResult { value: Float::with_val(self.prec, est), residual: res, level });
                }
                if level == self.max_level {
                    return Err(NumError::Convergence(format!(
                        "tanh-sinh residual {:e} after {} levels",
                        res.to_f64(),
                        level
                    )));
                }
            }
            prev = Some(est);
        }
        unreachable!()
    }
}
