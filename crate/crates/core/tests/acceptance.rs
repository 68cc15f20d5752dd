//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use rug::Float;

use phi_core::cm::gross_zagier_check;
use phi_core::cycles::{arakelov_archimedean, deg_z_closed, deg_z_lattice};
use phi_core::eisenstein::{coefficient_product, coefficient_product_with, constant_term, fourier_extract_many, window_for_tolerance, ArchMethod};
use phi_core::numerics::{dec, mellin_beta1_identity_lhs, mellin_beta1_identity_rhs, rel_err};
use phi_core::phi::{coeff_constant, coeff_positive_exact, mellin_closed, mellin_quadrature, MellinOptions, PhiExpansion};
use phi_core::whittaker::{arch_factor, arch_factor_deriv0, arch_factor_quadrature};
use phi_core::{Exec, FieldContext, HalfPlanePoint};

const BITS: u32 = 128;

struct Outcome {
    pass: bool,
    detail: String,
}

fn tau(u: &str, v: &str) -> HalfPlanePoint {
    HalfPlanePoint::new(dec(BITS, u), dec(BITS, v)).unwrap()
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed.as_secs_f64() < limit_s as f64
}

fn rho_oracle() -> Outcome {
    let t0 = Instant::now();
    let mut bad = Vec::new();
    for q in [7, 11, 19, 31] {
        let k = FieldContext::new(q, 64).unwrap();
        for n in 1..=5000 {
            if k.rho(n).unwrap() != k.rho_brute(n) {
                bad.push((q, n));
            }
        }
    }
    let el = t0.elapsed();
    Outcome { pass: bad.is_empty() && within(el, 30), detail: format!("{} mismatches, {:.1}s (limit 30s)", bad.len(), el.as_secs_f64()) }
}

fn whittaker_assembly() -> Outcome {
    let t0 = Instant::now();
    let ts: Vec<i64> = (-4..=8).filter(|&t| t != 0).collect();
    let mut worst = 0f64;
    let mut over_bound = 0;
    for q in [7, 11] {
        let k = FieldContext::new(q, BITS).unwrap();
        for s in ["2.5", "3"] {
            let s = dec(BITS, s);
            for v in ["0.7", "1.3"] {
                let v = dec(BITS, v);
                // window from the tail bound, a decade below the acceptance threshold
                let a = window_for_tolerance(&k, &v, &s, &ts, 1e-7);
                let got = fourier_extract_many(&k, &v, &s, &ts, a, 32, Exec::default()).unwrap();
                let tt = HalfPlanePoint::new(Float::new(BITS), v.clone()).unwrap();
                let norm = Float::with_val(BITS, v.recip_sqrt_ref());
                for (&t, (c, bound)) in ts.iter().zip(&got) {
                    let p = coefficient_product(&k, &tt, t, &s).unwrap().scale(&norm);
                    let gap = (c - &p).abs();
                    if gap > *bound {
                        over_bound += 1;
                    }
                    worst = worst.max(gap.to_f64());
                }
            }
        }
    }
    let el = t0.elapsed();
    Outcome {
        pass: worst < 1e-6 && over_bound == 0 && within(el, 300),
        detail: format!("max gap {worst:.2e} (limit 1e-6), {over_bound} above tail bound, {:.1}s (limit 300s)", el.as_secs_f64()),
    }
}

fn central_vanishing() -> Outcome {
    let tt = tau("0.15", "0.9");
    let zero = Float::new(BITS);
    let eps = Float::with_val(BITS, Float::i_exp(1, -(BITS as i32) + 8));
    let mut nonzero = 0;
    let mut worst_fe = 0f64;
    for q in [7, 11, 19] {
        let k = FieldContext::new(q, BITS).unwrap();
        for t in (-50..=50).filter(|&t| t != 0) {
            if coefficient_product(&k, &tt, t, &zero).unwrap().abs() > eps {
                nonzero += 1;
            }
        }
        if constant_term(&k, &tt, &zero).unwrap().abs() > eps {
            nonzero += 1;
        }
        for s in ["0.4", "0.9"] {
            let s = dec(BITS, s);
            let ms = Float::with_val(BITS, -&s);
            for t in (-12..=12).filter(|&t| t != 0) {
                let a = coefficient_product(&k, &tt, t, &s).unwrap();
                let b = coefficient_product(&k, &tt, t, &ms).unwrap();
                worst_fe = worst_fe.max((&a + &b).abs().to_f64());
            }
            for t in [-3, -1, 1, 2, 5] {
                let a = coefficient_product_with(&k, &tt, t, &s, ArchMethod::Quadrature).unwrap();
                let b = coefficient_product_with(&k, &tt, t, &ms, ArchMethod::Quadrature).unwrap();
                worst_fe = worst_fe.max((&a + &b).abs().to_f64());
            }
            let a = constant_term(&k, &tt, &s).unwrap();
            let b = constant_term(&k, &tt, &ms).unwrap();
            worst_fe = worst_fe.max((a + b).abs().to_f64());
        }
    }
    Outcome {
        pass: nonzero == 0 && worst_fe < 1e-8,
        detail: format!("{nonzero} nonzero central values, max |E*_t(s) + E*_t(−s)| {worst_fe:.2e} (limit 1e-8)"),
    }
}

fn mellin_identity() -> Outcome {
    let t0 = Instant::now();
    let mut worst = 0f64;
    for q in [7, 11] {
        let k = FieldContext::new(q, BITS).unwrap();
        for s in ["1.5", "2", "2.5", "3"] {
            let s = dec(BITS, s);
            let m = mellin_quadrature(&k, &s, 200, MellinOptions::default()).unwrap();
            let c = mellin_closed(&k, &s).unwrap();
            worst = worst.max(rel_err(&m.value, &c).to_f64());
        }
    }
    let el = t0.elapsed();
    let mut beta_ident = 0f64;
    for s in ["1.5", "2", "2.5", "3"] {
        let s = dec(BITS, s);
        beta_ident = beta_ident.max(rel_err(&mellin_beta1_identity_lhs(&s).unwrap(), &mellin_beta1_identity_rhs(&s).unwrap()).to_f64());
    }
    Outcome {
        pass: worst < 1e-5 && within(el, 120) && beta_ident < 1e-20,
        detail: format!("max rel err {worst:.2e} (limit 1e-5), {:.1}s (limit 120s); β₁ Mellin identity rel err {beta_ident:.2e} (limit 1e-20)", el.as_secs_f64()),
    }
}

fn degree_routes() -> Outcome {
    let t0 = Instant::now();
    let mut bad = 0;
    for q in [7, 11, 19, 31] {
        let k = FieldContext::new(q, 64).unwrap();
        for t in 1..=2000 {
            let a = deg_z_lattice(&k, t).unwrap();
            if a != deg_z_closed(&k, t).unwrap() || a != coeff_positive_exact(&k, t).unwrap() {
                bad += 1;
            }
        }
    }
    let el = t0.elapsed();
    Outcome { pass: bad == 0 && within(el, 60), detail: format!("{bad} mismatches, {:.1}s (limit 60s)", el.as_secs_f64()) }
}

fn singular_moduli() -> Outcome {
    let t0 = Instant::now();
    let mut worst_gap = 0f64;
    let mut worst_int = 0f64;
    let mut js = Vec::new();
    for (q, d) in [(7, 8), (7, 11), (11, 8), (19, 8)] {
        let k = FieldContext::new(q, 512).unwrap();
        let g = gross_zagier_check(&k, d, 512, Exec::default()).unwrap();
        worst_gap = worst_gap.max(g.gap.to_f64());
        worst_int = worst_int.max(g.product.integrality_gap.to_f64());
        js.push(format!("({q},{d}): J = {}, gap {:.2e}", g.product.nearest_integer, g.gap.to_f64()));
    }
    let el = t0.elapsed();
    Outcome {
        pass: worst_gap < 1e-12 && worst_int < 1e-5 && within(el, 60),
        detail: format!("max gap {worst_gap:.2e} (limit 1e-12), integrality {worst_int:.2e} (limit 1e-5), {:.1}s; {}", el.as_secs_f64(), js.join(", ")),
    }
}

fn archimedean_whittaker() -> Outcome {
    let tt = tau("0.3", "1.1");
    let mut worst = 0f64;
    for s in ["0.5", "1", "2"] {
        let s = dec(BITS, s);
        for t in [-3, -1, 1, 2, 5] {
            let a = arch_factor(&tt, t, &s).unwrap();
            let b = arch_factor_quadrature(&tt, t, &s).unwrap();
            worst = worst.max(((&a - &b).abs() / a.abs()).to_f64());
        }
    }
    let h = dec(BITS, "1e-4");
    let mut worst_d = 0f64;
    for t in [-3, -1] {
        let d = arch_factor_deriv0(&tt, t).unwrap();
        let w0 = arch_factor_quadrature(&tt, t, &Float::new(BITS)).unwrap();
        let wh = arch_factor_quadrature(&tt, t, &h).unwrap();
        let fd = (&wh - &w0).scale(&Float::with_val(BITS, h.recip_ref()));
        worst_d = worst_d.max(((&fd - &d).abs() / d.abs()).to_f64());
    }
    Outcome {
        pass: worst < 1e-10 && worst_d < 1e-3,
        detail: format!("quadrature vs closed max rel err {worst:.2e} (limit 1e-10); derivative vs difference quotient {worst_d:.2e} (limit 1e-3)"),
    }
}

fn expansion_identity() -> Outcome {
    let mut bad = 0;
    for q in [7, 11, 23] {
        let k = FieldContext::new(q, BITS).unwrap();
        let exp = PhiExpansion::new(&k, 500, Exec::default()).unwrap();
        let v = dec(BITS, "0.85");
        if exp.coefficient(&k, 0, &v).unwrap() != coeff_constant(&k, &v).unwrap() {
            bad += 1;
        }
        for t in 1..=500i64 {
            if exp.positive[t as usize - 1] != deg_z_lattice(&k, t).unwrap() {
                bad += 1;
            }
            let arch = arakelov_archimedean(&k, -t, &v).unwrap().archimedean_degree(BITS);
            if exp.coefficient(&k, -t, &v).unwrap() != arch {
                bad += 1;
            }
        }
    }
    Outcome { pass: bad == 0, detail: format!("{bad} coefficient mismatches over |t| ≤ 500") }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("rho oracle", rho_oracle),
        ("Whittaker assembly vs direct sum", whittaker_assembly),
        ("central vanishing and antisymmetry", central_vanishing),
        ("Mellin identity", mellin_identity),
        ("degree two-route equality", degree_routes),
        ("singular moduli identity", singular_moduli),
        ("archimedean Whittaker quadrature", archimedean_whittaker),
        ("expansion/divisor identity", expansion_identity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {}: {} [{}] {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, name, o.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
