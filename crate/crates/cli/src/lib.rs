//! The `phi` command line: argument model, the eight subcommands, exit codes.

pub mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Float;

use phi_core::cm::gross_zagier_check;
use phi_core::cycles::{arakelov_archimedean, arakelov_finite, deg_z_closed, deg_z_lattice};
use phi_core::eisenstein::{coefficient_product, coefficient_product_with, constant_term, fourier_extract_many, window_for_tolerance, ArchMethod};
use phi_core::numerics::rel_err;
use phi_core::phi::{coeff_constant, coeff_negative, coeff_positive_exact, mellin_closed, mellin_quadrature, MellinOptions, PhiExpansion};
use phi_core::quadfield::validate_q;
use phi_core::whittaker::{arch_factor, arch_factor_quadrature};
use phi_core::{Error, Exec, FieldContext, HalfPlanePoint, NumError};

use report::{Cell, Report, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_TOLERANCE: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "phi", version, about = "Coefficients, Mellin transform, cycle degrees and singular moduli for Q(√−q)")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// prime q ≡ 3 (mod 4), q > 3
    #[arg(long, global = true, default_value_t = 7, value_parser = parse_q)]
    pub q: u64,
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u32).range(32..=8192))]
    pub bits: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// worker threads; 0 leaves the pool at its default size
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Fourier coefficients a_t for tmin ≤ t ≤ tmax
    Coeffs {
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        tmin: i64,
        #[arg(long, default_value_t = 20, allow_hyphen_values = true)]
        tmax: i64,
        #[arg(long = "tau-v", alias = "v", default_value = "1")]
        tau_v: String,
    },
    /// φ(τ) from the truncated expansion, with its tail bound
    Eval {
        #[arg(long = "tau-u", default_value = "0", allow_hyphen_values = true)]
        tau_u: String,
        #[arg(long = "tau-v", alias = "v", default_value = "1")]
        tau_v: String,
        #[arg(long, default_value_t = 200)]
        nmax: u64,
    },
    /// Direct lattice sum against the Euler product, for s > 1
    Oracle {
        #[arg(long)]
        s: String,
        #[arg(long = "tau-v", alias = "v", default_value = "1")]
        tau_v: String,
        #[arg(long, default_value_t = 6)]
        tmax: i64,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Mellin transform by quadrature against the closed form
    Mellin {
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = 200)]
        nmax: u64,
        #[arg(long, default_value_t = 1e-5)]
        tolerance: f64,
    },
    /// deg Z(t) by the lattice count and by the closed formula
    Degz {
        #[arg(long, default_value_t = 100)]
        tmax: i64,
    },
    /// Arakelov divisors Ẑ(t): finite part for t > 0, archimedean part for t < 0
    Arakelov {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        tmin: i64,
        #[arg(long, default_value_t = 20, allow_hyphen_values = true)]
        tmax: i64,
        #[arg(long = "tau-v", alias = "v", default_value = "1")]
        tau_v: String,
    },
    /// 2 log|J(−q,−d)| against the coefficient sum
    Gz {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
    },
    /// Every invariant at reduced ranges
    Selftest {
        #[arg(long)]
        quick: bool,
    },
}

fn parse_q(s: &str) -> Result<u64, String> {
    let q: u64 = s.parse().map_err(|e| format!("{e}"))?;
    validate_q(q).map_err(|e| e.to_string())?;
    Ok(q)
}

/// A failed run: message plus exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Num(NumError::Convergence(_) | NumError::Precision(_)) => EXIT_CONVERGENCE,
            _ => EXIT_VALIDATION,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<NumError> for Failure {
    fn from(e: NumError) -> Self {
        Error::Num(e).into()
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_VALIDATION, message: msg.into() }
}

fn real(bits: u32, s: &str, name: &str) -> Result<Float, Failure> {
    let p = Float::parse(s.trim()).map_err(|_| invalid(format!("--{name}: cannot parse {s:?} as a real number")))?;
    Ok(Float::with_val(bits, p))
}

fn positive(bits: u32, s: &str, name: &str) -> Result<Float, Failure> {
    let x = real(bits, s, name)?;
    if x <= 0 {
        return Err(invalid(format!("--{name} must be positive")));
    }
    Ok(x)
}

fn range(tmin: i64, tmax: i64) -> Result<(), Failure> {
    if tmin > tmax {
        return Err(invalid(format!("empty range {tmin}..={tmax}")));
    }
    if tmax.abs().max(tmin.abs()) > 1_000_000 {
        return Err(invalid("|t| is limited to 10^6"));
    }
    Ok(())
}

/// Runs the parsed command inside the requested thread pool.
pub fn run(cli: &Cli) -> Result<Report, Failure> {
    let c = cli.common.clone();
    let cmd = cli.command.clone();
    phi_core::par::with_threads(c.threads, move || dispatch(&c, &cmd))
}

/// The exit code for a finished report.
pub fn exit_code(r: &Report) -> i32 {
    match r.status {
        Status::Ok => EXIT_OK,
        Status::ToleranceFailure => EXIT_TOLERANCE,
    }
}

pub fn render(r: &Report, f: Format) -> String {
    match f {
        Format::Json => r.json(),
        Format::Csv => r.csv(),
        Format::Text => r.text(),
    }
}

fn dispatch(c: &Common, cmd: &Command) -> Result<Report, Failure> {
    let ctx = FieldContext::new(c.q, c.bits)?;
    let mut r = match cmd {
        Command::Coeffs { tmin, tmax, tau_v } => coeffs(&ctx, c.bits, *tmin, *tmax, tau_v)?,
        Command::Eval { tau_u, tau_v, nmax } => eval(&ctx, c.bits, tau_u, tau_v, *nmax)?,
        Command::Oracle { s, tau_v, tmax, tolerance } => oracle(&ctx, c.bits, s, tau_v, *tmax, *tolerance)?,
        Command::Mellin { s, nmax, tolerance } => mellin(&ctx, c.bits, s, *nmax, *tolerance)?,
        Command::Degz { tmax } => degz(&ctx, *tmax)?,
        Command::Arakelov { tmin, tmax, tau_v } => arakelov(&ctx, c.bits, *tmin, *tmax, tau_v)?,
        Command::Gz { d, tolerance } => gz(&ctx, c.bits, *d, *tolerance)?,
        Command::Selftest { quick } => selftest(c.bits, *quick)?,
    };
    r.config.insert("q".into(), Cell::Int(c.q as i64));
    r.config.insert("bits".into(), Cell::Int(c.bits as i64));
    Ok(r)
}

fn coeffs(ctx: &FieldContext, bits: u32, tmin: i64, tmax: i64, tau_v: &str) -> Result<Report, Failure> {
    range(tmin, tmax)?;
    let v = positive(bits, tau_v, "tau-v")?;
    let mut r = Report::new("coeffs", &["t", "value", "exact", "case", "prime", "v_dependent"]);
    r.config.insert("tmin".into(), Cell::Int(tmin));
    r.config.insert("tmax".into(), Cell::Int(tmax));
    r.config.insert("tau_v".into(), Cell::real(&v, bits));
    let rows = phi_core::par::map_range(Exec::default(), tmin, tmax, |t| -> Result<Vec<Cell>, Failure> {
        Ok(match t {
            0 => vec![Cell::Int(0), Cell::real(&coeff_constant(ctx, &v)?, bits), Cell::Null, Cell::Text("constant".into()), Cell::Null, Cell::Bool(true)],
            t if t > 0 => {
                let a = coeff_positive_exact(ctx, t)?;
                let ps: Vec<u64> = a.terms().map(|(p, _)| p).collect();
                let prime = if ps.len() == 1 { Some(ps[0]) } else { None };
                vec![Cell::Int(t), Cell::real(&a.eval(bits), bits), Cell::exact(&a), Cell::Text("finite".into()), Cell::opt_int(prime), Cell::Bool(false)]
            }
            t => vec![Cell::Int(t), Cell::real(&coeff_negative(ctx, -t, &v)?, bits), Cell::Null, Cell::Text("archimedean".into()), Cell::Null, Cell::Bool(true)],
        })
    });
    r.rows = rows.into_iter().collect::<Result<_, _>>()?;
    Ok(r)
}

fn eval(ctx: &FieldContext, bits: u32, tau_u: &str, tau_v: &str, nmax: u64) -> Result<Report, Failure> {
    let tau = HalfPlanePoint::new(real(bits, tau_u, "tau-u")?, positive(bits, tau_v, "tau-v")?)?;
    let exp = PhiExpansion::new(ctx, nmax, Exec::default())?;
    let val = exp.eval(ctx, &tau)?;
    let mut r = Report::new("eval", &[]);
    r.config.insert("tau_u".into(), Cell::real(&tau.u, bits));
    r.config.insert("tau_v".into(), Cell::real(&tau.v, bits));
    r.config.insert("nmax".into(), Cell::Int(nmax as i64));
    r.summary.insert("re".into(), Cell::real(&val.value.re, bits));
    r.summary.insert("im".into(), Cell::real(&val.value.im, bits));
    r.summary.insert("tail_bound".into(), Cell::real(&val.tail_bound, 32));
    Ok(r)
}

fn oracle(ctx: &FieldContext, bits: u32, s: &str, tau_v: &str, tmax: i64, tol: f64) -> Result<Report, Failure> {
    let s = real(bits, s, "s")?;
    if s <= 1 {
        return Err(invalid("oracle needs s > 1: the lattice sum diverges otherwise"));
    }
    let v = positive(bits, tau_v, "tau-v")?;
    if !(1..=64).contains(&tmax) {
        return Err(invalid("oracle needs 1 ≤ tmax ≤ 64"));
    }
    if !(tol > 0.0) {
        return Err(invalid("--tolerance must be positive"));
    }
    let ts: Vec<i64> = (-tmax..=tmax).filter(|&t| t != 0).collect();
    let panels = (2 * tmax as u64 + 2).next_power_of_two().max(32);
    let window = window_for_tolerance(ctx, &v, &s, &ts, tol / 10.0);
    let got = fourier_extract_many(ctx, &v, &s, &ts, window, panels, Exec::default())?;
    let tt = HalfPlanePoint::new(Float::new(bits), v.clone())?;
    let norm = Float::with_val(bits, v.recip_sqrt_ref());
    let mut r = Report::new("oracle", &["t", "direct_re", "direct_im", "product_re", "product_im", "gap", "tail_bound"]);
    r.config.insert("s".into(), Cell::real(&s, bits));
    r.config.insert("tau_v".into(), Cell::real(&v, bits));
    r.config.insert("tmax".into(), Cell::Int(tmax));
    r.config.insert("tolerance".into(), Cell::Text(format!("{tol:e}")));
    let mut worst = 0f64;
    for (&t, (c, bound)) in ts.iter().zip(&got) {
        let p = coefficient_product(ctx, &tt, t, &s)?.scale(&norm);
        let gap = (c - &p).abs();
        worst = worst.max(gap.to_f64());
        r.rows.push(vec![Cell::Int(t), Cell::real(&c.re, bits), Cell::real(&c.im, bits), Cell::real(&p.re, bits), Cell::real(&p.im, bits), Cell::real(&gap, 32), Cell::real(bound, 32)]);
    }
    r.summary.insert("window".into(), Cell::Int(window as i64));
    r.summary.insert("panels".into(), Cell::Int(panels as i64));
    r.summary.insert("max_gap".into(), Cell::Text(format!("{worst:e}")));
    if !(worst < tol) {
        r.status = Status::ToleranceFailure;
    }
    Ok(r)
}

fn mellin(ctx: &FieldContext, bits: u32, s: &str, nmax: u64, tol: f64) -> Result<Report, Failure> {
    let s = real(bits, s, "s")?;
    if s <= 1 {
        return Err(invalid("the Mellin transform converges for s > 1"));
    }
    let m = mellin_quadrature(ctx, &s, nmax, MellinOptions::default())?;
    let c = mellin_closed(ctx, &s)?;
    let e = rel_err(&m.value, &c);
    let mut r = Report::new("mellin", &[]);
    r.config.insert("s".into(), Cell::real(&s, bits));
    r.config.insert("nmax".into(), Cell::Int(nmax as i64));
    r.config.insert("tolerance".into(), Cell::Text(format!("{tol:e}")));
    r.summary.insert("quadrature".into(), Cell::real(&m.value, bits));
    r.summary.insert("closed".into(), Cell::real(&c, bits));
    r.summary.insert("head_holomorphic".into(), Cell::real(&m.head_holomorphic, bits));
    r.summary.insert("head_nonholomorphic".into(), Cell::real(&m.head_nonholomorphic, bits));
    r.summary.insert("tail_holomorphic".into(), Cell::real(&m.tail_holomorphic, bits));
    r.summary.insert("tail_nonholomorphic".into(), Cell::real(&m.tail_nonholomorphic, bits));
    r.summary.insert("rel_err".into(), Cell::real(&e, 32));
    if !(e.to_f64() < tol) {
        r.status = Status::ToleranceFailure;
    }
    Ok(r)
}

fn degz(ctx: &FieldContext, tmax: i64) -> Result<Report, Failure> {
    range(1, tmax)?;
    let mut r = Report::new("degz", &["t", "lattice", "closed", "equal"]);
    r.config.insert("tmax".into(), Cell::Int(tmax));
    let rows = phi_core::par::map_range(Exec::default(), 1, tmax, |t| -> Result<_, Failure> { Ok((t, deg_z_lattice(ctx, t)?, deg_z_closed(ctx, t)?)) });
    let mut all = true;
    for row in rows {
        let (t, a, b) = row?;
        all &= a == b;
        r.rows.push(vec![Cell::Int(t), Cell::exact(&a), Cell::exact(&b), Cell::Bool(a == b)]);
    }
    r.summary.insert("all_equal".into(), Cell::Bool(all));
    if !all {
        r.status = Status::ToleranceFailure;
    }
    Ok(r)
}

fn arakelov(ctx: &FieldContext, bits: u32, tmin: i64, tmax: i64, tau_v: &str) -> Result<Report, Failure> {
    range(tmin, tmax)?;
    let v = positive(bits, tau_v, "tau-v")?;
    let mut r = Report::new("arakelov", &["t", "place", "class", "multiplicity", "value"]);
    r.config.insert("tmin".into(), Cell::Int(tmin));
    r.config.insert("tmax".into(), Cell::Int(tmax));
    r.config.insert("tau_v".into(), Cell::real(&v, bits));
    let form = |f: &phi_core::ReducedForm| Cell::Text(format!("({},{},{})", f.a, f.b, f.c));
    for t in (tmin..=tmax).filter(|&t| t != 0) {
        if t > 0 {
            let d = arakelov_finite(ctx, t)?;
            for (&(p, f), &n) in &d.finite_part {
                let val = Float::with_val(bits, p).ln() * n;
                r.rows.push(vec![Cell::Int(t), Cell::Int(p as i64), form(&f), Cell::Int(n as i64), Cell::real(&val, bits)]);
            }
        } else {
            let d = arakelov_archimedean(ctx, t, &v)?;
            for (f, x) in &d.archimedean_part {
                r.rows.push(vec![Cell::Int(t), Cell::Text("inf".into()), form(f), Cell::Int(d.arch_counts[f] as i64), Cell::real(x, bits)]);
            }
        }
    }
    Ok(r)
}

fn gz(ctx: &FieldContext, bits: u32, d: u64, tol: f64) -> Result<Report, Failure> {
    let g = gross_zagier_check(ctx, d, bits, Exec::default())?;
    let mut r = Report::new("gz", &[]);
    r.config.insert("d".into(), Cell::Int(d as i64));
    r.config.insert("tolerance".into(), Cell::Text(format!("{tol:e}")));
    r.summary.insert("j".into(), Cell::Text(g.product.nearest_integer.to_string()));
    r.summary.insert("integrality_gap".into(), Cell::real(&g.product.integrality_gap, 32));
    r.summary.insert("lhs".into(), Cell::real(&g.lhs, bits));
    r.summary.insert("rhs".into(), Cell::real(&g.rhs, bits));
    r.summary.insert("gap".into(), Cell::real(&g.gap, 32));
    r.summary.insert("sum_all_n".into(), Cell::exact(&g.sum_all_n));
    r.summary.insert("sum_nonneg_n".into(), Cell::exact(&g.sum_nonneg_n));
    r.summary.insert("gap_all_n_literal".into(), Cell::real(&g.gap_all_n_literal, 32));
    r.summary.insert("gap_nonneg_n_literal".into(), Cell::real(&g.gap_nonneg_n_literal, 32));
    r.summary.insert("genus_exponent".into(), Cell::exact(&g.genus_exponent));
    r.summary.insert("genus_gap".into(), Cell::real(&g.genus_gap, 32));
    if !(g.gap.to_f64() < tol) {
        r.status = Status::ToleranceFailure;
    }
    Ok(r)
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn selftest(bits: u32, quick: bool) -> Result<Report, Failure> {
    let scale = if quick { 1 } else { 4 };
    let qs: &[u64] = if quick { &[7, 11] } else { &[7, 11, 19, 23, 31] };
    let mut checks = Vec::new();

    let mut bad = 0;
    for &q in qs {
        let k = FieldContext::new(q, 64)?;
        bad += (1..=250 * scale).filter(|&n| k.rho(n).ok() != Some(k.rho_brute(n))).count();
    }
    checks.push(Check { name: "rho_vs_brute_force", pass: bad == 0, detail: format!("{bad} mismatches") });

    let mut bad = 0;
    for &q in qs {
        let k = FieldContext::new(q, 64)?;
        for t in 1..=150 * scale {
            let a = deg_z_lattice(&k, t)?;
            if a != deg_z_closed(&k, t)? || a != coeff_positive_exact(&k, t)? || arakelov_finite(&k, t)?.finite_degree() != a {
                bad += 1;
            }
        }
    }
    checks.push(Check { name: "degree_routes", pass: bad == 0, detail: format!("{bad} mismatches") });

    let tt = HalfPlanePoint::new(Float::with_val(bits, 0.15), Float::with_val(bits, 0.9))?;
    let zero = Float::new(bits);
    let eps = Float::with_val(bits, Float::i_exp(1, 8 - bits as i32));
    let (mut nonzero, mut fe) = (0, 0f64);
    for &q in qs {
        let k = FieldContext::new(q, bits)?;
        for t in (-10 * scale..=10 * scale).filter(|&t| t != 0) {
            if coefficient_product(&k, &tt, t, &zero)?.abs() > eps {
                nonzero += 1;
            }
        }
        let s = Float::with_val(bits, 0.4);
        let ms = Float::with_val(bits, -&s);
        for t in [-3, -1, 1, 2, 5] {
            for m in [ArchMethod::Closed, ArchMethod::Quadrature] {
                let a = coefficient_product_with(&k, &tt, t, &s, m)?;
                let b = coefficient_product_with(&k, &tt, t, &ms, m)?;
                fe = fe.max((&a + &b).abs().to_f64());
            }
        }
        fe = fe.max(Float::with_val(bits, constant_term(&k, &tt, &s)? + constant_term(&k, &tt, &ms)?).abs().to_f64());
    }
    checks.push(Check { name: "central_vanishing_and_antisymmetry", pass: nonzero == 0 && fe < 1e-8, detail: format!("{nonzero} nonzero, residual {fe:e}") });

    let mut worst = 0f64;
    let tt = HalfPlanePoint::new(Float::with_val(bits, 0.3), Float::with_val(bits, 1.1))?;
    for s in [0.5, 1.0, 2.0] {
        let s = Float::with_val(bits, s);
        for t in [-3, -1, 1, 2, 5] {
            let a = arch_factor(&tt, t, &s)?;
            let b = arch_factor_quadrature(&tt, t, &s)?;
            worst = worst.max(((&a - &b).abs() / a.abs()).to_f64());
        }
    }
    checks.push(Check { name: "archimedean_quadrature", pass: worst < 1e-10, detail: format!("max rel err {worst:e}") });

    let mut bad = 0;
    let v = Float::with_val(bits, 0.85);
    for &q in qs {
        let k = FieldContext::new(q, bits)?;
        let n = 60 * scale;
        let exp = PhiExpansion::new(&k, n as u64, Exec::default())?;
        for t in 1..=n {
            if exp.positive[t as usize - 1] != deg_z_lattice(&k, t)? || exp.coefficient(&k, -t, &v)? != arakelov_archimedean(&k, -t, &v)?.archimedean_degree(bits) {
                bad += 1;
            }
        }
    }
    checks.push(Check { name: "expansion_vs_divisors", pass: bad == 0, detail: format!("{bad} mismatches") });

    let k = FieldContext::new(7, bits)?;
    let ss: &[f64] = if quick { &[2.0] } else { &[1.5, 2.0, 3.0] };
    let mut worst = 0f64;
    for &s in ss {
        let s = Float::with_val(bits, s);
        let m = mellin_quadrature(&k, &s, 200, MellinOptions::default())?;
        worst = worst.max(rel_err(&m.value, &mellin_closed(&k, &s)?).to_f64());
    }
    checks.push(Check { name: "mellin_identity", pass: worst < 1e-5, detail: format!("max rel err {worst:e}") });

    if !quick {
        let v = Float::with_val(bits, 1);
        let s = Float::with_val(bits, 3);
        let ts: Vec<i64> = (-3..=3).filter(|&t| t != 0).collect();
        let a = window_for_tolerance(&k, &v, &s, &ts, 1e-7);
        let got = fourier_extract_many(&k, &v, &s, &ts, a, 32, Exec::default())?;
        let tt = HalfPlanePoint::new(Float::new(bits), v.clone())?;
        let mut worst = 0f64;
        for (&t, (c, _)) in ts.iter().zip(&got) {
            let p = coefficient_product(&k, &tt, t, &s)?;
            worst = worst.max((c - &p).abs().to_f64());
        }
        checks.push(Check { name: "direct_sum_oracle", pass: worst < 1e-6, detail: format!("max gap {worst:e}") });
    }

    // the genus form of the singular-moduli factorization, then the coefficient form
    let pairs: &[(u64, u64)] = if quick { &[(7, 8), (7, 11)] } else { &[(7, 8), (7, 11), (11, 8), (19, 8)] };
    let (mut genus, mut coeff) = (0f64, 0f64);
    for &(q, d) in pairs {
        let k = FieldContext::new(q, 512)?;
        let g = gross_zagier_check(&k, d, 512, Exec::default())?;
        genus = genus.max(g.genus_gap.to_f64());
        coeff = coeff.max(g.gap.to_f64());
    }
    checks.push(Check { name: "singular_moduli_genus_form", pass: genus < 1e-12, detail: format!("max gap {genus:e}") });
    checks.push(Check { name: "singular_moduli_coefficient_sum", pass: coeff < 1e-12, detail: format!("max gap {coeff:e}") });

    let mut r = Report::new("selftest", &["check", "pass", "detail"]);
    r.config.insert("quick".into(), Cell::Bool(quick));
    let failed = checks.iter().filter(|c| !c.pass).count();
    for c in checks {
        r.rows.push(vec![Cell::Text(c.name.into()), Cell::Bool(c.pass), Cell::Text(c.detail)]);
    }
    r.summary.insert("failed".into(), Cell::Int(failed as i64));
    if failed > 0 {
        r.status = Status::ToleranceFailure;
    }
    Ok(r)
}
