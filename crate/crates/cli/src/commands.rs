use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde_json::{json, Value};
use torusloop::acceptance;
use torusloop::arith::{
    divisors, gamma_dm, gcd_conv, lambda_fsz, someeq_sides, sum_lambda2_sides, verify_master,
    verify_s1_s2,
};
use torusloop::bezout::{bezout_conjugator, bezout_table, kac_table_text, BezoutContext};
use torusloop::cft::{
    appendix_c_form, conformal_z_numeric, full_z_series, on_series, s_matrix, t_matrix,
    verma_trace_series, z_hv_bezout, z_hv_direct, z_hv_u1, TauPoint,
};
use torusloop::lattice::{Alphas, CensusTable, ModelKind, ModelSpec};
use torusloop::series::{fmt_rat, parse_rat, rat};
use torusloop::transfer::{build_transfer, c_table, markov_z_from_traces, spectrum};
use torusloop::{BiSeries, Coeff, Error};

use crate::{Cli, Command, Form, Format, IdentityCheck, Model};

const SECTORS: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::InvalidParameter(_))
            | CliError::Core(Error::DenseSector { .. })
            | CliError::Core(Error::SizeGuard(_)) => 2,
            CliError::Core(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Res<T> = std::result::Result<T, CliError>;

pub struct Outcome {
    pub body: String,
    pub ok: bool,
}

fn done(body: String) -> Res<Outcome> {
    Ok(Outcome { body, ok: true })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

fn rational(s: &str, what: &str) -> Res<torusloop::Rational> {
    parse_rat(s).ok_or_else(|| CliError::Usage(format!("--{what}: cannot parse '{s}' as a rational")))
}

fn sector(h: u8, v: u8) -> Res<()> {
    if h > 1 || v > 1 {
        return Err(CliError::Usage("--h and --v must be 0 or 1".into()));
    }
    Ok(())
}

fn spec_of(m: &Model) -> Res<ModelSpec> {
    let kind: ModelKind = m.model.parse()?;
    let iso = ModelSpec::isotropic(kind, m.p, m.pq)?;
    Ok(ModelSpec::new(kind, m.p, m.pq, m.u.unwrap_or(iso.u))?)
}

pub fn dispatch(cli: &Cli) -> Res<Outcome> {
    let fmt = cli.common.format;
    match &cli.command {
        Command::Enumerate { model, m, n, alpha } => enumerate(fmt, model, *m, *n, *alpha),
        Command::Transfer {
            model,
            m,
            n,
            alpha,
            spectrum,
            omega,
        } => transfer(fmt, model, *m, *n, *alpha, *spectrum, *omega),
        Command::Series {
            p,
            pq,
            h,
            v,
            form,
            cutoff,
            gamma,
            d,
            eps,
            model,
        } => {
            sector(*h, *v)?;
            let cutoff = rational(cutoff, "cutoff")?;
            let gamma = rational(gamma, "gamma")?;
            match form {
                Form::Direct => series_out(fmt, &z_hv_direct(*p, *pq, *h, *v, &cutoff)?),
                Form::U1 => series_out(fmt, &z_hv_u1(*p, *pq, *h, *v, &cutoff)?),
                Form::Bezout => series_out(fmt, &z_hv_bezout(*p, *pq, *h, *v, &cutoff)?),
                Form::Verma => {
                    let kind: ModelKind = model.parse()?;
                    series_out(fmt, &verma_trace_series(kind, *p, *pq, *d, &gamma, *eps, &cutoff)?)
                }
                Form::Full => series_out(fmt, &full_z_series(*p, *pq, &gamma, &cutoff)?),
                Form::On => series_out(fmt, &on_series(&rat(*p, *pq), &gamma, &cutoff)?),
            }
        }
        Command::Identity { check, max_d, window } => identity(fmt, *check, *max_d, *window),
        Command::Bezout { p, pq, h, v, table } => bezout(fmt, *p, *pq, *h, *v, *table),
        Command::Modular {
            p,
            pq,
            alpha,
            tau,
            dmax,
        } => modular(fmt, *p, *pq, *alpha, tau, *dmax),
        Command::Appendixc { p, pq, h, v } => appendixc(fmt, *p, *pq, *h, *v),
        Command::Accept { suite, criterion } => accept(fmt, suite, *criterion),
    }
}

fn enumerate(fmt: Format, model: &Model, m: usize, n: usize, alpha: f64) -> Res<Outcome> {
    let spec = spec_of(model)?;
    let census = CensusTable::build(spec.kind, m, n)?;
    let alphas = Alphas::Uniform(alpha);
    let total = census.z(&spec, None, &alphas)?;
    let mut rows = Vec::new();
    for (h, v) in SECTORS {
        rows.push((h, v, census.z(&spec, Some((h, v)), &alphas)?));
    }
    let body = match fmt {
        Format::Json => pretty(&json!({
            "model": spec.kind.name(), "p": spec.p, "pq": spec.pq, "u": spec.u,
            "m": m, "n": n, "alpha": alpha, "configs": census.n_configs(), "z": total,
            "sectors": rows.iter().map(|(h, v, z)| json!({"h": h, "v": v, "z": z})).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("h,v,z\n");
            for (h, v, z) in &rows {
                s.push_str(&format!("{h},{v},{z:.17e}\n"));
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "{} ({},{}) u={} on {m}x{n}: {} configurations, Z = {total:.17e}\n",
                spec.kind.name(),
                spec.p,
                spec.pq,
                spec.u,
                census.n_configs()
            );
            for (h, v, z) in &rows {
                s.push_str(&format!("  Z^({h},{v}) = {z:.17e}\n"));
            }
            s
        }
    };
    done(body)
}

fn transfer(
    fmt: Format,
    model: &Model,
    m: u32,
    n: usize,
    alpha: f64,
    spec_d: Option<usize>,
    omega: f64,
) -> Res<Outcome> {
    let spec = spec_of(model)?;
    if let Some(d) = spec_d {
        if omega != 1.0 && omega != -1.0 {
            return Err(CliError::Usage("--omega must be 1 or -1".into()));
        }
        let op = build_transfer(&spec, n, d)?;
        let mut ev = spectrum(&op, omega)?;
        ev.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
        let body = match fmt {
            Format::Json => pretty(&json!({
                "n": n, "d": d, "omega": omega, "dim": op.dim(),
                "eigenvalues": ev.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
            })),
            _ => ev.iter().map(|z| format!("{:.17e} {:.17e}\n", z.re, z.im)).collect(),
        };
        return done(body);
    }
    let table = c_table(&spec, n, m)?;
    let mut rows = Vec::new();
    for (h, v) in SECTORS {
        match markov_z_from_traces(&table, h, v, alpha) {
            Ok(z) => rows.push((h, v, z)),
            Err(Error::DenseSector { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let body = match fmt {
        Format::Json => pretty(&json!({
            "model": spec.kind.name(), "p": spec.p, "pq": spec.pq, "u": spec.u,
            "m": m, "n": n, "alpha": alpha, "c_table": table.to_json(),
            "sectors": rows.iter().map(|(h, v, z)| json!({"h": h, "v": v, "z": z})).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("d,j,c\n");
            for (&(d, j), c) in &table.entries {
                s.push_str(&format!("{d},{j},{c:.17e}\n"));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (&(d, j), c) in &table.entries {
                s.push_str(&format!("C[{d},{j}] = {c:.17e}\n"));
            }
            for (h, v, z) in &rows {
                s.push_str(&format!("Z^({h},{v}) = {z:.17e}\n"));
            }
            s
        }
    };
    done(body)
}

fn series_out<C: Coeff>(fmt: Format, s: &BiSeries<C>) -> Res<Outcome> {
    let body = match fmt {
        Format::Json => pretty(&json!({"cutoff": fmt_rat(s.cutoff()), "terms": s.to_json()})),
        Format::Csv | Format::Text => {
            let sep = if fmt == Format::Csv { "," } else { " " };
            let mut out = format!("qexp{sep}qbarexp{sep}coeff\n");
            for ((a, b), c) in s.terms() {
                out.push_str(&format!("{}{sep}{}{sep}{}\n", fmt_rat(a), fmt_rat(b), c.render()));
            }
            out
        }
    };
    done(body)
}

fn identity(fmt: Format, check: IdentityCheck, max_d: u64, window: i64) -> Res<Outcome> {
    let gammas = [0.0, 0.3, 1.0, 2.6, PI - 0.1];
    let mut checked = 0usize;
    let mut max_err: f64 = 0.0;
    let mut ok = true;
    match check {
        IdentityCheck::GammaLambda => {
            for d in 1..=max_d {
                for m in 1..=d as i64 {
                    for g in gammas {
                        let a = gamma_dm(d, m, g)?;
                        let b = 0.5 * lambda_fsz(d, d / gcd_conv(m, d as i64), g / PI)?;
                        max_err = max_err.max((a - b).abs());
                        checked += 1;
                    }
                }
            }
            ok = max_err < 1e-10;
        }
        IdentityCheck::S1s2 => {
            for d in 1..=max_d {
                ok &= verify_s1_s2(d, window).holds();
                checked += 1;
            }
        }
        IdentityCheck::Master => {
            for a in 1..=10 {
                for l in 1..=max_d {
                    ok &= verify_master(a, l);
                    checked += 1;
                }
            }
        }
        IdentityCheck::Sumlambda2 | IdentityCheck::Someeq => {
            for d in 1..=max_d {
                for n in divisors(d) {
                    for g in gammas {
                        let (a, b) = if check == IdentityCheck::Sumlambda2 {
                            sum_lambda2_sides(d, n, g)?
                        } else {
                            someeq_sides(d, n, g)?
                        };
                        max_err = max_err.max((a - b).abs());
                        checked += 1;
                    }
                }
            }
            ok = max_err < 1e-10;
        }
    }
    let name = format!("{check:?}").to_lowercase();
    let body = match fmt {
        Format::Json => pretty(&json!({"check": name, "checked": checked, "max_error": max_err, "ok": ok})),
        _ => format!("{name}: {checked} cases, max error {max_err:.3e}, {}\n", if ok { "ok" } else { "FAILED" }),
    };
    Ok(Outcome { body, ok })
}

fn bezout(fmt: Format, p: i64, pq: i64, h: u8, v: u8, table: bool) -> Res<Outcome> {
    sector(h, v)?;
    let ctx = BezoutContext::new(p, pq, h, v)?;
    let conj = bezout_conjugator(&ctx)?;
    if table || fmt == Format::Text {
        let mut s = kac_table_text(&ctx);
        s.push_str(&format!("omega0={} (r0,s0)=({},{})\n", conj.omega0, conj.r0, conj.s0));
        return done(s);
    }
    let t = bezout_table(&ctx)?;
    let mut v = t.to_json();
    v["omega0"] = json!(conj.omega0);
    v["r0"] = json!(conj.r0);
    v["s0"] = json!(conj.s0);
    done(pretty(&v))
}

fn parse_tau(s: &str) -> Res<TauPoint> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("--tau expects re,im, got '{s}'")))?;
    let re: f64 = a.trim().parse().map_err(|_| CliError::Usage(format!("bad tau '{s}'")))?;
    let im: f64 = b.trim().parse().map_err(|_| CliError::Usage(format!("bad tau '{s}'")))?;
    TauPoint::new(Complex64::new(re, im)).map_err(|e| CliError::Usage(e.to_string()))
}

fn apply(mat: &[[i64; 4]; 4], z: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (i, row) in mat.iter().enumerate() {
        out[i] = row.iter().zip(z).map(|(a, b)| *a as f64 * b).sum();
    }
    out
}

fn modular(fmt: Format, p: i64, pq: i64, alpha: f64, taus: &[String], dmax: i64) -> Res<Outcome> {
    if p < 1 || pq < 1 || gcd_conv(p, pq) != 1 {
        return Err(CliError::Usage(format!("({p},{pq}) must be coprime positive integers")));
    }
    let taus: Vec<TauPoint> = if taus.is_empty() {
        acceptance::criterion6_taus()
    } else {
        taus.iter().map(|s| parse_tau(s)).collect::<Res<_>>()?
    };
    let g = p as f64 / pq as f64;
    let at = |t: &TauPoint| {
        let mut z = [0.0; 4];
        for (i, (h, v)) in SECTORS.iter().enumerate() {
            z[i] = conformal_z_numeric(g, alpha, *h, *v, t, dmax);
        }
        z
    };
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for t in &taus {
        let z = at(t);
        let (zt, zs) = (at(&t.plus_one()), at(&t.s_dual()));
        let (tz, sz) = (apply(&t_matrix(), &z), apply(&s_matrix(), &z));
        let mut et: f64 = 0.0;
        let mut es: f64 = 0.0;
        for i in 0..4 {
            et = et.max((zt[i] - tz[i]).abs() / tz[i].abs().max(1e-300));
            es = es.max((zs[i] - sz[i]).abs() / sz[i].abs().max(1e-300));
        }
        worst = worst.max(et).max(es);
        rows.push((t.tau, z, et, es));
    }
    let ok = worst < 1e-8;
    let body = match fmt {
        Format::Json => pretty(&json!({
            "p": p, "pq": pq, "alpha": alpha, "dmax": dmax, "max_relative_error": worst, "ok": ok,
            "points": rows.iter().map(|(t, z, et, es)| json!({
                "tau": [t.re, t.im], "Z": z, "err_T": et, "err_S": es,
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let mut s = String::new();
            for (t, z, et, es) in &rows {
                s.push_str(&format!(
                    "tau={:+.6}{:+.6}i Z=[{:.17e}, {:.17e}, {:.17e}, {:.17e}] errT={et:.2e} errS={es:.2e}\n",
                    t.re, t.im, z[0], z[1], z[2], z[3]
                ));
            }
            s
        }
    };
    Ok(Outcome { body, ok })
}

fn appendixc(fmt: Format, p: i64, pq: i64, h: Option<u8>, v: Option<u8>) -> Res<Outcome> {
    let mut forms = Vec::new();
    for (hh, vv) in SECTORS {
        if h.is_some_and(|x| x != hh) || v.is_some_and(|x| x != vv) {
            continue;
        }
        forms.push(appendix_c_form(p, pq, hh, vv)?);
    }
    if forms.is_empty() {
        return Err(CliError::Usage("--h and --v must be 0 or 1".into()));
    }
    let body = match fmt {
        Format::Json => pretty(&Value::Array(forms.iter().map(|f| f.to_json()).collect())),
        _ => forms
            .iter()
            .map(|f| format!("Z^({},{})({},{}) = {}\n", f.h, f.v, p, pq, f.render()))
            .collect(),
    };
    done(body)
}

fn accept(fmt: Format, suite: &str, criterion: Option<u8>) -> Res<Outcome> {
    if suite != "core" && suite != "all" {
        return Err(CliError::Usage(format!("unknown suite '{suite}' (core|all)")));
    }
    let ids: Vec<u8> = match criterion {
        Some(c) if (1..=9).contains(&c) => vec![c],
        Some(c) => return Err(CliError::Usage(format!("no criterion {c}"))),
        None => (1..=9).collect(),
    };
    let results: Vec<_> = ids.into_iter().map(acceptance::run).collect();
    let ok = results.iter().all(|r| r.passed || !r.gating);
    let body = match fmt {
        Format::Json => pretty(&json!({
            "ok": ok,
            "criteria": results.iter().map(|r| json!({
                "id": r.id, "name": r.name, "gating": r.gating, "passed": r.passed,
                "detail": r.detail, "seconds": r.seconds,
            })).collect::<Vec<_>>(),
        })),
        _ => results.iter().map(|r| r.line() + "\n").collect(),
    };
    Ok(Outcome { body, ok })
}
