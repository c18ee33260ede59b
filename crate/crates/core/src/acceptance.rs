//! The acceptance matrix: one function per criterion, each returning a
//! pass/fail line. Criterion 9 is informational and never gates.

use std::f64::consts::PI;
use std::time::Instant;

use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64;
use serde_json::Value;

use crate::arith::{gamma_dm, gcd_conv, lambda_fsz, verify_master, verify_s1_s2};
use crate::bezout::{bezout_conjugator, bezout_table, BezoutContext};
use crate::cft::{
    appendix_c_form, character_identities, conformal_z_numeric, full_z_series, modular_rep_check,
    on_series, s_matrix, t_matrix, z_hv_bezout, z_hv_direct, z_hv_u1, AppendixForm, AppendixTerm,
    TauPoint,
};
use crate::error::{Error, Result};
use crate::lattice::{Alphas, CensusTable, ModelKind, ModelSpec};
use crate::series::{int, rat, Rational};
use crate::transfer::{build_transfer, c_table, markov_z_from_traces, spectrum};

const SESQ_FORMS: &str = include_str!("../tests/fixtures/sesquilinear_forms.json");
const BEZOUT_FIGURES: &str = include_str!("../tests/fixtures/bezout_figures.json");

pub const SERIES_PAIRS: [(i64, i64); 6] = [(1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)];
pub const SECTORS: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub gating: bool,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let tag = match (self.passed, self.gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "INFO",
        };
        format!(
            "[{tag}] criterion {} {}: {} ({:.2}s)",
            self.id, self.name, self.detail, self.seconds
        )
    }
}

pub const NAMES: [&str; 9] = [
    "lattice-vs-markov",
    "triple-series-identity",
    "appendix-c-forms",
    "gamma-half-lambda",
    "full-pf-vs-on",
    "modular-covariance",
    "bezout-figures",
    "character-identities",
    "scaling-central-charge",
];

pub fn run(id: u8) -> CriterionResult {
    let start = Instant::now();
    let out = match id {
        1 => criterion1(),
        2 => criterion2(),
        3 => criterion3(),
        4 => criterion4(),
        5 => criterion5(),
        6 => criterion6(),
        7 => criterion7(),
        8 => criterion8(),
        9 => criterion9(),
        _ => Err(Error::InvalidParameter(format!("no criterion {id}"))),
    };
    let (passed, detail) = match out {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id,
        name: NAMES.get(id as usize - 1).copied().unwrap_or("?"),
        gating: id != 9,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=9).map(run).collect()
}

fn criterion1() -> Result<(bool, String)> {
    let dense = [(2, 2), (2, 4), (3, 3), (4, 4), (3, 4)];
    let dilute = [(1, 2), (2, 2), (2, 3), (3, 3)];
    let tori = dense
        .iter()
        .map(|&t| (ModelKind::Dense, t))
        .chain(dilute.iter().map(|&t| (ModelKind::Dilute, t)));
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for (kind, (m, n)) in tori {
        let census = CensusTable::build(kind, m, n)?;
        for (p, pq) in [(1, 2), (2, 3), (3, 4)] {
            let iso = ModelSpec::isotropic(kind, p, pq)?;
            for u in [iso.u, 0.37] {
                let spec = ModelSpec::new(kind, p, pq, u)?;
                let table = c_table(&spec, n, m as u32)?;
                for (h, v) in SECTORS {
                    if kind == ModelKind::Dense && (h as usize, v as usize) != (n % 2, m % 2) {
                        continue;
                    }
                    for alpha in [1.0, 2.0, 0.6] {
                        let zl = census.z(&spec, Some((h, v)), &Alphas::Uniform(alpha))?;
                        let zm = markov_z_from_traces(&table, h, v, alpha)?;
                        worst = worst.max((zm - zl).abs() / (1.0 + zl.abs()));
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok((
        worst < 1e-9,
        format!("{checked} comparisons, max relative deviation {worst:.3e}"),
    ))
}

fn criterion2() -> Result<(bool, String)> {
    let cutoff = int(10);
    let mut bad = Vec::new();
    let mut terms = 0;
    for (p, pq) in SERIES_PAIRS {
        for (h, v) in SECTORS {
            let d = z_hv_direct(p, pq, h, v, &cutoff)?;
            let u = z_hv_u1(p, pq, h, v, &cutoff)?;
            let b = z_hv_bezout(p, pq, h, v, &cutoff)?;
            terms += d.len();
            if d != u || d != b {
                bad.push(format!("({p},{pq})({h},{v})"));
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!("24 sectors through cutoff 10, {terms} direct terms, mismatches {bad:?}"),
    ))
}

fn parse_i64(v: &Value, k: &str) -> Result<i64> {
    v.get(k)
        .and_then(Value::as_i64)
        .ok_or_else(|| Error::Internal(format!("fixture field {k} missing")))
}

pub fn golden_forms() -> Result<Vec<AppendixForm>> {
    let data: Value =
        serde_json::from_str(SESQ_FORMS).map_err(|e| Error::Internal(e.to_string()))?;
    let blocks = data
        .as_array()
        .ok_or_else(|| Error::Internal("fixture is not a list".into()))?;
    let mut out = Vec::new();
    for b in blocks {
        let mut terms = Vec::new();
        for t in b["terms"].as_array().into_iter().flatten() {
            terms.push(AppendixTerm {
                coeff: int(parse_i64(t, "coeff")?),
                left2: parse_i64(t, "left2")?,
                right2: parse_i64(t, "right2")?,
                z: parse_i64(t, "z")? as i8,
            });
        }
        out.push(AppendixForm::from_terms(
            parse_i64(b, "p")?,
            parse_i64(b, "pq")?,
            parse_i64(b, "h")? as u8,
            parse_i64(b, "v")? as u8,
            &terms,
        ));
    }
    Ok(out)
}

fn criterion3() -> Result<(bool, String)> {
    let golden = golden_forms()?;
    let cutoff = int(10);
    let mut bad = Vec::new();
    for g in &golden {
        let f = appendix_c_form(g.p, g.pq, g.h, g.v)?;
        let tag = format!("({},{})({},{})", g.p, g.pq, g.h, g.v);
        if f != *g {
            bad.push(format!("{tag} term set"));
            continue;
        }
        let direct = z_hv_direct(g.p, g.pq, g.h, g.v, &cutoff)?;
        if f.expand(&cutoff) != direct {
            bad.push(format!("{tag} expansion"));
        }
    }
    Ok((
        bad.is_empty() && golden.len() == 24,
        format!("{} golden forms, mismatches {bad:?}", golden.len()),
    ))
}

fn criterion4() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for d in 1..=30u64 {
        for m in 1..=d as i64 {
            let big_n = d / gcd_conv(m, d as i64);
            for gamma in [0.0, 0.3, 1.0, 2.6, PI - 0.1] {
                let a = gamma_dm(d, m, gamma)?;
                let b = 0.5 * lambda_fsz(d, big_n, gamma / PI)?;
                worst = worst.max((a - b).abs());
            }
        }
    }
    let s1s2 = (1..=12).all(|d| verify_s1_s2(d, 25).holds());
    let master = (1..=10).all(|a| (1..=50).all(|l| verify_master(a, l)));
    Ok((
        worst < 1e-10 && s1s2 && master,
        format!("max |Gamma - Lambda/2| = {worst:.3e}, S1=S2 {s1s2}, master identity {master}"),
    ))
}

fn criterion5() -> Result<(bool, String)> {
    let cutoff = int(8);
    let mut bad = Vec::new();
    let gs: [Rational; 3] = [int(0), rat(1, 3), rat(2, 5)];
    for (p, pq) in [(1, 2), (2, 3), (3, 4)] {
        for g in &gs {
            let f = full_z_series(p, pq, g, &cutoff)?;
            let o = on_series(&rat(p, pq), g, &cutoff)?.swap();
            if f != o {
                bad.push(format!("({p},{pq}) g={g}"));
            }
        }
    }
    Ok((bad.is_empty(), format!("9 cases through cutoff 8, mismatches {bad:?}")))
}

pub fn criterion6_taus() -> Vec<TauPoint> {
    [(0.1, 0.9), (-0.4, 1.3), (0.5, 0.5)]
        .iter()
        .map(|&(a, b)| TauPoint { tau: Complex64::new(a, b) })
        .collect()
}

fn apply(mat: &[[i64; 4]; 4], z: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (i, row) in mat.iter().enumerate() {
        out[i] = row.iter().zip(z).map(|(a, b)| *a as f64 * b).sum();
    }
    out
}

fn criterion6() -> Result<(bool, String)> {
    let taus = criterion6_taus();
    let mut worst: f64 = 0.0;
    for (p, pq) in SERIES_PAIRS {
        let g = p as f64 / pq as f64;
        for alpha in [2.0, 1.2] {
            for tau in &taus {
                let vec_at = |t: &TauPoint| {
                    let mut z = [0.0; 4];
                    for (i, (h, v)) in SECTORS.iter().enumerate() {
                        z[i] = conformal_z_numeric(g, alpha, *h, *v, t, 40);
                    }
                    z
                };
                let z0 = vec_at(tau);
                let zt = vec_at(&tau.plus_one());
                let zs = vec_at(&tau.s_dual());
                let (tz, sz) = (apply(&t_matrix(), &z0), apply(&s_matrix(), &z0));
                for i in 0..4 {
                    worst = worst.max((zt[i] - tz[i]).abs() / tz[i].abs().max(1e-300));
                    worst = worst.max((zs[i] - sz[i]).abs() / sz[i].abs().max(1e-300));
                }
            }
        }
    }
    let rep = modular_rep_check(&[2, 6, 12], &taus);
    Ok((
        worst < 1e-8 && rep.passed(1e-8),
        format!(
            "max relative error {worst:.3e}; S^2={} (ST)^3={} T^2={}; character S/T errors {:.1e}/{:.1e}; T-sign {}",
            rep.s2_identity, rep.st3_identity, rep.t2_identity, rep.char_s_max_err, rep.char_t_max_err, rep.tsign_ok
        ),
    ))
}

/// Cells of the figures known to be misprinted: (p,p′,h,r,s) with the printed pair.
pub const FIGURE_MISPRINTS: [((i64, i64, u8, i64, i64), (i64, i64)); 2] =
    [((3, 4, 0, 5, 7), (46, 14)), ((4, 5, 1, 0, 2), (66, 20))];

fn criterion7() -> Result<(bool, String)> {
    let panels = [
        ((3, 4, 0, 0), 7),
        ((3, 4, 1, 1), 31),
        ((3, 5, 0, 0), 19),
        ((3, 5, 1, 1), 19),
        ((4, 5, 0, 0), 9),
        ((4, 5, 1, 0), 29),
    ];
    let mut ok = true;
    let mut conj = Vec::new();
    for ((p, pq, h, v), w) in panels {
        let c = bezout_conjugator(&BezoutContext::new(p, pq, h, v)?)?;
        conj.push(c.omega0);
        ok &= c.omega0 == w;
    }
    let cells: Value =
        serde_json::from_str(BEZOUT_FIGURES).map_err(|e| Error::Internal(e.to_string()))?;
    let mut per_panel = std::collections::BTreeMap::new();
    let mut misprints = Vec::new();
    for c in cells.as_array().into_iter().flatten() {
        let (p, pq) = (parse_i64(c, "p")?, parse_i64(c, "pq")?);
        let (h, v) = (parse_i64(c, "h")? as u8, parse_i64(c, "v")? as u8);
        let (r, s) = (parse_i64(c, "r")?, parse_i64(c, "s")?);
        let ctx = BezoutContext::new(p, pq, h, v)?;
        let want = (parse_i64(c, "label2")?, parse_i64(c, "conj2")?);
        let got = (ctx.label2(r, s), ctx.conj2(r, s));
        let key = (p, pq, h);
        let e = per_panel.entry(key).or_insert((0usize, 0usize));
        if got == want {
            e.0 += 1;
        } else {
            e.1 += 1;
            misprints.push(((p, pq, h, r, s), want));
        }
    }
    // the fundamental domain cells come from the table itself
    for ((p, pq, h, v), _) in panels {
        let ctx = BezoutContext::new(p, pq, h, v)?;
        let t = bezout_table(&ctx)?;
        ok &= t.entries.len() as i64 == ctx.big_p;
    }
    let known = misprints.iter().all(|m| FIGURE_MISPRINTS.contains(m));
    ok &= per_panel.len() == 6 && per_panel.values().all(|(good, _)| *good >= 6) && known;
    let summary: Vec<String> = per_panel
        .iter()
        .map(|((p, pq, h), (g, b))| format!("({p},{pq})h={h}:{g}/{}", g + b))
        .collect();
    Ok((
        ok,
        format!(
            "conjugators {conj:?}; cells {}; misprints {} (all documented: {known})",
            summary.join(" "),
            misprints.len()
        ),
    ))
}

fn criterion8() -> Result<(bool, String)> {
    let cutoff = int(12);
    let mut total = 0;
    let mut bad = Vec::new();
    for n in [2, 6, 12, 15, 20] {
        for r in character_identities(n, &cutoff) {
            total += r.checked;
            if !r.failed.is_empty() {
                bad.push(format!("n={n} {}: {}", r.name, r.failed.len()));
            }
        }
    }
    Ok((bad.is_empty(), format!("{total} exact identities, failures {bad:?}")))
}

/// Largest ω = 1 eigenvalue over the even-defect modules of the dense (2,3)
/// model at the isotropic point.
pub fn leading_eigenvalue(n: usize) -> Result<f64> {
    let spec = ModelSpec::isotropic(ModelKind::Dense, 2, 3)?;
    let mut best: f64 = 0.0;
    for d in (0..=n).step_by(2) {
        let op = build_transfer(&spec, n, d)?;
        for z in spectrum(&op, 1.0)? {
            best = best.max(z.norm());
        }
    }
    Ok(best)
}

fn criterion9() -> Result<(bool, String)> {
    let ns = [6usize, 8, 10];
    let mut a = Mat::<f64>::zeros(3, 3);
    let mut y = Mat::<f64>::zeros(3, 1);
    for (i, &n) in ns.iter().enumerate() {
        let nf = n as f64;
        a[(i, 0)] = nf;
        a[(i, 1)] = 1.0 / nf;
        a[(i, 2)] = 1.0 / nf.powi(3);
        y[(i, 0)] = leading_eigenvalue(n)?.ln();
    }
    let sol = a.partial_piv_lu().solve(&y);
    let b = sol[(1, 0)];
    if !b.is_finite() {
        return Err(Error::Internal("singular fit".into()));
    }
    let spec = ModelSpec::isotropic(ModelKind::Dense, 2, 3)?;
    let c_eff = 6.0 * b / (PI * spec.theta().sin());
    Ok((
        c_eff.abs() <= 0.15,
        format!("fitted c_eff = {c_eff:.4} from N = 6, 8, 10 (target 0 within 0.15; non-gating)"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_fixture_loads() {
        let g = golden_forms().unwrap();
        assert_eq!(g.len(), 24);
    }

    #[test]
    fn figure_criterion() {
        let r = run(7);
        assert!(r.passed, "{}", r.line());
    }

    #[test]
    fn line_format() {
        let r = CriterionResult {
            id: 9,
            name: NAMES[8],
            gating: false,
            passed: false,
            detail: "x".into(),
            seconds: 0.0,
        };
        assert!(r.line().starts_with("[INFO] criterion 9"));
    }
}
