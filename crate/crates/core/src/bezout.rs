//! Integer and half-integer Bezout conjugates.
//!
//! Labels are stored doubled: `2(j + h'/2)`, reduced into `[0, 2P)`.

use std::fmt::Write;

use serde_json::{json, Value};

use crate::arith::gcd_conv;
use crate::error::{Error, Result};
use crate::series::{rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BezoutContext {
    pub p: i64,
    pub pq: i64,
    pub h: u8,
    pub v: u8,
    pub n: i64,
    pub h_prime: u8,
    pub big_p: i64,
    pub kappa: i64,
}

impl BezoutContext {
    pub fn new(p: i64, pq: i64, h: u8, v: u8) -> Result<Self> {
        if p < 1 || pq < 1 || gcd_conv(p, pq) != 1 {
            return Err(Error::InvalidParameter(format!(
                "({p},{pq}) must be coprime positive integers"
            )));
        }
        if h > 1 || v > 1 {
            return Err(Error::InvalidParameter("h, v must be 0 or 1".into()));
        }
        let n = p * pq;
        let h_prime = (p % 2 == 1 && h == 1) as u8;
        let big_p = if (p * v as i64) % 2 == 0 { 2 * n } else { 4 * n };
        Ok(BezoutContext {
            p,
            pq,
            h,
            v,
            n,
            h_prime,
            big_p,
            kappa: big_p / (2 * n),
        })
    }

    /// s ranges over 0..s_count() in the Kac label set.
    pub fn s_count(&self) -> i64 {
        self.big_p / self.n * self.pq
    }

    /// 2(p′r − p(s + h/2)) mod 2P.
    pub fn label2(&self, r: i64, s: i64) -> i64 {
        (2 * self.pq * r - 2 * self.p * s - self.p * self.h as i64).rem_euclid(2 * self.big_p)
    }

    /// 2(p′r + p(s + h/2)) mod 2P.
    pub fn conj2(&self, r: i64, s: i64) -> i64 {
        (2 * self.pq * r + 2 * self.p * s + self.p * self.h as i64).rem_euclid(2 * self.big_p)
    }

    /// z-sign (−1)^{pv} of the characters in the Bezout form.
    pub fn z(&self) -> i8 {
        if (self.p * self.v as i64) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutEntry {
    pub r: i64,
    pub s: i64,
    pub label2: i64,
    pub conj2: i64,
}

#[derive(Clone, Debug)]
pub struct BezoutPairTable {
    pub ctx: BezoutContext,
    pub entries: Vec<BezoutEntry>,
    by_label: Vec<usize>,
}

/// Builds the table over 0 ≤ r < p, 0 ≤ s < (P/n)p′ and certifies that
/// the labels hit every element of ℤ + h′/2 in [0, P) exactly once.
pub fn bezout_table(ctx: &BezoutContext) -> Result<BezoutPairTable> {
    let mut entries = Vec::new();
    let mut by_label = vec![usize::MAX; 2 * ctx.big_p as usize];
    for r in 0..ctx.p {
        for s in 0..ctx.s_count() {
            let e = BezoutEntry {
                r,
                s,
                label2: ctx.label2(r, s),
                conj2: ctx.conj2(r, s),
            };
            let slot = &mut by_label[e.label2 as usize];
            if *slot != usize::MAX {
                return Err(Error::Internal(format!(
                    "label {} hit twice in Bezout table",
                    e.label2
                )));
            }
            *slot = entries.len();
            entries.push(e);
        }
    }
    if entries.len() as i64 != ctx.big_p {
        return Err(Error::Internal("Bezout table has wrong size".into()));
    }
    Ok(BezoutPairTable {
        ctx: *ctx,
        entries,
        by_label,
    })
}

impl BezoutPairTable {
    pub fn by_label2(&self, label2: i64) -> Option<&BezoutEntry> {
        let i = *self.by_label.get(label2.rem_euclid(2 * self.ctx.big_p) as usize)?;
        self.entries.get(i)
    }

    pub fn get(&self, r: i64, s: i64) -> Option<&BezoutEntry> {
        self.entries.iter().find(|e| e.r == r && e.s == s)
    }

    pub fn to_json(&self) -> Value {
        let c = &self.ctx;
        json!({
            "p": c.p, "pq": c.pq, "h": c.h, "v": c.v,
            "n": c.n, "h_prime": c.h_prime, "P": c.big_p, "kappa": c.kappa,
            "entries": self.entries.iter().map(|e| json!({
                "r": e.r, "s": e.s,
                "label": half_str(e.label2), "conj": half_str(e.conj2),
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conjugator {
    pub omega0: i64,
    pub r0: i64,
    pub s0: i64,
}

/// ω₀ = 2^{h′}(p′r₀ + p(s₀ + h/2)) where (r₀,s₀) carries the label (½)^{h′}.
pub fn bezout_conjugator(ctx: &BezoutContext) -> Result<Conjugator> {
    let target = if ctx.h_prime == 1 { 1 } else { 2 };
    let table = bezout_table(ctx)?;
    let e = table
        .by_label2(target)
        .ok_or_else(|| Error::Internal("no conjugator entry".into()))?;
    let omega0 = if ctx.h_prime == 1 { e.conj2 } else { e.conj2 / 2 };
    Ok(Conjugator {
        omega0,
        r0: e.r,
        s0: e.s,
    })
}

/// Half-period shift μ from the case table.
pub fn mu_shift(ctx: &BezoutContext, conj: &Conjugator, r: i64, s: i64) -> u8 {
    let odd = |k: i64| (k.rem_euclid(2)) as u8;
    if ctx.p % 2 == 1 {
        match (ctx.h, ctx.v) {
            (_, 0) => 0,
            (0, 1) => odd(r * conj.s0 - conj.r0 * s),
            _ => odd(r - conj.r0),
        }
    } else if ctx.h == 0 {
        0
    } else {
        odd(r - conj.r0)
    }
}

/// μ read off from conj ≡ ω₀·label + μP/2 (mod P); None if neither shift fits.
pub fn mu_from_entry(ctx: &BezoutContext, conj: &Conjugator, e: &BezoutEntry) -> Option<u8> {
    let m = 2 * ctx.big_p;
    let diff = (e.conj2 - conj.omega0 * e.label2).rem_euclid(m);
    if diff == 0 {
        Some(0)
    } else if diff == ctx.big_p {
        Some(1)
    } else {
        None
    }
}

/// ρ_j = (j + h′/2 + conj)/(2p′) for the entry carrying label j + h′/2.
pub fn rho_j(ctx: &BezoutContext, e: &BezoutEntry) -> Rational {
    rat(e.label2 + e.conj2, 4 * ctx.pq)
}

/// Doubled label as "a" or "a/2".
pub fn half_str(x2: i64) -> String {
    if x2 % 2 == 0 {
        format!("{}", x2 / 2)
    } else {
        format!("{x2}/2")
    }
}

/// Kac table of conjugate pairs, s increasing upwards. The window follows
/// the figure layout; cells inside 0 ≤ r < p, 0 ≤ s < 2p′ are bracketed.
pub fn kac_table_text(ctx: &BezoutContext) -> String {
    let rmax = if ctx.p % 2 == 1 { 2 * ctx.p } else { ctx.p };
    let smax = 2 * ctx.pq;
    let cell = |r: i64, s: i64| {
        let body = format!(
            "{},{}",
            half_str(ctx.label2(r, s) % (2 * ctx.big_p)),
            half_str(ctx.conj2(r, s))
        );
        if r < ctx.p && s < 2 * ctx.pq {
            format!("[{body}]")
        } else {
            format!(" {body} ")
        }
    };
    let width = (0..=rmax)
        .flat_map(|r| (0..=smax).map(move |s| (r, s)))
        .map(|(r, s)| cell(r, s).len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    let s_label = if ctx.h == 1 { "s+1/2" } else { "s" };
    let _ = writeln!(
        out,
        "(p,p')=({},{}) (h,v)=({},{}) n={} P={} kappa={}",
        ctx.p, ctx.pq, ctx.h, ctx.v, ctx.n, ctx.big_p, ctx.kappa
    );
    for s in (0..=smax).rev() {
        let lab = if ctx.h == 1 { half_str(2 * s + 1) } else { s.to_string() };
        let _ = write!(out, "{lab:>6} |");
        for r in 0..=rmax {
            let _ = write!(out, "{:^w$}", cell(r, s), w = width + 1);
        }
        out.push('\n');
    }
    let _ = write!(out, "{:>6} +", "");
    out.push_str(&"-".repeat((rmax as usize + 1) * (width + 1)));
    out.push('\n');
    let _ = write!(out, "{s_label:>6}  ");
    for r in 0..=rmax {
        let _ = write!(out, "{:^w$}", format!("r={r}"), w = width + 1);
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: i64, pq: i64, h: u8, v: u8) -> BezoutContext {
        BezoutContext::new(p, pq, h, v).unwrap()
    }

    #[test]
    fn figure_conjugators() {
        // Each panel's own (h,v): P = 2n unless pv is odd.
        let cases = [
            ((3, 4, 0, 0), 7),
            ((3, 4, 1, 1), 31),
            ((3, 5, 0, 0), 19),
            ((3, 5, 1, 1), 19),
            ((4, 5, 0, 0), 9),
            ((4, 5, 1, 0), 29),
        ];
        for ((p, pq, h, v), w) in cases {
            let c = bezout_conjugator(&ctx(p, pq, h, v)).unwrap();
            assert_eq!(c.omega0, w, "({p},{pq}) h={h}");
        }
    }

    #[test]
    fn zero_cell() {
        let c = ctx(3, 4, 0, 0);
        let t = bezout_table(&c).unwrap();
        let e = t.get(0, 0).unwrap();
        assert_eq!((e.label2, e.conj2), (0, 0));
        assert_eq!(rho_j(&c, e), rat(0, 1));
        let e = t.get(1, 1).unwrap();
        assert_eq!((e.label2, e.conj2), (2, 14));
        assert_eq!(rho_j(&c, e), rat(1, 1));
    }

    #[test]
    fn half_integer_cell() {
        let c = ctx(3, 4, 1, 1);
        assert_eq!(c.big_p, 48);
        let e = bezout_table(&c).unwrap().get(0, 0).unwrap().clone();
        assert_eq!(half_str(e.label2), "93/2");
        assert_eq!(half_str(e.conj2), "3/2");
    }

    #[test]
    fn structural_sweep() {
        for p in 1..=7i64 {
            for pq in 1..=9i64 {
                if gcd_conv(p, pq) != 1 {
                    continue;
                }
                for h in 0..2 {
                    for v in 0..2 {
                        let c = ctx(p, pq, h, v);
                        let t = bezout_table(&c).unwrap();
                        let labels: std::collections::BTreeSet<_> =
                            t.entries.iter().map(|e| e.label2).collect();
                        assert_eq!(labels.len() as i64, c.big_p);
                        assert!(labels.iter().all(|l| l % 2 == c.h_prime as i64));
                        let w = bezout_conjugator(&c).unwrap();
                        assert_eq!(w.omega0 % 2, 1, "omega0 odd for ({p},{pq},{h},{v})");
                        assert_eq!((w.omega0 * w.omega0).rem_euclid(c.big_p), 1 % c.big_p);
                        for e in &t.entries {
                            let mu = mu_from_entry(&c, &w, e).expect("shift relation");
                            assert_eq!(mu, mu_shift(&c, &w, e.r, e.s), "({p},{pq},{h},{v}) {e:?}");
                            // involution
                            let back = t.by_label2(e.conj2).unwrap();
                            assert_eq!(back.conj2, e.label2);
                            let rho = rho_j(&c, e);
                            assert!(rho.is_integer());
                            let rho = rho.to_integer();
                            let rho: i64 = rho.try_into().unwrap();
                            assert_eq!((rho - e.r).rem_euclid(c.p * c.kappa), 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sign_equivalence() {
        for (p, pq) in [(1, 2), (2, 3), (3, 4), (3, 5), (4, 5), (5, 7)] {
            for h in 0..2 {
                let c = ctx(p, pq, h, 1);
                for e in &bezout_table(&c).unwrap().entries {
                    let rho: i64 = rho_j(&c, e).to_integer().try_into().unwrap();
                    assert_eq!((rho - e.r).rem_euclid(2), 0);
                }
            }
        }
    }

    #[test]
    fn table_text_layout() {
        let t = kac_table_text(&ctx(3, 4, 0, 0));
        assert!(t.contains("[0,0]"));
        assert!(t.contains("[1,7]"));
        assert!(t.contains("P=24"));
    }
}
