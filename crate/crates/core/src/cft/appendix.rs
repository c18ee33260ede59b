use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::bezout::{bezout_table, rho_j, BezoutContext};
use crate::error::{Error, Result};
use crate::series::{fmt_rat, rat, BiSeries, Rational};

use super::chars::{CharCache, U1CharIndex};

/// One term c·κ^n_a(z,q)κ^n_b(z,q̄), labels doubled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixTerm {
    pub coeff: Rational,
    pub left2: i64,
    pub right2: i64,
    pub z: i8,
}

/// Reduced sesquilinear form with every label folded into [0, n].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixForm {
    pub p: i64,
    pub pq: i64,
    pub h: u8,
    pub v: u8,
    pub n: i64,
    // key: (left2, z order, right2); z = +1 sorts first
    terms: BTreeMap<(i64, u8, i64), Rational>,
}

/// Folds a doubled label into [0, 2n]; returns (label, sign).
fn fold(n: i64, l2: i64, z: i8) -> (i64, i64) {
    let mut l = l2;
    let mut sign = 1;
    if z == -1 {
        l = l.rem_euclid(8 * n);
        if l > 4 * n {
            l = 8 * n - l;
        }
    } else {
        l = l.rem_euclid(4 * n);
    }
    if l > 2 * n {
        l = 4 * n - l;
        if z == -1 {
            sign = -1;
        }
    }
    (l, sign)
}

impl AppendixForm {
    pub fn from_terms(p: i64, pq: i64, h: u8, v: u8, terms: &[AppendixTerm]) -> Self {
        let mut f = AppendixForm {
            p,
            pq,
            h,
            v,
            n: p * pq,
            terms: BTreeMap::new(),
        };
        for t in terms {
            f.add(t.left2, t.right2, t.z, t.coeff.clone());
        }
        f
    }

    fn add(&mut self, left2: i64, right2: i64, z: i8, c: Rational) {
        let key = (left2, (z == -1) as u8, right2);
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> Vec<AppendixTerm> {
        self.terms
            .iter()
            .map(|(&(l, zo, r), c)| AppendixTerm {
                coeff: c.clone(),
                left2: l,
                right2: r,
                z: if zo == 1 { -1 } else { 1 },
            })
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.terms().iter().enumerate() {
            let neg = t.coeff.is_negative();
            let mag = t.coeff.abs();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if !mag.is_one() {
                if mag.is_integer() {
                    out.push_str(&format!("{}*", mag.numer()));
                } else {
                    out.push_str(&format!("({})*", fmt_rat(&mag)));
                }
            }
            let l = U1CharIndex { n: self.n, label2: t.left2, z: t.z };
            if t.left2 == t.right2 {
                out.push_str(&format!("|{}|^2", l.render("q")));
            } else {
                let r = U1CharIndex { n: self.n, label2: t.right2, z: t.z };
                out.push_str(&format!("{}*{}", l.render("q"), r.render("qb")));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn expand(&self, cutoff: &Rational) -> BiSeries {
        let cache = CharCache::new(cutoff.clone());
        let mut out = BiSeries::zero(cutoff.clone());
        for t in self.terms() {
            let a = cache.at(self.n, t.left2, t.z);
            let b = cache.at(self.n, t.right2, t.z);
            out.add_assign(&BiSeries::outer(&a, &b).scale(&t.coeff));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .into_iter()
            .map(|t| {
                json!({"coeff": fmt_rat(&t.coeff), "left2": t.left2, "right2": t.right2, "z": t.z})
            })
            .collect();
        json!({"p": self.p, "pq": self.pq, "h": self.h, "v": self.v, "n": self.n,
               "form": self.render(), "terms": terms})
    }
}

/// Bezout-indexed form reduced row by row: each label is folded into [0, n]
/// using the periods and foldings, with the sign picked up by z = −1 characters.
pub fn appendix_c_form(p: i64, pq: i64, h: u8, v: u8) -> Result<AppendixForm> {
    let ctx = BezoutContext::new(p, pq, h, v)?;
    let table = bezout_table(&ctx)?;
    let z = ctx.z();
    let mut form = AppendixForm::from_terms(p, pq, h, v, &[]);
    for e in &table.entries {
        let rho = rho_j(&ctx, e);
        if !rho.is_integer() {
            return Err(Error::Internal("non-integral rho".into()));
        }
        let odd = v == 1 && !(rho.to_integer() % 2u8).is_zero();
        let (l, sl) = fold(ctx.n, e.label2, z);
        let (r, sr) = fold(ctx.n, e.conj2, z);
        let sign = if odd { -sl * sr } else { sl * sr };
        form.add(l, r, z, rat(sign, ctx.kappa));
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_examples() {
        assert_eq!(fold(2, 3, 1), (3, 1));
        assert_eq!(fold(2, 6, 1), (2, 1));
        assert_eq!(fold(2, 6, -1), (2, -1));
        assert_eq!(fold(2, 13, -1), (3, 1));
        assert_eq!(fold(2, 10, -1), (2, -1));
    }

    #[test]
    fn one_two_examples() {
        let f = appendix_c_form(1, 2, 1, 0).unwrap();
        assert_eq!(f.render(), "2*|k[2,1/2](1,q)|^2 + 2*|k[2,3/2](1,q)|^2");
        let f = appendix_c_form(1, 2, 0, 0).unwrap();
        assert_eq!(
            f.render(),
            "|k[2,0](1,q)|^2 + 2*|k[2,1](1,q)|^2 + |k[2,2](1,q)|^2"
        );
    }

    #[test]
    fn two_three_one_one_starts_negative() {
        let f = appendix_c_form(2, 3, 1, 1).unwrap();
        assert!(f.render().starts_with("-k[6,0](1,q)*k[6,6](1,qb)"), "{}", f.render());
        assert_eq!(f.terms().len(), 7);
    }

    #[test]
    fn expansion_matches_direct() {
        let c = crate::series::int(5);
        for (p, pq) in [(1, 2), (2, 3), (3, 4)] {
            for h in 0..2 {
                for v in 0..2 {
                    let f = appendix_c_form(p, pq, h, v).unwrap();
                    let d = super::super::forms::z_hv_direct(p, pq, h, v, &c).unwrap();
                    assert!(f.expand(&c).agrees_with(&d), "({p},{pq}) ({h},{v})");
                }
            }
        }
    }
}
