use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use super::{fmt_rat, Coeff, QSeries, Rational};
use crate::error::{Error, Result};

/// Truncated series Σ c q^a q̄^b; the cutoff bounds both exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries<C: Coeff = Rational> {
    terms: BTreeMap<(Rational, Rational), C>,
    cutoff: Rational,
}

impl<C: Coeff> BiSeries<C> {
    pub fn zero(cutoff: Rational) -> Self {
        BiSeries {
            terms: BTreeMap::new(),
            cutoff,
        }
    }

    pub fn monomial(a: Rational, b: Rational, c: C, cutoff: Rational) -> Self {
        let mut s = Self::zero(cutoff);
        s.add_term(a, b, c);
        s
    }

    pub fn cutoff(&self) -> &Rational {
        &self.cutoff
    }

    pub fn terms(&self) -> &BTreeMap<(Rational, Rational), C> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: &Rational, b: &Rational) -> C {
        self.terms
            .get(&(a.clone(), b.clone()))
            .cloned()
            .unwrap_or_else(C::nil)
    }

    pub fn add_term(&mut self, a: Rational, b: Rational, c: C) {
        if a > self.cutoff || b > self.cutoff || c.is_zero() {
            return;
        }
        let key = (a, b);
        match self.terms.get_mut(&key) {
            Some(v) => {
                v.add_assign_ref(&c);
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// f(q) g(q̄). Exact up to the smaller of the two cutoffs.
    pub fn outer(f: &QSeries<C>, g: &QSeries<C>) -> Self {
        let cutoff = f.cutoff().clone().min(g.cutoff().clone());
        let mut out = Self::zero(cutoff);
        for (a, ca) in f.terms() {
            if *a > out.cutoff {
                break;
            }
            for (b, cb) in g.terms() {
                if *b > out.cutoff {
                    break;
                }
                out.add_term(a.clone(), b.clone(), ca.mul_ref(cb));
            }
        }
        out
    }

    fn min_exponents(&self) -> (Rational, Rational) {
        let a = self.terms.keys().map(|k| &k.0).min().cloned();
        let b = self.terms.keys().map(|k| &k.1).min().cloned();
        (
            a.unwrap_or_else(|| self.cutoff.clone()),
            b.unwrap_or_else(|| self.cutoff.clone()),
        )
    }

    pub fn truncate(&self, cutoff: &Rational) -> Self {
        let cutoff = cutoff.min(&self.cutoff).clone();
        BiSeries {
            terms: self
                .terms
                .iter()
                .filter(|((a, b), _)| *a <= cutoff && *b <= cutoff)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
            cutoff,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let cutoff = self.cutoff.clone().min(other.cutoff.clone());
        let mut out = self.truncate(&cutoff);
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        if other.cutoff < self.cutoff {
            *self = self.truncate(&other.cutoff);
        }
        for ((a, b), c) in &other.terms {
            self.add_term(a.clone(), b.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> Self {
        BiSeries {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg_ref())).collect(),
            cutoff: self.cutoff.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.cutoff.clone());
        for ((a, b), v) in &self.terms {
            out.add_term(a.clone(), b.clone(), v.mul_ref(c));
        }
        out
    }

    /// Exchanges q and q̄.
    pub fn swap(&self) -> Self {
        BiSeries {
            terms: self
                .terms
                .iter()
                .map(|((a, b), c)| ((b.clone(), a.clone()), c.clone()))
                .collect(),
            cutoff: self.cutoff.clone(),
        }
    }

    /// Product with matching cutoffs; valid up to
    /// cutoff + min over both variables of both operands' minimal exponents.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch(
                fmt_rat(&self.cutoff),
                fmt_rat(&other.cutoff),
            ));
        }
        let (a0, a1) = self.min_exponents();
        let (b0, b1) = other.min_exponents();
        let shift = a0.min(a1).min(b0).min(b1);
        let mut out = Self::zero(&self.cutoff + shift);
        for ((x0, x1), cx) in &self.terms {
            for ((y0, y1), cy) in &other.terms {
                let e0 = x0 + y0;
                if e0 > out.cutoff {
                    continue;
                }
                let e1 = x1 + y1;
                if e1 > out.cutoff {
                    continue;
                }
                out.add_term(e0, e1, cx.mul_ref(cy));
            }
        }
        Ok(out)
    }

    /// Equality on exponents up to the smaller cutoff.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let k = self.cutoff.clone().min(other.cutoff.clone());
        self.truncate(&k).terms == other.truncate(&k).terms
    }

    /// First differing term (up to the common cutoff), for diagnostics.
    pub fn first_difference(&self, other: &Self) -> Option<((Rational, Rational), C, C)> {
        let k = self.cutoff.clone().min(other.cutoff.clone());
        let a = self.truncate(&k);
        let b = other.truncate(&k);
        let keys: std::collections::BTreeSet<_> =
            a.terms.keys().chain(b.terms.keys()).cloned().collect();
        keys.into_iter().find_map(|key| {
            let ca = a.terms.get(&key).cloned().unwrap_or_else(C::nil);
            let cb = b.terms.get(&key).cloned().unwrap_or_else(C::nil);
            (ca != cb).then_some((key, ca, cb))
        })
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BiSeries<D> {
        let mut out = BiSeries::zero(self.cutoff.clone());
        for ((a, b), c) in &self.terms {
            out.add_term(a.clone(), b.clone(), f(c));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|((a, b), c)| {
                    json!({"qexp": fmt_rat(a), "qbarexp": fmt_rat(b), "coeff": c.render()})
                })
                .collect(),
        )
    }
}

impl BiSeries<Rational> {
    pub fn has_negative_coeff(&self) -> bool {
        self.terms.values().any(|c| *c < <Rational as Zero>::zero())
    }
}
