use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::{fmt_rat, floor_rat, rat, Coeff, Rational};
use crate::error::{Error, Result};

/// Truncated series Σ c_e q^e with rational exponents.
///
/// Every exponent ≤ `cutoff` is known exactly; nothing is known beyond it.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<C: Coeff = Rational> {
    terms: BTreeMap<Rational, C>,
    cutoff: Rational,
}

impl<C: Coeff> QSeries<C> {
    pub fn zero(cutoff: Rational) -> Self {
        QSeries {
            terms: BTreeMap::new(),
            cutoff,
        }
    }

    pub fn monomial(exp: Rational, coeff: C, cutoff: Rational) -> Self {
        let mut s = Self::zero(cutoff);
        s.add_term(exp, coeff);
        s
    }

    pub fn one(cutoff: Rational) -> Self {
        Self::monomial(<Rational as Zero>::zero(), C::unit(), cutoff)
    }

    pub fn cutoff(&self) -> &Rational {
        &self.cutoff
    }

    pub fn terms(&self) -> &BTreeMap<Rational, C> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &Rational) -> C {
        self.terms.get(exp).cloned().unwrap_or_else(C::nil)
    }

    /// Adds c·q^e; silently ignored beyond the cutoff.
    pub fn add_term(&mut self, exp: Rational, c: C) {
        if exp > self.cutoff || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(v) => {
                v.add_assign_ref(&c);
                if v.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    /// Smallest exponent that may carry a nonzero coefficient.
    pub fn min_exponent(&self) -> Rational {
        self.terms
            .keys()
            .next()
            .cloned()
            .unwrap_or_else(|| self.cutoff.clone())
    }

    pub fn truncate(&self, cutoff: &Rational) -> Self {
        let cutoff = cutoff.min(&self.cutoff).clone();
        QSeries {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| **e <= cutoff)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
            cutoff,
        }
    }

    /// Sum, valid up to the smaller cutoff.
    pub fn add(&self, other: &Self) -> Self {
        let cutoff = self.cutoff.clone().min(other.cutoff.clone());
        let mut out = self.truncate(&cutoff);
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        QSeries {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg_ref())).collect(),
            cutoff: self.cutoff.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.cutoff.clone());
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.mul_ref(c));
        }
        out
    }

    /// Multiplies by q^a; the cutoff moves with the series.
    pub fn shift(&self, a: &Rational) -> Self {
        QSeries {
            terms: self.terms.iter().map(|(e, c)| (e + a, c.clone())).collect(),
            cutoff: &self.cutoff + a,
        }
    }

    /// Product. Both cutoffs must agree; the result is exact up to
    /// cutoff + min(min-exponent of a, min-exponent of b).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch(
                fmt_rat(&self.cutoff),
                fmt_rat(&other.cutoff),
            ));
        }
        let a0 = self.min_exponent();
        let b0 = other.min_exponent();
        let cutoff = &self.cutoff + a0.min(b0);
        let mut out = Self::zero(cutoff);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if e <= out.cutoff {
                    out.add_term(e, ca.mul_ref(cb));
                }
            }
        }
        Ok(out)
    }

    /// Equality on exponents up to the smaller cutoff.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let k = self.cutoff.clone().min(other.cutoff.clone());
        self.truncate(&k).terms == other.truncate(&k).terms
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| json!({"qexp": fmt_rat(e), "coeff": c.render()}))
                .collect(),
        )
    }
}

/// 1/(q)_∞ through `cutoff`: coefficients are partition numbers.
pub fn euler_inverse(cutoff: &Rational) -> QSeries {
    let k = floor_rat(cutoff).to_i64().unwrap_or(-1);
    let mut out = QSeries::zero(cutoff.clone());
    if k < 0 {
        return out;
    }
    let k = k as usize;
    let mut p = vec![BigInt::zero(); k + 1];
    p[0] = BigInt::from(1);
    for part in 1..=k {
        for n in part..=k {
            let add = p[n - part].clone();
            p[n] += add;
        }
    }
    for (n, c) in p.into_iter().enumerate() {
        out.add_term(rat(n as i64, 1), Rational::from_integer(c));
    }
    out
}

/// (q)_∞ = Π (1 − q^n) through `cutoff`, by direct multiplication of factors.
pub fn euler_product(cutoff: &Rational) -> QSeries {
    let k = floor_rat(cutoff).to_i64().unwrap_or(-1);
    let mut out = QSeries::zero(cutoff.clone());
    if k < 0 {
        return out;
    }
    let k = k as usize;
    let mut c = vec![BigInt::zero(); k + 1];
    c[0] = BigInt::from(1);
    for f in 1..=k {
        for n in (f..=k).rev() {
            let sub = c[n - f].clone();
            c[n] -= sub;
        }
    }
    for (n, v) in c.into_iter().enumerate() {
        out.add_term(rat(n as i64, 1), Rational::from_integer(v));
    }
    out
}

/// η(q) = q^{1/24} (q)_∞ through `cutoff`.
pub fn dedekind_eta(cutoff: &Rational) -> QSeries {
    let s = rat(1, 24);
    euler_product(&(cutoff - &s)).shift(&s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::int;
    use proptest::prelude::*;

    fn brute_partitions(n: u32, max: u32) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|k| brute_partitions(n - k, k)).sum()
    }

    fn poly(cs: &[i64], cutoff: i64) -> QSeries {
        let mut s = QSeries::zero(int(cutoff));
        for (i, c) in cs.iter().enumerate() {
            s.add_term(int(i as i64), int(*c));
        }
        s
    }

    #[test]
    fn one_plus_q_times_one_minus_q() {
        let a = poly(&[1, 1], 5);
        let b = poly(&[1, -1], 5);
        assert_eq!(a.mul(&b).unwrap(), poly(&[1, 0, -1], 5));
    }

    #[test]
    fn partition_numbers() {
        let e = euler_inverse(&int(12));
        for n in 0..=12u32 {
            assert_eq!(e.coeff(&int(n as i64)), int(brute_partitions(n, n) as i64));
        }
        assert_eq!(e.coeff(&int(4)), int(5));
        assert_eq!(e.coeff(&int(5)), int(7));
        assert_eq!(e.coeff(&int(10)), int(42));
        assert_eq!(euler_inverse(&int(0)), QSeries::one(int(0)));
    }

    #[test]
    fn eta_expansion() {
        let eta = dedekind_eta(&rat(145, 24));
        assert_eq!(eta.min_exponent(), rat(1, 24));
        assert_eq!(eta.coeff(&rat(1, 24)), int(1));
        assert_eq!(eta.coeff(&(rat(1, 24) + int(1))), int(-1));
        assert_eq!(eta.coeff(&(rat(1, 24) + int(5))), int(1));
    }

    #[test]
    fn euler_product_matches_pentagonal() {
        let k = 40i64;
        let prod = euler_product(&int(k));
        let mut pent = QSeries::zero(int(k));
        for m in -10i64..=10 {
            let e = m * (3 * m - 1) / 2;
            let sign = if m % 2 == 0 { 1 } else { -1 };
            pent.add_term(int(e), int(sign));
        }
        assert_eq!(prod, pent);
    }

    #[test]
    fn inverse_times_product_is_one() {
        let k = int(15);
        let p = euler_inverse(&k).mul(&euler_product(&k)).unwrap();
        assert_eq!(p, QSeries::one(k));
    }

    #[test]
    fn cutoff_mismatch_is_an_error() {
        assert!(poly(&[1], 3).mul(&poly(&[1], 4)).is_err());
    }

    #[test]
    fn negative_base_lowers_valid_order() {
        let a = QSeries::monomial(rat(-1, 24), int(1), int(2));
        let b = euler_inverse(&int(2));
        let c = a.mul(&b).unwrap();
        assert_eq!(c.cutoff(), &(int(2) - rat(1, 24)));
        assert_eq!(c.coeff(&rat(23, 24)), int(1));
    }

    fn arb_series() -> impl Strategy<Value = QSeries> {
        prop::collection::vec((1i64..30, 1i64..4, -5i64..6), 0..8).prop_map(|ts| {
            let mut s = QSeries::one(int(6));
            for (n, d, c) in ts {
                s.add_term(rat(n, d), int(c));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn mul_commutes(a in arb_series(), b in arb_series()) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }

        #[test]
        fn mul_associates(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assume!(!a.is_empty() && !b.is_empty() && !c.is_empty());
            let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
            let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
        }

        #[test]
        fn no_zero_terms_stored(a in arb_series(), b in arb_series()) {
            let s = a.add(&b.neg()).add(&b);
            prop_assert!(s.terms().values().all(|c| !Coeff::is_zero(c)));
            prop_assert!(s.agrees_with(&a));
        }
    }
}
