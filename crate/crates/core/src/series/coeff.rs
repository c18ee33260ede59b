use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{fmt_rat, Rational};

/// Coefficient ring for truncated series.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_rational(r: Rational) -> Self;
    fn render(&self) -> String;
}

impl Coeff for Rational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn render(&self) -> String {
        fmt_rat(self)
    }
}

/// Formal rational combination Σ c_k cos(kγ), k ≥ 0.
///
/// Products use cos a cos b = ½cos(a+b) + ½cos(a−b), so the ring is closed
/// and equality is exact term-map equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CosPoly {
    terms: BTreeMap<u64, Rational>,
}

impl CosPoly {
    pub fn cos(k: u64) -> Self {
        Self::term(k, <Rational as One>::one())
    }

    pub fn term(k: u64, c: Rational) -> Self {
        let mut p = CosPoly::default();
        p.add_term(k, c);
        p
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(0, c)
    }

    pub fn add_term(&mut self, k: u64, c: Rational) {
        if Zero::is_zero(&c) {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(<Rational as Zero>::zero);
        *e += c;
        if Zero::is_zero(e) {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> &BTreeMap<u64, Rational> {
        &self.terms
    }

    pub fn eval(&self, gamma: f64) -> f64 {
        self.terms
            .iter()
            .map(|(k, c)| super::rat_to_f64(c) * (*k as f64 * gamma).cos())
            .sum()
    }
}

impl Coeff for CosPoly {
    fn nil() -> Self {
        CosPoly::default()
    }
    fn unit() -> Self {
        CosPoly::cos(0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            self.add_term(*k, c.clone());
        }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        let half = Rational::new(1.into(), 2.into());
        let mut out = CosPoly::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = ca * cb * &half;
                out.add_term(a + b, c.clone());
                out.add_term(a.abs_diff(*b), c);
            }
        }
        out
    }
    fn neg_ref(&self) -> Self {
        CosPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
    fn from_rational(r: Rational) -> Self {
        CosPoly::constant(r)
    }
    fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(k, c)| format!("{}*cos({}g)", fmt_rat(c), k))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn product_to_sum() {
        let p = CosPoly::cos(2).mul_ref(&CosPoly::cos(3));
        let mut want = CosPoly::term(5, rat(1, 2));
        want.add_term(1, rat(1, 2));
        assert_eq!(p, want);
        for g in [0.0, 0.4, 1.9] {
            assert!((p.eval(g) - (2.0 * g).cos() * (3.0 * g).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn cos_squared_has_constant() {
        let p = CosPoly::cos(1).mul_ref(&CosPoly::cos(1));
        assert_eq!(p.terms().get(&0), Some(&rat(1, 2)));
        assert_eq!(p.terms().get(&2), Some(&rat(1, 2)));
    }

    #[test]
    fn cancellation_drops_terms() {
        let mut p = CosPoly::cos(4);
        p.add_assign_ref(&CosPoly::cos(4).neg_ref());
        assert!(Coeff::is_zero(&p));
    }
}
