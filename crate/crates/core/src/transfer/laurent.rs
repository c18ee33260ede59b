use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul};

use num_complex::Complex64;
use rayon::prelude::*;

/// Σ_k c_k ω^k with finite support.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OmegaLaurent {
    coeffs: BTreeMap<i64, Complex64>,
}

impl OmegaLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(k: i64, c: Complex64) -> Self {
        let mut s = Self::zero();
        s.add_term(k, c);
        s
    }

    /// ω + ω⁻¹ raised to `n`.
    pub fn alpha_pow(n: u32) -> Self {
        let a = Self::monomial(1, 1.0.into()) + &Self::monomial(-1, 1.0.into());
        (0..n).fold(Self::one(), |acc, _| &acc * &a)
    }

    pub fn add_term(&mut self, k: i64, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let e = self.coeffs.entry(k).or_insert(Complex64::new(0.0, 0.0));
        *e += c;
        if *e == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_power(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero();
        for (k, v) in self.terms() {
            out.add_term(k, v * c);
        }
        out
    }

    /// Multiplies by ω^k.
    pub fn shift(&self, k: i64) -> Self {
        OmegaLaurent {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    pub fn eval(&self, omega: Complex64) -> Complex64 {
        self.terms().map(|(k, c)| c * omega.powi(k as i32)).sum()
    }
}

impl AddAssign<&OmegaLaurent> for OmegaLaurent {
    fn add_assign(&mut self, rhs: &OmegaLaurent) {
        for (k, c) in rhs.terms() {
            self.add_term(k, c);
        }
    }
}

impl Add<&OmegaLaurent> for OmegaLaurent {
    type Output = OmegaLaurent;
    fn add(mut self, rhs: &OmegaLaurent) -> OmegaLaurent {
        self += rhs;
        self
    }
}

impl Mul for &OmegaLaurent {
    type Output = OmegaLaurent;
    fn mul(self, rhs: &OmegaLaurent) -> OmegaLaurent {
        let mut out = OmegaLaurent::zero();
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

/// Square matrix of Laurent polynomials, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMatrix {
    pub dim: usize,
    pub entries: Vec<OmegaLaurent>,
}

impl LaurentMatrix {
    pub fn zeros(dim: usize) -> Self {
        LaurentMatrix {
            dim,
            entries: vec![OmegaLaurent::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = OmegaLaurent::one();
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &OmegaLaurent {
        &self.entries[i * self.dim + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut OmegaLaurent {
        &mut self.entries[i * self.dim + j]
    }

    /// Product, parallel over output rows.
    pub fn mul(&self, rhs: &LaurentMatrix) -> LaurentMatrix {
        let n = self.dim;
        let rows: Vec<Vec<OmegaLaurent>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![OmegaLaurent::zero(); n];
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    for (j, out) in row.iter_mut().enumerate() {
                        let b = rhs.get(k, j);
                        if !b.is_zero() {
                            *out += &(a * b);
                        }
                    }
                }
                row
            })
            .collect();
        LaurentMatrix {
            dim: n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn pow(&self, m: u32) -> LaurentMatrix {
        let mut acc = Self::identity(self.dim);
        for _ in 0..m {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> OmegaLaurent {
        (0..self.dim).fold(OmegaLaurent::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Numeric matrix at a given ω.
    pub fn eval(&self, omega: Complex64) -> faer::Mat<Complex64> {
        faer::Mat::from_fn(self.dim, self.dim, |i, j| self.get(i, j).eval(omega))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_powers_are_binomial() {
        let a3 = OmegaLaurent::alpha_pow(3);
        let got: Vec<(i64, f64)> = a3.terms().map(|(k, c)| (k, c.re)).collect();
        assert_eq!(got, vec![(-3, 1.0), (-1, 3.0), (1, 3.0), (3, 1.0)]);
    }

    #[test]
    fn eval_is_a_ring_map() {
        let a = OmegaLaurent::monomial(2, Complex64::new(0.5, 0.0)) + &OmegaLaurent::monomial(-1, Complex64::new(1.5, -1.0));
        let b = OmegaLaurent::alpha_pow(2).shift(1);
        let w = Complex64::from_polar(1.0, 0.7);
        assert!(((&a * &b).eval(w) - a.eval(w) * b.eval(w)).norm() < 1e-12);
    }

    #[test]
    fn cancellation_drops_terms() {
        let mut a = OmegaLaurent::monomial(4, 2.0.into());
        a.add_term(4, (-2.0).into());
        assert!(a.is_zero());
    }

    #[test]
    fn matrix_power_matches_numeric() {
        let mut m = LaurentMatrix::zeros(2);
        *m.get_mut(0, 1) = OmegaLaurent::monomial(1, 1.0.into());
        *m.get_mut(1, 0) = OmegaLaurent::monomial(-1, 2.0.into()) + &OmegaLaurent::one();
        *m.get_mut(1, 1) = OmegaLaurent::monomial(0, 0.5.into());
        let w = Complex64::from_polar(1.0, 1.1);
        let a = m.eval(w);
        let mut num = a.clone();
        for _ in 1..5 {
            num = &num * &a;
        }
        let lp = m.pow(5).eval(w);
        assert!((num - lp).norm_l2() < 1e-10);
    }
}
