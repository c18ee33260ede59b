use crate::arith::gcd_conv;
use crate::error::{Error, Result};
use crate::series::{int, rat, Rational};

/// Central charge and Kac weights of the (p,p′) logarithmic minimal model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KacData {
    pub p: i64,
    pub pq: i64,
}

impl KacData {
    pub fn new(p: i64, pq: i64) -> Result<Self> {
        if p < 1 || pq < 1 || gcd_conv(p, pq) != 1 {
            return Err(Error::InvalidParameter(format!(
                "({p},{pq}) must be coprime positive integers"
            )));
        }
        Ok(KacData { p, pq })
    }

    pub fn n(&self) -> i64 {
        self.p * self.pq
    }

    pub fn c(&self) -> Rational {
        let d = self.p - self.pq;
        int(1) - rat(6 * d * d, self.n())
    }

    pub fn delta(&self, r: &Rational, s: &Rational) -> Rational {
        let x = int(self.pq) * r - int(self.p) * s;
        let d = int(self.p - self.pq);
        (&x * &x - &d * &d) / int(4 * self.n())
    }

    /// Δ_{r,s} − c/24, the exponent carried by a Verma character.
    pub fn shifted(&self, r: &Rational, s: &Rational) -> Rational {
        self.delta(r, s) - self.c() / int(24)
    }
}
