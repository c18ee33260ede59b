//! Exact rationals and truncated q-series in one and two variables.

mod biseries;
mod coeff;
mod qseries;

pub use biseries::BiSeries;
pub use coeff::{Coeff, CosPoly};
pub use qseries::{dedekind_eta, euler_inverse, euler_product, QSeries};

use num_bigint::BigInt;
use num_traits::Zero;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// "num/den", denominator always present.
pub fn fmt_rat(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts "a", "a/b" or "-a/b".
pub fn parse_rat(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().ok()?;
            let d: BigInt = b.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn floor_rat(r: &Rational) -> BigInt {
    r.floor().to_integer()
}


