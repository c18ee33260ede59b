//! Conformal side: Verma and u(1) character series, the sector partition
//! functions in their several forms, Gaussian numerics and modular checks.

pub mod appendix;
pub mod chars;
pub mod forms;
pub mod kac;
pub mod numeric;
pub mod verma;

pub use appendix::{appendix_c_form, AppendixForm, AppendixTerm};
pub use chars::{character_identities, u1_char, u1_weight, CharCache, U1CharIndex};
pub use forms::{z_full_peven, z_full_u1char, z_hv_bezout, z_hv_direct, z_hv_u1, z_rs_block};
pub use kac::KacData;
pub use numeric::{
    conformal_z_numeric, coulomb_z, coulomb_z_hv, eta, modular_rep_check, s_matrix, t_matrix,
    u1_char_numeric, zmm, ModularReport, TauPoint,
};
pub use verma::{full_z_series, on_series, verma_trace_series};

use num_traits::ToPrimitive;

use crate::series::{euler_inverse, floor_rat, int, BiSeries, Coeff, QSeries, Rational};

fn partitions(cutoff: &Rational) -> Vec<Rational> {
    let k = floor_rat(cutoff).to_i64().unwrap_or(-1);
    let e = euler_inverse(&int(k.max(0)));
    (0..=k.max(0)).map(|i| e.coeff(&int(i))).collect()
}

/// Σ c q^e times 1/(q)_∞, exact through `cutoff`.
pub(crate) fn over_euler_q<C: Coeff>(raw: &[(Rational, C)], cutoff: &Rational) -> QSeries<C> {
    let mut out = QSeries::zero(cutoff.clone());
    let Some(lo) = raw.iter().map(|t| &t.0).min() else {
        return out;
    };
    let part = partitions(&(cutoff - lo));
    for (e, c) in raw {
        for (i, pi) in part.iter().enumerate() {
            let x = e + int(i as i64);
            if x > *cutoff {
                break;
            }
            out.add_term(x, c.mul_ref(&C::from_rational(pi.clone())));
        }
    }
    out
}

/// Σ c q^a q̄^b times 1/((q)_∞(q̄)_∞), exact through `cutoff`.
pub(crate) fn over_euler_bi<C: Coeff>(
    raw: &[((Rational, Rational), C)],
    cutoff: &Rational,
) -> BiSeries<C> {
    let mut out = BiSeries::zero(cutoff.clone());
    let lo = raw
        .iter()
        .flat_map(|t| [&t.0 .0, &t.0 .1])
        .min()
        .cloned();
    let Some(lo) = lo else {
        return out;
    };
    let part = partitions(&(cutoff - lo));
    for ((a, b), c) in raw {
        if a > cutoff || b > cutoff {
            continue;
        }
        for (i, pi) in part.iter().enumerate() {
            let x = a + int(i as i64);
            if x > *cutoff {
                break;
            }
            let ci = c.mul_ref(&C::from_rational(pi.clone()));
            for (k, pk) in part.iter().enumerate() {
                let y = b + int(k as i64);
                if y > *cutoff {
                    break;
                }
                out.add_term(x.clone(), y, ci.mul_ref(&C::from_rational(pk.clone())));
            }
        }
    }
    out
}

/// Generous integer bound on |k| for terms (a + b k)² ≤ bound.
pub(crate) fn sq_range(a: f64, b: f64, bound: f64) -> std::ops::RangeInclusive<i64> {
    let r = bound.max(0.0).sqrt();
    let (x, y) = ((-r - a) / b, (r - a) / b);
    let lo = x.min(y).floor() as i64 - 1;
    let hi = x.max(y).ceil() as i64 + 1;
    lo..=hi
}

pub(crate) fn to_f64(r: &Rational) -> f64 {
    crate::series::rat_to_f64(r)
}
