use rayon::prelude::*;

use crate::bezout::{bezout_table, rho_j, BezoutContext};
use crate::error::{Error, Result};
use crate::series::{int, rat, BiSeries, Rational};

use super::chars::CharCache;
use super::kac::KacData;
use super::{over_euler_bi, sq_range, to_f64};

fn sector_ok(h: u8, v: u8) -> Result<()> {
    if h > 1 || v > 1 {
        return Err(Error::InvalidParameter("h, v must be 0 or 1".into()));
    }
    Ok(())
}

fn z_sign(p: i64, v: u8) -> i8 {
    if (p * v as i64) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// (qq̄)^{−c/24}/((q)(q̄)) Σ_{r,s∈ℤ} (−1)^{vr} q^{Δ_{r,s+h/2}} q̄^{Δ_{r,−s−h/2}}.
pub fn z_hv_direct(p: i64, pq: i64, h: u8, v: u8, cutoff: &Rational) -> Result<BiSeries> {
    sector_ok(h, v)?;
    let kac = KacData::new(p, pq)?;
    let bound = 4.0 * kac.n() as f64 * (to_f64(cutoff) + 1.0);
    let rmax = (bound.sqrt() / pq as f64).ceil() as i64 + 1;
    let hh = rat(h as i64, 2);
    let mut raw = Vec::new();
    for r in -rmax..=rmax {
        let rr = int(r);
        for s in sq_range(h as f64 / 2.0, 1.0, bound / (p * p) as f64) {
            let sp = int(s) + &hh;
            let a = kac.shifted(&rr, &sp);
            let b = kac.shifted(&rr, &-&sp);
            if a > *cutoff || b > *cutoff {
                continue;
            }
            let sign = if v == 1 && r.rem_euclid(2) == 1 { -1 } else { 1 };
            raw.push(((a, b), int(sign)));
        }
    }
    Ok(over_euler_bi(&raw, cutoff))
}

/// 𝒵_{r,s} = κ^n_{p′r−p(s+h/2)}(z,q) κ^n_{p′r+p(s+h/2)}(z,q̄), z = (−1)^{pv}.
pub fn z_rs_block(cache: &CharCache, p: i64, pq: i64, h: u8, v: u8, r: i64, s: i64) -> BiSeries {
    let n = p * pq;
    let z = z_sign(p, v);
    let l = 2 * pq * r - 2 * p * s - p * h as i64;
    let rr = 2 * pq * r + 2 * p * s + p * h as i64;
    BiSeries::outer(&cache.at(n, l, z), &cache.at(n, rr, z))
}

fn sum_all(cutoff: &Rational, parts: Vec<BiSeries>) -> BiSeries {
    let mut out = BiSeries::zero(cutoff.clone());
    for s in parts {
        out.add_assign(&s);
    }
    out
}

/// Σ_{r<p} Σ_{s<2p′} (−1)^{vr} 𝒵_{r,s}.
pub fn z_hv_u1(p: i64, pq: i64, h: u8, v: u8, cutoff: &Rational) -> Result<BiSeries> {
    sector_ok(h, v)?;
    KacData::new(p, pq)?;
    let cache = CharCache::new(cutoff.clone());
    let parts: Vec<BiSeries> = (0..p)
        .flat_map(|r| (0..2 * pq).map(move |s| (r, s)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(r, s)| {
            let b = z_rs_block(&cache, p, pq, h, v, r, s);
            if v == 1 && r % 2 == 1 {
                b.neg()
            } else {
                b
            }
        })
        .collect();
    Ok(sum_all(cutoff, parts))
}

/// (1/κ) Σ_j (−1)^{vρ_j} κ^n_{j+h′/2}(z,q) κ^n_{conj}(z,q̄) over the Bezout table.
pub fn z_hv_bezout(p: i64, pq: i64, h: u8, v: u8, cutoff: &Rational) -> Result<BiSeries> {
    let ctx = BezoutContext::new(p, pq, h, v)?;
    let table = bezout_table(&ctx)?;
    let cache = CharCache::new(cutoff.clone());
    let z = ctx.z();
    let mut parts = Vec::new();
    for e in &table.entries {
        let rho = rho_j(&ctx, e);
        if !rho.is_integer() {
            return Err(Error::Internal(format!("rho not integral at ({},{})", e.r, e.s)));
        }
        let odd = v == 1 && (rho.to_integer() % 2u8) != 0.into();
        let c = rat(if odd { -1 } else { 1 }, ctx.kappa);
        let b = BiSeries::outer(&cache.at(ctx.n, e.label2, z), &cache.at(ctx.n, e.conj2, z));
        parts.push(b.scale(&c));
    }
    Ok(sum_all(cutoff, parts))
}

/// Σ_v Σ_{r<p} Σ_{s∈½ℤ, 0≤s<2p′} (−1)^{vr} κ^n_{p′r−ps}((−1)^{pv},q) κ^n_{p′r+ps}((−1)^{pv},q̄).
pub fn z_full_u1char(p: i64, pq: i64, cutoff: &Rational) -> Result<BiSeries> {
    let kac = KacData::new(p, pq)?;
    let cache = CharCache::new(cutoff.clone());
    let mut out = BiSeries::zero(cutoff.clone());
    for v in 0..2u8 {
        let z = z_sign(p, v);
        for r in 0..p {
            for s2 in 0..4 * pq {
                let l = 2 * pq * r - p * s2;
                let rr = 2 * pq * r + p * s2;
                let b = BiSeries::outer(&cache.at(kac.n(), l, z), &cache.at(kac.n(), rr, z));
                if v == 1 && r % 2 == 1 {
                    out.add_assign(&b.neg());
                } else {
                    out.add_assign(&b);
                }
            }
        }
    }
    Ok(out)
}

/// The p-even simplification: 2 Σ_{r even} Σ_{s∈½ℤ} κ^n_{p′r−ps}(q) κ^n_{p′r+ps}(q̄).
pub fn z_full_peven(p: i64, pq: i64, cutoff: &Rational) -> Result<BiSeries> {
    let kac = KacData::new(p, pq)?;
    if p % 2 != 0 {
        return Err(Error::InvalidParameter(format!("p = {p} is odd")));
    }
    let cache = CharCache::new(cutoff.clone());
    let mut out = BiSeries::zero(cutoff.clone());
    for r in (0..p).step_by(2) {
        for s2 in 0..4 * pq {
            let l = 2 * pq * r - p * s2;
            let rr = 2 * pq * r + p * s2;
            out.add_assign(&BiSeries::outer(&cache.at(kac.n(), l, 1), &cache.at(kac.n(), rr, 1)));
        }
    }
    Ok(out.scale(&int(2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: i64) -> Rational {
        int(n)
    }

    #[test]
    fn vacuum_leading_term() {
        let z = z_hv_direct(1, 2, 0, 0, &k(3)).unwrap();
        let kac = KacData::new(1, 2).unwrap();
        let e = kac.shifted(&int(0), &int(0));
        assert_eq!(e, rat(-1, 24));
        assert_eq!(z.coeff(&e, &e), int(1));
        let min = z.terms().keys().min().unwrap().clone();
        assert_eq!(min, (e.clone(), e));
    }

    #[test]
    fn three_forms_agree_small() {
        for (p, pq) in [(1, 2), (2, 3), (1, 3)] {
            for h in 0..2 {
                for v in 0..2 {
                    let c = k(5);
                    let d = z_hv_direct(p, pq, h, v, &c).unwrap();
                    let u = z_hv_u1(p, pq, h, v, &c).unwrap();
                    let b = z_hv_bezout(p, pq, h, v, &c).unwrap();
                    assert!(d.agrees_with(&u), "({p},{pq}) ({h},{v}) direct vs u1");
                    assert!(d.agrees_with(&b), "({p},{pq}) ({h},{v}) direct vs bezout");
                }
            }
        }
    }

    #[test]
    fn sign_structure() {
        let c = k(6);
        for (p, pq) in [(2, 3), (3, 4)] {
            for h in 0..2 {
                assert!(!z_hv_direct(p, pq, h, 0, &c).unwrap().has_negative_coeff());
                assert!(z_hv_direct(p, pq, h, 1, &c).unwrap().has_negative_coeff());
            }
        }
    }

    #[test]
    fn zrs_symmetries() {
        let c = k(4);
        for (p, pq) in [(2, 3), (3, 4), (1, 2)] {
            let cache = CharCache::new(c.clone());
            for h in 0..2u8 {
                for v in 0..2u8 {
                    for r in -2..3 {
                        for s in -2..4 {
                            let b = z_rs_block(&cache, p, pq, h, v, r, s);
                            let blk = |r, s| z_rs_block(&cache, p, pq, h, v, r, s);
                            assert!(b.agrees_with(&blk(r + 2 * p, s)));
                            assert!(b.agrees_with(&blk(r, s + 2 * pq)));
                            assert!(b.agrees_with(&blk(-r, -s - h as i64)));
                            assert!(b.swap().agrees_with(&blk(r, 2 * pq - s - h as i64)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn half_range_reduction() {
        let c = k(4);
        let (p, pq) = (3, 4);
        let cache = CharCache::new(c.clone());
        for h in 0..2u8 {
            for v in 0..2u8 {
                let mut short = BiSeries::zero(c.clone());
                let mut long = BiSeries::zero(c.clone());
                for r in 0..p {
                    let sg = if v == 1 && r % 2 == 1 { int(-1) } else { int(1) };
                    for s in 0..4 * pq {
                        let b = z_rs_block(&cache, p, pq, h, v, r, s).scale(&sg);
                        if s < 2 * pq {
                            short.add_assign(&b);
                        }
                        long.add_assign(&b);
                    }
                }
                assert!(short.agrees_with(&long.scale(&rat(1, 2))));
            }
        }
    }

    #[test]
    fn full_sum_forms() {
        let c = k(5);
        for (p, pq) in [(2, 3), (1, 2), (4, 5)] {
            let mut sum = BiSeries::zero(c.clone());
            for h in 0..2 {
                for v in 0..2 {
                    sum.add_assign(&z_hv_direct(p, pq, h, v, &c).unwrap());
                }
            }
            assert!(sum.agrees_with(&z_full_u1char(p, pq, &c).unwrap()));
            if p % 2 == 0 {
                assert!(sum.agrees_with(&z_full_peven(p, pq, &c).unwrap()));
            }
        }
    }

    #[test]
    fn bezout_kappa_two_when_pv_odd() {
        assert_eq!(BezoutContext::new(3, 4, 0, 1).unwrap().kappa, 2);
        assert_eq!(BezoutContext::new(2, 3, 0, 1).unwrap().kappa, 1);
    }
}
