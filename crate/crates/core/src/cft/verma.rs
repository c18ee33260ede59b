use crate::arith::{divisors, gamma_dm_exact, gcd_conv, lambda_prime_exact};
use crate::error::Result;
use crate::lattice::ModelKind;
use crate::series::{int, rat, BiSeries, Coeff, CosPoly, Rational};

use super::kac::KacData;
use super::{over_euler_bi, sq_range, to_f64};

/// Scaling form of tr T^M on the d-defect module with twist e^{iγ}, γ/π = `g`.
/// Dense: Σ_ℓ (−1)^{εℓ} q^{Δ_{g−ℓ,d/2}} q̄^{Δ_{g−ℓ,−d/2}}; dilute: ℓ even, no sign.
/// Both carry the (qq̄)^{−c/24}/((q)(q̄)) prefactor.
pub fn verma_trace_series(
    kind: ModelKind,
    p: i64,
    pq: i64,
    d: i64,
    g: &Rational,
    eps: u8,
    cutoff: &Rational,
) -> Result<BiSeries> {
    let kac = KacData::new(p, pq)?;
    let step = match kind {
        ModelKind::Dense => 1,
        ModelKind::Dilute => 2,
    };
    let s = rat(d, 2);
    let bound = 4.0 * kac.n() as f64 * (to_f64(cutoff) + 1.0) / (pq * pq) as f64;
    let centre = to_f64(g) - p as f64 * d as f64 / (2.0 * pq as f64);
    let mut raw = Vec::new();
    for l in sq_range(centre, -(step as f64), bound) {
        let r = g - int(step * l);
        let a = kac.shifted(&r, &s);
        let b = kac.shifted(&r, &-&s);
        let sign = if kind == ModelKind::Dense && eps == 1 && l.rem_euclid(2) == 1 {
            -1
        } else {
            1
        };
        raw.push(((a, b), int(sign)));
    }
    Ok(over_euler_bi(&raw, cutoff))
}

/// Full dilute partition function with symbolic cos(kγ) weights, γ/π = `g`:
/// [Σ_ℓ (qq̄)^{Δ_{g−2ℓ,0}} + 2 Σ_{d≥1} Σ_{m<d} Γ_{m,d} Σ_ℓ q^{Δ_{2m/d−2ℓ,d/2}} q̄^{Δ_{2m/d−2ℓ,−d/2}}]
/// times the Verma prefactor.
pub fn full_z_series(p: i64, pq: i64, g: &Rational, cutoff: &Rational) -> Result<BiSeries<CosPoly>> {
    let kac = KacData::new(p, pq)?;
    let kf = to_f64(cutoff) + 1.0;
    let mut raw: Vec<((Rational, Rational), CosPoly)> = Vec::new();
    let rb = 4.0 * kac.n() as f64 * kf / (pq * pq) as f64;
    for l in sq_range(to_f64(g), -2.0, rb) {
        let r = g - int(2 * l);
        let e = kac.shifted(&r, &int(0));
        raw.push(((e.clone(), e), CosPoly::unit()));
    }
    // both exponents bounded forces p²d²/2 ≤ 8n(K + 1/24)
    let dmax = (16.0 * kac.n() as f64 * kf).sqrt() / p as f64 + 1.0;
    for d in 1..=dmax as i64 {
        let s = rat(d, 2);
        for m in 0..d {
            let w = gamma_dm_exact(d as u64, m).mul_ref(&CosPoly::constant(int(2)));
            let x0 = to_f64(&rat(2 * m, d));
            for l in sq_range(x0, -2.0, rb * 4.0) {
                let r = rat(2 * m, d) - int(2 * l);
                let a = kac.shifted(&r, &s);
                let b = kac.shifted(&r, &-&s);
                if a > *cutoff || b > *cutoff {
                    continue;
                }
                raw.push(((a, b), w.clone()));
            }
        }
    }
    Ok(over_euler_bi(&raw, cutoff))
}

/// O(n)-model partition function Ẑ(g, e₀) with Λ(M,N) kept as cos(kπe₀) combinations:
/// (1/ηη̄)[Σ_P (qq̄)^{h_{e₀+2P,0}} + Σ_{M≥1} Σ_P Σ_{N|M, P∧N=1} Λ(M,N) q^{h_{2P/N,M/2}} q̄^{h̄_{2P/N,M/2}}],
/// h_{r,s} = (r+gs)²/4g, h̄_{r,s} = (r−gs)²/4g.
pub fn on_series(g: &Rational, e0: &Rational, cutoff: &Rational) -> Result<BiSeries<CosPoly>> {
    let hw = |r: &Rational, s: &Rational| {
        let x = r + g * s;
        &x * &x / (int(4) * g) - rat(1, 24)
    };
    let hbar = |r: &Rational, s: &Rational| {
        let x = r - g * s;
        &x * &x / (int(4) * g) - rat(1, 24)
    };
    let gf = to_f64(g);
    let kf = to_f64(cutoff) + 1.0;
    let mut raw: Vec<((Rational, Rational), CosPoly)> = Vec::new();
    for pp in sq_range(to_f64(e0), 2.0, 4.0 * gf * kf) {
        let e = hw(&(e0 + int(2 * pp)), &int(0));
        raw.push(((e.clone(), e), CosPoly::unit()));
    }
    // h + h̄ = (r² + g²s²)/2g bounds both M and r = 2P/N
    let smax = (4.0 * kf / gf).sqrt();
    let rmax = (4.0 * gf * kf).sqrt();
    for big_m in 1..=(2.0 * smax) as u64 + 1 {
        let s = rat(big_m as i64, 2);
        for big_n in divisors(big_m) {
            let lam = lambda_prime_exact(big_m, big_n)?;
            let pmax = (rmax * big_n as f64 / 2.0).ceil() as i64 + 1;
            for pp in -pmax..=pmax {
                if gcd_conv(pp, big_n as i64) != 1 {
                    continue;
                }
                let r = rat(2 * pp, big_n as i64);
                let a = hw(&r, &s);
                let b = hbar(&r, &s);
                if a > *cutoff || b > *cutoff {
                    continue;
                }
                raw.push(((a, b), lam.clone()));
            }
        }
    }
    Ok(over_euler_bi(&raw, cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_leading_pair() {
        let s = verma_trace_series(ModelKind::Dense, 1, 2, 0, &rat(1, 2), 0, &int(3)).unwrap();
        let kac = KacData::new(1, 2).unwrap();
        let e = kac.shifted(&rat(1, 2), &int(0));
        assert_eq!(s.terms().keys().next().unwrap(), &(e.clone(), e));
    }

    #[test]
    fn dilute_gamma_period() {
        for d in [0, 1, 3] {
            let a = verma_trace_series(ModelKind::Dilute, 2, 3, d, &rat(1, 3), 0, &int(5)).unwrap();
            let b = verma_trace_series(ModelKind::Dilute, 2, 3, d, &rat(7, 3), 0, &int(5)).unwrap();
            assert!(a.agrees_with(&b));
        }
    }

    #[test]
    fn dense_gamma_shift_sign() {
        for eps in 0..2u8 {
            let a = verma_trace_series(ModelKind::Dense, 3, 4, 2, &rat(1, 5), eps, &int(5)).unwrap();
            let b = verma_trace_series(ModelKind::Dense, 3, 4, 2, &rat(6, 5), eps, &int(5)).unwrap();
            let sg = if eps == 1 { int(-1) } else { int(1) };
            assert!(a.scale(&sg).agrees_with(&b));
        }
    }

    #[test]
    fn full_matches_on_small() {
        let c = int(5);
        for (p, pq) in [(1, 2), (2, 3)] {
            for g in [int(0), rat(1, 3)] {
                let f = full_z_series(p, pq, &g, &c).unwrap();
                let o = on_series(&rat(p, pq), &g, &c).unwrap().swap();
                assert!(f.agrees_with(&o), "({p},{pq}) g={g}: {:?}", f.first_difference(&o));
            }
        }
    }

    #[test]
    fn full_d0_block() {
        let c = int(4);
        let f = full_z_series(3, 4, &rat(2, 5), &c).unwrap();
        let kac = KacData::new(3, 4).unwrap();
        let e = kac.shifted(&rat(2, 5), &int(0));
        assert_eq!(f.coeff(&e, &e), CosPoly::unit());
    }
}
