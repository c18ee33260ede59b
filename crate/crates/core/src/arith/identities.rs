use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{chebyshev_t, divisors, gamma_dm, gamma_v, gcd_conv, mobius, totient};
use crate::error::Result;
use crate::series::{rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct S1S2Report {
    pub d: u64,
    pub window: i64,
    pub s1_len: usize,
    pub s1_distinct: usize,
    pub s2_len: usize,
    pub roundtrip_ok: bool,
}

impl S1S2Report {
    pub fn holds(&self) -> bool {
        self.s1_len == self.s1_distinct && self.s1_len == self.s2_len && self.roundtrip_ok
    }
}

/// Compares S₁ and S₂ inside the window |P| ≤ B; also checks that the
/// inverse map (P,N) → (m,ℓ) lands back on (P,N).
pub fn verify_s1_s2(d: u64, window: i64) -> S1S2Report {
    let di = d as i64;
    let mut s1 = Vec::new();
    for m in 1..=di {
        let g = gcd_conv(m, di) as i64;
        let lmin = (m - window * g).div_euclid(di) - 1;
        let lmax = (m + window * g).div_euclid(di) + 1;
        for l in lmin..=lmax {
            let p = (m - l * di) / g;
            if p.abs() <= window {
                s1.push((p, di / g));
            }
        }
    }
    let s1_set: BTreeSet<(i64, i64)> = s1.iter().copied().collect();
    let mut s2 = BTreeSet::new();
    for n in divisors(d) {
        for p in -window..=window {
            if gcd_conv(p, n as i64) == 1 {
                s2.insert((p, n as i64));
            }
        }
    }
    let mut roundtrip_ok = s1_set == s2;
    for &(p, n) in &s2 {
        let pdn = p * di / n;
        let m = (pdn - 1).rem_euclid(di) + 1;
        let l = (m - pdn) / di;
        let g = gcd_conv(m, di) as i64;
        if (m - l * di) / g != p || di / g != n {
            roundtrip_ok = false;
        }
    }
    S1S2Report {
        d,
        window,
        s1_len: s1.len(),
        s1_distinct: s1_set.len(),
        s2_len: s2.len(),
        roundtrip_ok,
    }
}

/// (aℓ/φ(aℓ)) Σ_{k|ℓ} μ(ak)/(ak) = μ(a)/φ(a), exactly.
pub fn verify_master(a: u64, l: u64) -> bool {
    let al = (a * l) as i64;
    let mut sum = Rational::from_integer(0.into());
    for k in divisors(l) {
        sum += rat(mobius(a * k), (a * k) as i64);
    }
    let lhs = rat(al, totient(a * l) as i64) * sum;
    lhs == rat(mobius(a), totient(a) as i64)
}

/// Both sides of Σ_{k=1}^{n} Γ_{kd/n,d} = Σ_{r|n} φ(n/r) Γ_{rd/n,d}.
pub fn sum_lambda2_sides(d: u64, n: u64, gamma: f64) -> Result<(f64, f64)> {
    let step = (d / n) as i64;
    let mut lhs = 0.0;
    for k in 1..=n as i64 {
        lhs += gamma_dm(d, k * step, gamma)?;
    }
    let mut rhs = 0.0;
    for r in divisors(n) {
        rhs += totient(n / r) as f64 * gamma_dm(d, r as i64 * step, gamma)?;
    }
    Ok((lhs, rhs))
}

/// Both sides of the Möbius-inverted relation for φ(n)Γ_{d/n,d}.
pub fn someeq_sides(d: u64, n: u64, gamma: f64) -> Result<(f64, f64)> {
    let lhs = totient(n) as f64 * gamma_dm(d, (d / n) as i64, gamma)?;
    let mut rhs = 0.0;
    for a in divisors(n) {
        let top = a * d / n;
        let mut inner = 0.0;
        for l in 1..=top as i64 {
            let k = gcd_conv(top as i64, l) * n / a;
            inner += (k as f64 * gamma).cos();
        }
        rhs += mobius(a) as f64 * n as f64 / (a * d) as f64 * inner;
    }
    Ok((lhs, rhs))
}

/// Γ_{d/n,d} from the reduced divisor-sum formula.
pub fn ourformulared(d: u64, n: u64, gamma: f64) -> f64 {
    let mut s = 0.0;
    for a in divisors(n) {
        let mut inner = 0.0;
        for r in divisors(a * d / n) {
            let k = n * r / a;
            inner += totient(a * d / (n * r)) as f64 * (k as f64 * gamma).cos();
        }
        s += mobius(a) as f64 / a as f64 * inner;
    }
    n as f64 / (totient(n) * d) as f64 * s
}

/// Both sides of Σ_x (1+(−1)^{x+v}) T_{d∧x}(α/2) M_{d,x} = Σ_m Γ^{(v)}_{d,m} Y_{m,d}
/// for given M_{d,x}, x = 0, ±1, …, ±(2|d|−1) (sign of d). The right side is
/// returned as a complex number; its imaginary part should vanish.
pub fn prop_my_sides(d: i64, v: u8, alpha: f64, mvals: &[f64]) -> Result<(f64, Complex64)> {
    let n = 2 * d.unsigned_abs() as usize;
    assert_eq!(mvals.len(), n, "need 2|d| values");
    let sg = d.signum();
    let mut lhs = 0.0;
    for (t, mv) in mvals.iter().enumerate() {
        let x = sg * t as i64;
        let par = if (x + v as i64).rem_euclid(2) == 0 { 2.0 } else { 0.0 };
        lhs += par * chebyshev_t(gcd_conv(d, x), alpha / 2.0) * mv;
    }
    let mut rhs = Complex64::new(0.0, 0.0);
    for tm in 0..n {
        let m = sg * tm as i64;
        let mut y = Complex64::new(0.0, 0.0);
        for (t, mv) in mvals.iter().enumerate() {
            let x = sg * t as i64;
            y += Complex64::from_polar(*mv, -PI * (m * x) as f64 / d as f64);
        }
        rhs += gamma_v(d, m, alpha, v)? * y;
    }
    Ok((lhs, rhs))
}
