use std::f64::consts::PI;

use num_complex::Complex64;

use super::{chebyshev_t, divisors, factorize, gcd_conv, mobius};
use crate::error::{Error, Result};
use crate::series::{rat, CosPoly, Rational};

const IMAG_TOL: f64 = 1e-12;

fn certify_real(z: Complex64) -> Result<f64> {
    if z.im.abs() > IMAG_TOL * z.re.abs().max(1.0) {
        Err(Error::ImaginaryResidue(z.im))
    } else {
        Ok(z.re)
    }
}

fn sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Γ^{(v)}_{d,m}(α). For d < 0 the j-sum runs over 0, −1, …, d+1.
pub fn gamma_v(d: i64, m: i64, alpha: f64, v: u8) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidParameter("gamma_v needs d != 0".into()));
    }
    let v = v as i64;
    let n = d.unsigned_abs();
    let mut z = Complex64::new(0.0, 0.0);
    for t in 0..n as i64 {
        let j = d.signum() * t;
        let c = 1.0 + sign(j + v) + sign(m) + sign(m + j + d + v);
        if c == 0.0 {
            continue;
        }
        let phase = PI * (j * m) as f64 / d as f64;
        let t_k = chebyshev_t(gcd_conv(d, j), alpha / 2.0);
        z += Complex64::from_polar(c * t_k, phase);
    }
    certify_real(z / (2.0 * n as f64))
}

/// Γ_{d,m}(γ) = (1/d) Σ_{j=1}^{d} e^{2πijm/d} cos((d∧j)γ).
pub fn gamma_dm(d: u64, m: i64, gamma: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidParameter("gamma_dm needs d > 0".into()));
    }
    let mut z = Complex64::new(0.0, 0.0);
    for j in 1..=d as i64 {
        let phase = 2.0 * PI * (j * m) as f64 / d as f64;
        z += Complex64::from_polar((gcd_conv(d as i64, j) as f64 * gamma).cos(), phase);
    }
    certify_real(z / d as f64)
}

/// c_q(m) = Σ_{a | q∧m} μ(q/a) a.
pub fn ramanujan_sum(q: u64, m: i64) -> i64 {
    let g = gcd_conv(q as i64, m);
    divisors(g)
        .into_iter()
        .map(|a| mobius(q / a) * a as i64)
        .sum()
}

/// Γ_{d,m} as an exact combination of cos(kγ): the coefficient of
/// cos(kγ), k | d, is c_{d/k}(m)/d.
pub fn gamma_dm_exact(d: u64, m: i64) -> CosPoly {
    let mut out = CosPoly::default();
    for k in divisors(d) {
        out.add_term(k, rat(ramanujan_sum(d / k, m), d as i64));
    }
    out
}

fn check_divides(big_m: u64, big_n: u64) -> Result<()> {
    if big_m == 0 || big_n == 0 || big_m % big_n != 0 {
        return Err(Error::InvalidParameter(format!(
            "Lambda({big_m},{big_n}) needs N | M"
        )));
    }
    Ok(())
}

/// Terms (coefficient, k) of the prime-decomposition form of Λ(M,N),
/// standing for coefficient·cos(kπe₀).
fn lambda_prime_terms(big_m: u64, big_n: u64) -> Vec<(Rational, u64)> {
    let primes = factorize(big_m);
    let betas: Vec<u32> = primes
        .iter()
        .map(|&(p, _)| {
            let mut b = 0;
            let mut n = big_n;
            while n % p == 0 {
                n /= p;
                b += 1;
            }
            b
        })
        .collect();
    let mut out = Vec::new();
    let mut gammas: Vec<u32> = betas.clone();
    loop {
        let denom: u64 = primes
            .iter()
            .zip(&gammas)
            .map(|(&(p, _), &g)| p.pow(g))
            .product();
        let k = primes.len();
        let dmax: Vec<u32> = gammas.iter().map(|&g| g.min(1)).collect();
        let mut deltas = vec![0u32; k];
        loop {
            let arg: u64 = primes
                .iter()
                .zip(gammas.iter().zip(&deltas))
                .map(|(&(p, _), (&g, &dl))| p.pow(g - dl))
                .product();
            let s: u32 = deltas.iter().sum();
            let c = if s % 2 == 0 { 2 } else { -2 };
            out.push((rat(c, denom as i64), arg));
            let mut i = 0;
            while i < k {
                if deltas[i] < dmax[i] {
                    deltas[i] += 1;
                    break;
                }
                deltas[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        let mut i = 0;
        while i < primes.len() {
            if gammas[i] < primes[i].1 {
                gammas[i] += 1;
                break;
            }
            gammas[i] = betas[i];
            i += 1;
        }
        if i == primes.len() {
            break;
        }
    }
    out
}

/// Λ(M,N) from the prime decomposition of M and N.
pub fn lambda_prime_form(big_m: u64, big_n: u64, e0: f64) -> Result<f64> {
    check_divides(big_m, big_n)?;
    Ok(lambda_prime_terms(big_m, big_n)
        .into_iter()
        .map(|(c, k)| crate::series::rat_to_f64(&c) * (PI * e0 * k as f64).cos())
        .sum())
}

/// Λ(M,N) as an exact combination of cos(kγ), γ = πe₀.
pub fn lambda_prime_exact(big_m: u64, big_n: u64) -> Result<CosPoly> {
    check_divides(big_m, big_n)?;
    let mut out = CosPoly::default();
    for (c, k) in lambda_prime_terms(big_m, big_n) {
        out.add_term(k, c);
    }
    Ok(out)
}

/// ½Λ(d,n) = Σ_{r | d/n} (1/(nr)) Σ_{a | nr} μ(a) cos((nr/a)γ).
pub fn half_lambda_divisor_form(d: u64, n: u64, gamma: f64) -> Result<f64> {
    Ok(half_lambda_divisor_exact(d, n)?.eval(gamma))
}

pub fn half_lambda_divisor_exact(d: u64, n: u64) -> Result<CosPoly> {
    check_divides(d, n)?;
    let mut out = CosPoly::default();
    for r in divisors(d / n) {
        let nr = n * r;
        for a in divisors(nr) {
            out.add_term(nr / a, rat(mobius(a), nr as i64));
        }
    }
    Ok(out)
}

/// Λ(M,N)(e₀); both closed forms are evaluated and must agree to 1e-12.
pub fn lambda_fsz(big_m: u64, big_n: u64, e0: f64) -> Result<f64> {
    let a = lambda_prime_form(big_m, big_n, e0)?;
    let b = 2.0 * half_lambda_divisor_form(big_m, big_n, PI * e0)?;
    if (a - b).abs() > 1e-12 * a.abs().max(1.0) {
        return Err(Error::Internal(format!(
            "Lambda({big_m},{big_n}) forms disagree: {a} vs {b}"
        )));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Coeff;
    use proptest::prelude::*;

    #[test]
    fn gamma_v_small() {
        for a in [0.3, 1.0, 2.0] {
            assert!((gamma_v(1, 0, a, 0).unwrap() - a / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn gamma_v_even_in_d() {
        for d in 1..12i64 {
            for m in -3..15 {
                for v in 0..2 {
                    let a = gamma_v(d, m, 1.3, v).unwrap();
                    let b = gamma_v(-d, m, 1.3, v).unwrap();
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn gamma_dm_small() {
        for g in [0.0, 0.7, 2.2] {
            assert!((gamma_dm(1, 0, g).unwrap() - g.cos()).abs() < 1e-14);
            let want = 0.5 * ((2.0 * g).cos() - g.cos());
            assert!((gamma_dm(2, 1, g).unwrap() - want).abs() < 1e-14);
        }
    }

    #[test]
    fn gamma_dm_depends_on_gcd_only() {
        for d in 1..=30u64 {
            for m in 0..=2 * d as i64 {
                let g = gcd_conv(m, d as i64) as i64;
                for gam in [0.4, 1.7] {
                    let a = gamma_dm(d, m, gam).unwrap();
                    let b = gamma_dm(d, g, gam).unwrap();
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn exact_gamma_matches_float() {
        for d in 1..=30u64 {
            for m in 0..d as i64 {
                let e = gamma_dm_exact(d, m);
                for gam in [0.0, 0.3, 2.6] {
                    assert!((e.eval(gam) - gamma_dm(d, m, gam).unwrap()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn lambda_small() {
        for e0 in [0.0, 0.2, 0.75] {
            let l11 = lambda_fsz(1, 1, e0).unwrap();
            assert!((l11 - 2.0 * (PI * e0).cos()).abs() < 1e-14);
            let l22 = lambda_fsz(2, 2, e0).unwrap();
            let want = (2.0 * PI * e0).cos() - (PI * e0).cos();
            assert!((l22 - want).abs() < 1e-14);
        }
        assert!(lambda_fsz(6, 4, 0.1).is_err());
    }

    #[test]
    fn exact_forms_agree() {
        for d in 1..=60u64 {
            for n in divisors(d) {
                let a = lambda_prime_exact(d, n).unwrap();
                let b = half_lambda_divisor_exact(d, n).unwrap();
                let two = CosPoly::constant(rat(2, 1));
                assert_eq!(a, b.mul_ref(&two), "d={d} n={n}");
            }
        }
    }

    #[test]
    fn gamma_equals_half_lambda_exactly() {
        for d in 1..=40u64 {
            for m in 1..=d as i64 {
                let n = d / gcd_conv(m, d as i64);
                assert_eq!(gamma_dm_exact(d, m), half_lambda_divisor_exact(d, n).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn gamma_v_is_real(d in 1i64..20, m in -20i64..20, a in 0.0f64..2.5, v in 0u8..2) {
            prop_assert!(gamma_v(d, m, a, v).is_ok());
        }
    }
}
