//! gcd/Möbius/totient/divisors, Chebyshev polynomials, the winding
//! weights Γ and Λ, and brute-force checks of the identities tying them.

mod identities;
mod weights;

pub use identities::{
    prop_my_sides, someeq_sides, sum_lambda2_sides, verify_master, verify_s1_s2,
    ourformulared, S1S2Report,
};
pub use weights::{
    gamma_dm, gamma_dm_exact, gamma_v, half_lambda_divisor_form, half_lambda_divisor_exact,
    lambda_fsz, lambda_prime_exact, lambda_prime_form, ramanujan_sum,
};

use std::ops::{Add, Mul, Sub};

use num_traits::One;

/// gcd with i∧0 = 0∧i = |i|.
pub fn gcd_conv(a: i64, b: i64) -> u64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Prime factorisation as (prime, exponent) pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mobius(n: u64) -> i64 {
    assert!(n > 0);
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n % k == 0 {
            small.push(k);
            if k * k != n {
                large.push(n / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Sieved μ, φ and divisor lists for 1..=bound.
#[derive(Clone, Debug)]
pub struct ArithCache {
    mu: Vec<i64>,
    phi: Vec<u64>,
    divs: Vec<Vec<u64>>,
}

impl ArithCache {
    pub fn new(bound: usize) -> Self {
        let mut mu = vec![1i64; bound + 1];
        let mut phi: Vec<u64> = (0..=bound as u64).collect();
        let mut composite = vec![false; bound + 1];
        for p in 2..=bound {
            if composite[p] {
                continue;
            }
            for k in (p..=bound).step_by(p) {
                if k > p {
                    composite[k] = true;
                }
                mu[k] = -mu[k];
                phi[k] = phi[k] / p as u64 * (p as u64 - 1);
            }
            let sq = p * p;
            for k in (sq..=bound).step_by(sq) {
                mu[k] = 0;
            }
        }
        let mut divs = vec![Vec::new(); bound + 1];
        for d in 1..=bound {
            for k in (d..=bound).step_by(d) {
                divs[k].push(d as u64);
            }
        }
        if bound > 0 {
            mu[0] = 0;
        }
        ArithCache { mu, phi, divs }
    }

    pub fn bound(&self) -> usize {
        self.mu.len() - 1
    }

    pub fn mu(&self, n: u64) -> i64 {
        self.mu.get(n as usize).copied().unwrap_or_else(|| mobius(n))
    }

    pub fn phi(&self, n: u64) -> u64 {
        self.phi.get(n as usize).copied().unwrap_or_else(|| totient(n))
    }

    pub fn divisors(&self, n: u64) -> Vec<u64> {
        match self.divs.get(n as usize) {
            Some(d) => d.clone(),
            None => divisors(n),
        }
    }
}

/// T_k(x) by the three-term recurrence.
pub fn chebyshev_t<T>(k: u64, x: T) -> T
where
    T: Clone + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let mut prev = T::one();
    if k == 0 {
        return prev;
    }
    let mut cur = x.clone();
    let two_x = x.clone() + x;
    for _ in 1..k {
        let next = two_x.clone() * cur.clone() - prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;
    use proptest::prelude::*;

    fn mu_def(n: u64) -> i64 {
        let mut m = n;
        let mut count = 0;
        let mut p = 2;
        while m > 1 {
            if m % p == 0 {
                m /= p;
                if m % p == 0 {
                    return 0;
                }
                count += 1;
            }
            p += 1;
        }
        if count % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn gcd_convention() {
        assert_eq!(gcd_conv(4, 6), 2);
        assert_eq!(gcd_conv(5, 0), 5);
        assert_eq!(gcd_conv(0, -5), 5);
        assert_eq!(gcd_conv(0, 0), 0);
    }

    #[test]
    fn cache_matches_definitions() {
        let c = ArithCache::new(300);
        for n in 1..=300u64 {
            assert_eq!(c.mu(n), mu_def(n), "mu({n})");
            let coprime = (1..=n).filter(|k| gcd_conv(*k as i64, n as i64) == 1).count();
            assert_eq!(c.phi(n), coprime as u64, "phi({n})");
            let ds: Vec<u64> = (1..=n).filter(|k| n % k == 0).collect();
            assert_eq!(c.divisors(n), ds);
            assert_eq!(divisors(n), ds);
            assert_eq!(mobius(n), c.mu(n));
            assert_eq!(totient(n), c.phi(n));
        }
    }

    #[test]
    fn chebyshev_small() {
        assert_eq!(chebyshev_t(0, rat(3, 7)), rat(1, 1));
        assert_eq!(chebyshev_t(1, rat(3, 7)), rat(3, 7));
        assert_eq!(chebyshev_t(3, rat(1, 2)), rat(-1, 1));
        assert_eq!(chebyshev_t(2, rat(1, 3)), rat(2, 9) - rat(1, 1));
    }

    proptest! {
        #[test]
        fn chebyshev_is_cos_multiple(k in 0u64..40, th in 0.0f64..3.14) {
            prop_assert!((chebyshev_t(k, th.cos()) - (k as f64 * th).cos()).abs() < 1e-9);
        }

        #[test]
        fn gcd_divides_both(a in -500i64..500, b in -500i64..500) {
            let g = gcd_conv(a, b) as i64;
            if g != 0 {
                prop_assert_eq!(a % g, 0);
                prop_assert_eq!(b % g, 0);
            } else {
                prop_assert!(a == 0 && b == 0);
            }
        }
    }
}
