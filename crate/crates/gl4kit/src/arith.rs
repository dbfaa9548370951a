//! Integer helpers shared by the coefficient and exponential-sum code.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest integer accepted by [`factorize`].
pub const FACTOR_CAP: u64 = 1 << 50;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i(a: i64, b: i64) -> u64 {
    gcd(a.unsigned_abs(), b.unsigned_abs())
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Reduce `a` into `0..m`.
pub fn rem(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn mod_inv(a: i64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, rem(a, m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// e(num/den) = exp(2 pi i num/den), with the fraction reduced exactly first.
pub fn e_frac(num: i64, den: u64) -> Complex64 {
    let r = rem(num, den);
    if r == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let theta = 2.0 * PI * (r as f64 / den as f64);
    Complex64::new(theta.cos(), theta.sin())
}

/// e(x) for real x.
pub fn e(x: f64) -> Complex64 {
    let f = x - x.floor();
    let theta = 2.0 * PI * f;
    Complex64::new(theta.cos(), theta.sin())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Prime factorization as (p, exponent) pairs in increasing order.
pub fn factorize(mut n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Argument("cannot factor 0".into()));
    }
    if n > FACTOR_CAP {
        return Err(Error::Capacity(n));
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// Multiplicity of `p` in `n`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

/// Sorted divisors of n (n > 0).
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n).expect("mobius argument within capacity");
    if f.iter().any(|&(_, k)| k > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    let f = factorize(n).expect("phi argument within capacity");
    f.iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Number of divisors.
pub fn tau(n: u64) -> u64 {
    let f = factorize(n).expect("tau argument within capacity");
    f.iter().map(|&(_, k)| k as u64 + 1).product()
}

pub fn primes_up_to(n: usize) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

/// d_4(n) for every n ≤ limit by a multiplicative sieve; index 0 is unused.
pub fn d4_table(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    let mut out = vec![0u32; limit + 1];
    if limit >= 1 {
        out[1] = 1;
    }
    let mut primes: Vec<u32> = Vec::new();
    for n in 2..=limit {
        if spf[n] == 0 {
            spf[n] = n as u32;
            primes.push(n as u32);
        }
        for &p in &primes {
            let m = n * p as usize;
            if p > spf[n] || m > limit {
                break;
            }
            spf[m] = p;
        }
    }
    for n in 2..=limit {
        let p = spf[n] as usize;
        let mut m = n / p;
        let mut k = 1u32;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        // d_4(p^k) = C(k+3, 3)
        let local = (k + 1) * (k + 2) * (k + 3) / 6;
        out[n] = out[m] * local;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        for m in 2..60u64 {
            for a in 0..m {
                match mod_inv(a as i64, m) {
                    Some(x) => assert_eq!(mul_mod(a, x, m), 1),
                    None => assert!(gcd(a, m) > 1),
                }
            }
        }
        assert_eq!(mod_inv(-1, 7), Some(6));
    }

    #[test]
    fn primality_matches_sieve() {
        let ps = primes_up_to(5000);
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), ps.binary_search(&n).is_ok(), "{n}");
        }
        assert!(is_prime(1_000_000_007));
    }

    #[test]
    fn multiplicative_functions() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(euler_phi(36), 12);
        assert_eq!(tau(36), 9);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert!(factorize(FACTOR_CAP + 1).is_err());
    }

    #[test]
    fn d4_sieve_against_brute_force() {
        let t = d4_table(300);
        for n in 1..=300u64 {
            let mut count = 0;
            for a in divisors(n) {
                for b in divisors(n / a) {
                    count += divisors(n / a / b).len() as u32;
                }
            }
            assert_eq!(t[n as usize], count, "{n}");
        }
    }

    #[test]
    fn exact_phase() {
        let z = e_frac(3 * 1_000_003 + 1, 1_000_003);
        let w = e_frac(1, 1_000_003);
        assert!((z - w).norm() < 1e-15);
    }
}
