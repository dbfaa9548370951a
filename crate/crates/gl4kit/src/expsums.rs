//! Kloosterman and hyper-Kloosterman sums with exact phase reduction, the
//! Poisson identity for twisted sums over k, and the additive large sieve.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{e_frac, euler_phi, gcd, gcd_i, lcm, mod_inv, rem, tau};
use crate::error::{Error, Result};
use crate::psi::TestFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueClass {
    pub value: u64,
    pub modulus: u64,
}

impl ResidueClass {
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Argument("modulus must be positive".into()));
        }
        Ok(ResidueClass { value: rem(value, modulus), modulus })
    }

    pub fn is_unit(&self) -> bool {
        gcd(self.value, self.modulus) == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperKLParams {
    pub q: [u64; 2],
    pub d: [u64; 2],
    pub r: u64,
}

impl HyperKLParams {
    pub fn new(q: [u64; 2], d: [u64; 2], r: u64) -> Result<Self> {
        if q.contains(&0) || d.contains(&0) || r == 0 {
            return Err(Error::Argument("hyper-Kloosterman parameters must be positive".into()));
        }
        if (q[0] * r) % d[0] != 0 {
            return Err(Error::Argument(format!("d1 = {} does not divide q1 r = {}", d[0], q[0] * r)));
        }
        let m2 = q[0] * q[1] * r / d[0];
        if m2 % d[1] != 0 {
            return Err(Error::Argument(format!("d2 = {} does not divide {m2}", d[1])));
        }
        Ok(HyperKLParams { q, d, r })
    }

    /// The two inner moduli q₁r/d₁ and q₁q₂r/(d₁d₂).
    pub fn moduli(&self) -> (u64, u64) {
        let m1 = self.q[0] * self.r / self.d[0];
        let m2 = self.q[0] * self.q[1] * self.r / (self.d[0] * self.d[1]);
        (m1, m2)
    }
}

/// Units modulo m paired with their inverses.
fn units_with_inverses(m: u64) -> Vec<(u64, u64)> {
    if m == 1 {
        return vec![(0, 0)];
    }
    (1..m)
        .filter_map(|x| mod_inv(x as i64, m).map(|xi| (x, xi)))
        .collect()
}

/// S(k, n; r) = Σ*_{x mod r} e((kx + n x̄)/r).
pub fn kloosterman(k: i64, n: i64, r: u64) -> Complex64 {
    assert!(r >= 1, "modulus must be positive");
    let (k, n) = (rem(k, r), rem(n, r));
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, xi) in units_with_inverses(r) {
        let num = (k as u128 * x as u128 + n as u128 * xi as u128) % r as u128;
        acc += e_frac(num as i64, r);
    }
    acc
}

/// 𝒦ℒ(a, m, r; q, d), the double sum over x₁ mod q₁r/d₁ and x₂ mod q₁q₂r/(d₁d₂).
pub fn hyper_kloosterman(a: i64, m: i64, p: &HyperKLParams) -> Result<Complex64> {
    let p = HyperKLParams::new(p.q, p.d, p.r)?;
    let (m1, m2) = p.moduli();
    let big = lcm(lcm(p.r, m1), m2);
    let (c0, c1, c2) = ((big / p.r) as i128, (big / m1) as i128, (big / m2) as i128);
    let big_i = big as i128;
    let a0 = (p.d[0] as i128 * rem(a, p.r) as i128) % big_i;
    let mm = rem(m, m2) as i128;
    let u1 = units_with_inverses(m1);
    let u2 = units_with_inverses(m2);
    let mut acc = Complex64::new(0.0, 0.0);
    for &(x1, x1i) in &u1 {
        let base = (a0 * x1 as i128 % big_i) * c0 % big_i;
        for &(x2, x2i) in &u2 {
            let t1 = (p.d[1] as i128 * x2 as i128 % m1 as i128) * x1i as i128 % m1 as i128 * c1;
            let t2 = mm * x2i as i128 % m2 as i128 * c2;
            let num = (base + t1 + t2) % big_i;
            acc += e_frac(num as i64, big);
        }
    }
    Ok(acc)
}

/// Both sides of Σ_k w(k/K) e((a₁−a₂)k/r) = K Σ_{j ≡ a₂−a₁ (r)} ŵ(Kj/r).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub terms: usize,
}

pub fn poisson_over_k(
    w: &TestFunction,
    k_scale: f64,
    r: u64,
    a1: ResidueClass,
    a2: ResidueClass,
) -> Result<PoissonReport> {
    if k_scale <= 0.0 || r == 0 {
        return Err(Error::Argument("K and r must be positive".into()));
    }
    let h = a1.value as i64 - a2.value as i64;
    let (lo, hi) = w.support();
    let kmin = (lo * k_scale).ceil() as i64;
    let kmax = (hi * k_scale).floor() as i64;
    let mut lhs = Complex64::new(0.0, 0.0);
    for k in kmin..=kmax {
        lhs += e_frac(h * k, r) * w.eval(k as f64 / k_scale);
    }
    let j0 = rem(-h, r) as i64;
    let step = r as i64;
    let mut rhs = Complex64::new(0.0, 0.0);
    let mut terms = 0;
    let scale = w.integral().abs().max(1e-300);
    // Walk outward from the two residues nearest zero until ŵ is negligible.
    for (start, dir) in [(j0, 1i64), (j0 - step, -1i64)] {
        let mut j = start;
        let mut quiet = 0;
        loop {
            let xi = k_scale * j as f64 / r as f64;
            let v = w.fourier(xi);
            rhs += v;
            terms += 1;
            // 1e-14 sits above the rounding floor of the quadrature for ŵ.
            if v.norm() < 1e-14 * scale {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
            if terms > 200_000 {
                return Err(Error::Truncation(
                    "dual sum did not reach a 1e-14 tail within 2e5 terms".into(),
                ));
            }
            j += dir * step;
        }
    }
    Ok(PoissonReport { lhs, rhs: rhs * k_scale, terms })
}

/// Σ_{R<r≤2R} Σ*_{x mod r} |Σ_m b_m e(mx/r)|² / ((R² + M) Σ|b_m|²), where
/// `b[i]` is the coefficient of m = m_start + i and M = b.len().
pub fn additive_large_sieve_ratio(b: &[Complex64], m_start: u64, r_dyadic: u64) -> Result<f64> {
    let mass: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    if b.is_empty() || mass == 0.0 {
        return Err(Error::Argument("coefficient vector is zero".into()));
    }
    let mut num = 0.0;
    for r in (r_dyadic + 1)..=(2 * r_dyadic) {
        // Fold b into residue classes mod r first.
        let mut folded = vec![Complex64::new(0.0, 0.0); r as usize];
        for (i, z) in b.iter().enumerate() {
            folded[((m_start + i as u64) % r) as usize] += z;
        }
        for x in 1..=r {
            if gcd(x, r) != 1 {
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for (c, z) in folded.iter().enumerate() {
                s += z * e_frac((c as u64 * x % r) as i64, r);
            }
            num += s.norm_sqr();
        }
    }
    let rr = r_dyadic as f64;
    Ok(num / ((rr * rr + b.len() as f64) * mass))
}

/// Largest |S(k,n;r)| / (τ(r) gcd(k,n,r)^{1/2} r^{1/2}) over r ≤ r_max and
/// k, n in 0..=6.
pub fn weil_check(r_max: u64) -> Result<f64> {
    if r_max > 10_000 {
        return Err(Error::Argument("r_max above 10^4".into()));
    }
    let mut worst: f64 = 0.0;
    for r in 1..=r_max {
        let t = tau(r) as f64;
        for k in 0..=6i64 {
            for n in 0..=6i64 {
                let g = gcd(gcd_i(k, n), r) as f64;
                let s = kloosterman(k, n, r).norm();
                worst = worst.max(s / (t * g.sqrt() * (r as f64).sqrt()));
            }
        }
    }
    Ok(worst)
}

/// Σ_{a mod r} e(a(x − x′)/r), which is r when x ≡ x′ and 0 otherwise.
pub fn orthogonality_sum(x: i64, xp: i64, r: u64) -> Complex64 {
    (0..r as i64).map(|a| e_frac(a * (x - xp), r)).sum()
}

/// Number of reduced residues, exposed for spike checks.
pub fn unit_count(r: u64) -> u64 {
    euler_phi(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn naive_e(x: f64) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * x)
    }

    /// Direct float enumeration with inverses found by search.
    fn kloosterman_oracle(k: i64, n: i64, r: u64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for x in 0..r {
            if gcd(x, r) != 1 {
                continue;
            }
            let xi = (0..r).find(|&y| (x * y) % r == 1 % r).unwrap();
            acc += naive_e((k as f64 * x as f64 + n as f64 * xi as f64) / r as f64);
        }
        acc
    }

    #[test]
    fn kloosterman_small_values() {
        for r in 1..30 {
            assert!((kloosterman(0, 0, r).re - euler_phi(r) as f64).abs() < 1e-12);
        }
        assert!((kloosterman(1, 1, 2) - 1.0).norm() < 1e-14);
        assert!((kloosterman(1, 1, 3) + 1.0).norm() < 1e-14);
    }

    #[test]
    fn kloosterman_matches_oracle_real_and_symmetric() {
        for r in 1..80u64 {
            for (k, n) in [(1, 1), (2, 5), (-3, 7), (0, 4), (6, 6)] {
                let s = kloosterman(k, n, r);
                assert!((s - kloosterman_oracle(k, n, r)).norm() < 1e-9, "r={r}");
                assert!(s.im.abs() < 1e-10 * s.norm().max(1.0));
                assert!((s - kloosterman(n, k, r)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn hyper_kloosterman_trivial_cases() {
        let p = HyperKLParams::new([1, 1], [1, 1], 1).unwrap();
        assert!((hyper_kloosterman(3, 5, &p).unwrap() - 1.0).norm() < 1e-15);
        let p = HyperKLParams::new([1, 1], [1, 1], 2).unwrap();
        assert!((hyper_kloosterman(1, 1, &p).unwrap() + 1.0).norm() < 1e-14);
        assert!(HyperKLParams::new([1, 1], [3, 1], 2).is_err());
    }

    #[test]
    fn orthogonality() {
        for r in 1..=100u64 {
            for (x, xp) in [(0, 0), (3, 3 + r as i64), (1, 2), (5, -7)] {
                let want = if (x - xp).rem_euclid(r as i64) == 0 { r as f64 } else { 0.0 };
                assert!((orthogonality_sum(x, xp, r) - want).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn weil_on_primes_and_r_one() {
        assert!((weil_check(1).unwrap() - 1.0).abs() < 1e-12);
        for p in [5u64, 7, 11, 101] {
            let s = kloosterman(1, 1, p).norm();
            assert!(s <= 2.0 * (p as f64).sqrt() + 1e-9);
        }
    }

    #[test]
    fn large_sieve_spike_and_zero() {
        let mut b = vec![Complex64::new(0.0, 0.0); 16];
        b[3] = Complex64::new(1.0, 0.0);
        let ratio = additive_large_sieve_ratio(&b, 16, 8).unwrap();
        let units: u64 = (9..=16).map(unit_count).sum();
        assert!((ratio - units as f64 / (64.0 + 16.0)).abs() < 1e-12);
        assert!(additive_large_sieve_ratio(&vec![Complex64::new(0.0, 0.0); 4], 1, 2).is_err());
    }
}
