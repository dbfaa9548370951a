//! Integer-order Bessel functions: power series in double-double arithmetic
//! below the crossover, Hankel asymptotics above it, and the slowly varying
//! amplitude W_k of the oscillatory decomposition of J_k.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Series/asymptotic crossover point.
pub const CROSSOVER: f64 = 30.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
}

impl Dd {
    fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let hi = two_sum(s.hi, s.lo + t.hi);
        two_sum(hi.hi, hi.lo + t.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        two_sum(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    fn div_f(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let r = self.add(Dd::new(-q1 * d).add(Dd::new(-q1.mul_add(d, -q1 * d))));
        let q2 = r.hi / d;
        two_sum(q1, q2)
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Terms t_ℓ = (−1)^ℓ (x/2)^{2ℓ+k} / (ℓ!(ℓ+k)!) of the power series, summed
/// with weights `weight(ℓ)` in double-double.
fn series_sum<F: Fn(usize) -> Dd>(k: u32, x: f64, weight: F) -> f64 {
    let half = Dd::new(x / 2.0);
    let q = half.mul(half);
    let mut t = Dd::new(1.0);
    for i in 1..=k {
        t = t.mul(half).div_f(i as f64);
    }
    let mut acc = Dd::new(0.0);
    let mut peak: f64 = 0.0;
    for l in 0..10_000usize {
        let term = t.mul(weight(l));
        acc = acc.add(term);
        peak = peak.max(t.hi.abs());
        if t.hi.abs() < 1e-34 * peak.max(1e-300) && l as f64 > x {
            break;
        }
        t = t.mul(q).div_f(((l + 1) * (l + 1 + k as usize)) as f64).neg();
    }
    acc.to_f64()
}

/// J_k(x) from the power series J_k(2y) = Σ (−1)^ℓ y^{2ℓ+k}/(ℓ!(ℓ+k)!).
pub fn bessel_j_series(k: u32, x: f64) -> f64 {
    series_sum(k, x, |_| Dd::new(1.0))
}

/// Hankel asymptotic amplitudes P_k(x), Q_k(x), with H^{(1)}_k(x) =
/// sqrt(2/(πx)) e^{iχ}(P + iQ), χ = x − kπ/2 − π/4.
fn hankel_pq(k: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (k as f64) * (k as f64);
    let (mut p, mut q) = (0.0, 0.0);
    let mut a: f64 = 1.0;
    let mut prev = f64::INFINITY;
    for j in 0..200usize {
        let term = a;
        if term.abs() > prev || term.abs() < 1e-18 {
            break;
        }
        prev = term.abs();
        match j % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        let odd = (2 * j + 1) as f64;
        a *= (mu - odd * odd) / ((j + 1) as f64 * 8.0 * x);
    }
    (p, q)
}

fn chi(k: u32, x: f64) -> f64 {
    x - (k as f64) * PI / 2.0 - PI / 4.0
}

/// J_k(x) from the Hankel asymptotic expansion (valid for x ≳ 20).
pub fn bessel_j_asymptotic(k: u32, x: f64) -> f64 {
    let (p, q) = hankel_pq(k, x);
    let c = chi(k, x);
    (2.0 / (PI * x)).sqrt() * (p * c.cos() - q * c.sin())
}

/// J_k(x) for x ≥ 0.
pub fn bessel_j(k: u32, x: f64) -> f64 {
    assert!(x >= 0.0, "bessel_j needs x >= 0");
    if x < CROSSOVER {
        bessel_j_series(k, x)
    } else {
        bessel_j_asymptotic(k, x)
    }
}

/// J_k for any integer order, using J_{−k} = (−1)^k J_k.
pub fn bessel_j_signed(k: i32, x: f64) -> f64 {
    let v = bessel_j(k.unsigned_abs(), x);
    if k < 0 && k % 2 != 0 {
        -v
    } else {
        v
    }
}

/// Y_k(x) from its power series, for 0 < x below the crossover.
fn bessel_y_series(k: u32, x: f64) -> f64 {
    let kk = k as usize;
    // Finite part −(1/π) Σ_{i<k} (k−i−1)!/i! (x/2)^{2i−k}.
    let half = x / 2.0;
    let mut finite = 0.0;
    for i in 0..kk {
        let mut c = 1.0;
        for j in 1..=(kk - i - 1) {
            c *= j as f64;
        }
        for j in 1..=i {
            c /= j as f64;
        }
        finite += c * half.powi(2 * i as i32 - k as i32);
    }
    let j = bessel_j_series(k, x);
    // Harmonic part Σ (H_ℓ + H_{ℓ+k}) t_ℓ.
    let harmonic = |n: usize| {
        let mut h = Dd::new(0.0);
        for m in 1..=n {
            h = h.add(Dd::new(1.0).div_f(m as f64));
        }
        h
    };
    let hk = harmonic(kk);
    let s = series_sum(k, x, |l| {
        let mut hl = Dd::new(0.0);
        let mut hlk = hk;
        for m in 1..=l {
            hl = hl.add(Dd::new(1.0).div_f(m as f64));
            hlk = hlk.add(Dd::new(1.0).div_f((m + kk) as f64));
        }
        hl.add(hlk)
    });
    -finite / PI + 2.0 / PI * ((x / 2.0).ln() + EULER_GAMMA) * j - s / PI
}

/// H^{(1)}_k(x) = J_k(x) + i Y_k(x).
pub fn hankel1(k: u32, x: f64) -> Complex64 {
    if x < CROSSOVER {
        Complex64::new(bessel_j_series(k, x), bessel_y_series(k, x))
    } else {
        let (p, q) = hankel_pq(k, x);
        Complex64::from_polar((2.0 / (PI * x)).sqrt(), chi(k, x)) * Complex64::new(p, q)
    }
}

/// W_k(z) with J_k(2πx) = (1/(2π√x)) [W_k(2πx) e(x − k/4 − 1/8) + conj], z = 2πx.
pub fn w_k(k: u32, z: f64) -> Result<Complex64> {
    if z < 1.0 {
        return Err(Error::Domain(format!("W_k needs argument >= 1, got {z}")));
    }
    if z >= CROSSOVER {
        let (p, q) = hankel_pq(k, z);
        return Ok(Complex64::new(p, q));
    }
    let h = hankel1(k, z);
    Ok(h * Complex64::from_polar((PI * z / 2.0).sqrt(), -chi(k, z)))
}

/// Right-hand side of the W_k reconstruction of J_k(2πx).
pub fn reconstruct_j(k: u32, x: f64) -> Result<f64> {
    let z = 2.0 * PI * x;
    let w = w_k(k, z)?;
    let ph = Complex64::from_polar(1.0, chi(k, z));
    Ok(2.0 * (w * ph).re / (2.0 * PI * x.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(3, 0.0), 0.0);
        // J_2(2) = Σ (−1)^ℓ / (ℓ!(ℓ+2)!); partial sums with alternating tail bound.
        let mut s = 0.0;
        let mut f = 1.0;
        for l in 0..20 {
            let mut g = 1.0;
            for j in 1..=(l + 2) {
                g *= j as f64;
            }
            if l > 0 {
                f *= l as f64;
            }
            s += if l % 2 == 0 { 1.0 } else { -1.0 } / (f * g);
        }
        assert!((bessel_j(2, 2.0) - s).abs() < 1e-15);
        assert!((bessel_j(2, 2.0) - 0.352_834_028_615_637_8).abs() < 1e-15);
    }

    #[test]
    fn handover_window_agrees() {
        for k in 0..4 {
            let mut x = 25.0;
            while x <= 35.0 {
                let d = (bessel_j_series(k, x) - bessel_j_asymptotic(k, x)).abs();
                assert!(d < 1e-10, "k={k} x={x} d={d}");
                x += 0.37;
            }
        }
    }

    #[test]
    fn three_term_recurrence() {
        for k in 1..5u32 {
            for i in 1..200 {
                let x = 0.5 * i as f64;
                let lhs = bessel_j(k - 1, x) + bessel_j(k + 1, x);
                let rhs = 2.0 * k as f64 / x * bessel_j(k, x);
                assert!((lhs - rhs).abs() < 1e-9, "k={k} x={x}");
            }
        }
    }

    #[test]
    fn wronskian_fixes_y() {
        // J_{k+1} Y_k − J_k Y_{k+1} = 2/(πx)
        for k in 0..3u32 {
            for &x in &[1.0, 4.5, 17.0, 29.0, 40.0] {
                let a = hankel1(k, x);
                let b = hankel1(k + 1, x);
                let w = b.re * a.im - a.re * b.im;
                assert!((w - 2.0 / (PI * x)).abs() < 1e-12, "k={k} x={x}");
            }
        }
    }

    #[test]
    fn w_tends_to_one() {
        assert!((w_k(0, 2.0 * PI * 100.0).unwrap() - 1.0).norm() < 1e-2);
        assert!(w_k(0, 0.5).is_err());
    }
}
