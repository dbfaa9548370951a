//! Complex log-Gamma: Lanczos for moderate arguments, Stirling for large
//! ones, reflection on the left half-plane.

use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// B_{2k} / (2k (2k-1)) for k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// ln Γ(z) by the Lanczos series, for Re z ≥ 1/2.
pub fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (z + 0.5) * t.ln() - t + HALF_LN_2PI + a.ln()
}

/// ln Γ(z) by the Stirling series, accurate for |z| ≥ 12 away from the negative axis.
pub fn ln_gamma_stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut pw = inv;
    for c in STIRLING {
        corr += pw * c;
        pw *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + corr
}

/// A logarithm of sin(πz), stable for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 20.0 {
        return (z * PI).sin().ln();
    }
    // sin(πz) = (i/2) e^{-iπz} (1 - e^{2πiz}) for Im z > 0, conjugate otherwise.
    if z.im > 0.0 {
        let i = Complex64::i();
        let small = (i * 2.0 * PI * z).exp();
        (i * 0.5).ln() - i * PI * z + (Complex64::new(1.0, 0.0) - small).ln()
    } else {
        ln_sin_pi(z.conj()).conj()
    }
}

/// A branch of ln Γ(z); exp of it is Γ(z). Infinite at the poles.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        if z.im == 0.0 && z.re == z.re.round() {
            return Complex64::new(f64::INFINITY, 0.0);
        }
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(1.0 - z);
    }
    if z.norm() >= 12.0 {
        ln_gamma_stirling(z)
    } else {
        ln_gamma_lanczos(z)
    }
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// 1/Γ(z), exactly zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Complex64::new(0.0, 0.0);
    }
    (-ln_gamma(z)).exp()
}

/// Distance from z to the nearest pole of Γ.
pub fn pole_distance(z: Complex64) -> f64 {
    let n = z.re.round().min(0.0);
    (z - n).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn known_values() {
        assert!((gamma(c(0.5, 0.0)).re - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(c(5.0, 0.0)).re - 24.0).abs() < 1e-12);
        assert!((gamma(c(-0.5, 0.0)).re + 2.0 * PI.sqrt()).abs() < 1e-13);
        // |Γ(1/2 + it)|² = π / cosh(πt)
        for t in [0.3, 2.0, 11.0, 40.0] {
            let g = gamma(c(0.5, t));
            assert!((g.norm_sqr() / (PI / (PI * t).cosh()) - 1.0).abs() < 1e-12, "{t}");
        }
    }

    #[test]
    fn lanczos_and_stirling_agree() {
        for &(x, y) in &[(6.0, 11.0), (12.5, 0.3), (3.0, 14.0), (9.0, -10.0)] {
            let a = ln_gamma_lanczos(c(x, y)).exp();
            let b = ln_gamma_stirling(c(x, y)).exp();
            assert!(((a - b) / b).norm() < 1e-13, "{x} {y}");
        }
    }

    #[test]
    fn recurrence_and_reflection() {
        for &(x, y) in &[(0.3, 0.2), (-2.7, 1.5), (-7.2, -30.0), (0.1, 300.0)] {
            let z = c(x, y);
            // Compare logarithms: |Γ| underflows complex division at large |y|.
            let d = ln_gamma(z + 1.0) - ln_gamma(z) - z.ln();
            let k = (d.im / (2.0 * PI)).round();
            assert!((d - c(0.0, 2.0 * PI * k)).norm() < 1e-11, "{x} {y} {d}");
        }
        assert_eq!(rgamma(c(-3.0, 0.0)), c(0.0, 0.0));
        assert!(pole_distance(c(-2.0, 1e-9)) < 1e-8);
    }
}
