//! Gamma-factor algebra, the approximate-functional-equation weight, the
//! Stirling-type expansion H(s), and Bessel functions.

pub mod bessel;
pub mod gamma;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeffs::ArchParams;
use crate::error::{Error, Result};
use crate::quad;
pub use bessel::{bessel_j, reconstruct_j, w_k};
pub use gamma::{gamma, ln_gamma, rgamma};

const POLE_EPS: f64 = 1e-8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Representation parameter (λ, δ) of a GL(4) form at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaData {
    pub lambda: [Complex64; 4],
    pub delta: [u8; 4],
}

impl GammaData {
    /// λ_j = α_j, δ_j = 0.
    pub fn from_arch(a: &ArchParams) -> Self {
        GammaData { lambda: a.alpha.map(|x| c(x, 0.0)), delta: [0; 4] }
    }

    pub fn zero() -> Self {
        GammaData { lambda: [c(0.0, 0.0); 4], delta: [0; 4] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

fn check_pole(z: Complex64, what: &str) -> Result<()> {
    if gamma::pole_distance(z) < POLE_EPS {
        return Err(Error::Pole(format!("{what} at {z}")));
    }
    Ok(())
}

/// ln Γ_ℝ(s) = −(s/2) ln π + ln Γ(s/2).
pub fn ln_gamma_r(s: Complex64) -> Complex64 {
    -s * 0.5 * PI.ln() + ln_gamma(s * 0.5)
}

pub fn gamma_r(s: Complex64) -> Result<Complex64> {
    check_pole(s * 0.5, "Gamma_R pole")?;
    Ok(ln_gamma_r(s).exp())
}

/// Γ-arguments (numerator, denominator) of 𝔊_δ(s) = [i] π^{1/2−s} Γ(num)/Γ(den).
fn gg_args(s: Complex64, delta: u8) -> (Complex64, Complex64) {
    if delta % 2 == 0 {
        (s * 0.5, (1.0 - s) * 0.5)
    } else {
        ((s + 1.0) * 0.5, 1.0 - s * 0.5)
    }
}

/// 𝔊_δ(s): Γ_ℝ(s)/Γ_ℝ(1−s) for even δ, i Γ_ℝ(s+1)/Γ_ℝ(2−s) for odd δ.
pub fn gg_delta(s: Complex64, delta: u8) -> Result<Complex64> {
    let (num, den) = gg_args(s, delta);
    check_pole(num, "G_delta pole")?;
    if gamma::pole_distance(den) == 0.0 {
        return Ok(c(0.0, 0.0));
    }
    let ln = (0.5 - s) * PI.ln() + ln_gamma(num) - ln_gamma(den);
    let v = ln.exp();
    Ok(if delta % 2 == 0 { v } else { v * Complex64::i() })
}

/// ln G_±(s); the caller exponentiates. Errors on poles of G_±.
pub fn ln_g_pm(s: Complex64, g: &GammaData, sign: Sign) -> Result<Complex64> {
    let shift = match sign {
        Sign::Plus => 0,
        Sign::Minus => 1,
    };
    let mut acc = c(0.0, 0.0);
    for j in 0..4 {
        let delta = (g.delta[j] + shift) % 2;
        let z = s + g.lambda[j];
        let (num, den) = gg_args(z, delta);
        check_pole(den, "G_pm pole")?;
        // 1/𝔊_δ(z) = [−i] π^{z−1/2} Γ(den)/Γ(num)
        acc += (z - 0.5) * PI.ln() + ln_gamma(den) - ln_gamma(num);
        if delta % 2 == 1 {
            acc -= Complex64::i() * (PI / 2.0);
        }
    }
    Ok(acc)
}

/// G_±(s) = ∏_j 𝔊_{δ_j (+1)}(s + λ_j)^{−1}.
pub fn g_pm(s: Complex64, g: &GammaData, sign: Sign) -> Result<Complex64> {
    let shift = match sign {
        Sign::Plus => 0,
        Sign::Minus => 1,
    };
    for j in 0..4 {
        let (num, _) = gg_args(s + g.lambda[j], (g.delta[j] + shift) % 2);
        if gamma::pole_distance(num) == 0.0 {
            return Ok(c(0.0, 0.0));
        }
    }
    Ok(ln_g_pm(s, g, sign)?.exp())
}

/// ln of π^{−4s} ∏ Γ((s − it − α_i)/2) Γ((s + it − α_i)/2).
pub fn ln_gamma_factor(s: Complex64, t_spec: f64, a: &ArchParams) -> Result<Complex64> {
    let mut acc = -s * 4.0 * PI.ln();
    for al in a.alpha {
        for sg in [-1.0, 1.0] {
            let z = (s + c(-al, sg * t_spec)) * 0.5;
            check_pole(z, "gamma factor pole")?;
            acc += ln_gamma(z);
        }
    }
    Ok(acc)
}

pub fn gamma_factor(s: Complex64, t_spec: f64, a: &ArchParams) -> Result<Complex64> {
    Ok(ln_gamma_factor(s, t_spec, a)?.exp())
}

/// The default weight ℋ(z) = exp(z²).
pub fn default_h(z: Complex64) -> Complex64 {
    (z * z).exp()
}

/// V(y, s) = (1/2πi) ∫_(c) y^{−z} γ(s+z)/γ(s) ℋ(z)/z dz. For c < 0 the
/// residue ℋ(0) at z = 0 is added back.
pub fn afe_weight(
    y: f64,
    s: Complex64,
    t_spec: f64,
    a: &ArchParams,
    h: &dyn Fn(Complex64) -> Complex64,
    abscissa: f64,
) -> Result<Complex64> {
    if y <= 0.0 {
        return Err(Error::Argument("afe_weight needs y > 0".into()));
    }
    if abscissa == 0.0 {
        return Err(Error::Pole("contour through z = 0".into()));
    }
    let base = ln_gamma_factor(s, t_spec, a)?;
    let ly = y.ln();
    let mut err = None;
    let integrand = |t: f64| {
        let z = c(abscissa, t);
        match ln_gamma_factor(s + z, t_spec, a) {
            Ok(g) => (g - base - z * ly).exp() * h(z) / z,
            Err(e) => {
                err = Some(e);
                c(0.0, 0.0)
            }
        }
    };
    let tmax = 12.0 + abscissa.abs();
    let v = quad::composite_c(integrand, -tmax, tmax, 192) / (2.0 * PI);
    if let Some(e) = err {
        return Err(e);
    }
    Ok(if abscissa < 0.0 { v + h(c(0.0, 0.0)) } else { v })
}

pub fn afe_weight_default(y: f64, s: Complex64, t_spec: f64, a: &ArchParams) -> Result<Complex64> {
    afe_weight(y, s, t_spec, a, &default_h, 3.0)
}

/// Asymptotic expansion H(s) ≈ Σ_{j=1}^{order} b_j / s^j.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StirlingExpansion {
    pub coeffs: Vec<Complex64>,
    pub order: usize,
}

impl StirlingExpansion {
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let inv = s.inv();
        let mut pw = inv;
        let mut acc = c(0.0, 0.0);
        for b in &self.coeffs {
            acc += b * pw;
            pw *= inv;
        }
        acc
    }
}

fn expm1_c(z: Complex64) -> Complex64 {
    let (sy, cy) = z.im.sin_cos();
    let half = (z.im * 0.5).sin();
    c(z.re.exp_m1() * cy - 2.0 * half * half, z.re.exp() * sy)
}

/// H(s) = 4^{8s−2} ∏Γ(s−α_j/2) Γ(1/2−4s) / (∏Γ(1/2−s+α_j/2) Γ(4s−3/2)) − 1.
pub fn h_value(s: Complex64, a: &ArchParams) -> Result<Complex64> {
    let mut ln = (s * 8.0 - 2.0) * 4f64.ln();
    for al in a.alpha {
        let num = s - al / 2.0;
        let den = 0.5 - s + al / 2.0;
        check_pole(num, "H numerator pole")?;
        ln += ln_gamma(num) - ln_gamma(den);
    }
    let g1 = 0.5 - s * 4.0;
    check_pole(g1, "H numerator pole")?;
    ln += ln_gamma(g1) - ln_gamma(s * 4.0 - 1.5);
    Ok(expm1_c(ln))
}

/// Least-squares solution of the complex system A x ≈ y by modified Gram–Schmidt.
pub(crate) fn lstsq(cols: &[Vec<Complex64>], y: &[Complex64]) -> Vec<Complex64> {
    let n = cols.len();
    let mut q: Vec<Vec<Complex64>> = cols.to_vec();
    let mut r = vec![vec![c(0.0, 0.0); n]; n];
    for j in 0..n {
        for i in 0..j {
            let dot: Complex64 = q[i].iter().zip(&q[j]).map(|(a, b)| a.conj() * b).sum();
            r[i][j] = dot;
            let qi = q[i].clone();
            for (v, u) in q[j].iter_mut().zip(&qi) {
                *v -= dot * u;
            }
        }
        let norm = q[j].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        r[j][j] = c(norm, 0.0);
        for v in q[j].iter_mut() {
            *v /= norm;
        }
    }
    let qty: Vec<Complex64> =
        (0..n).map(|i| q[i].iter().zip(y).map(|(a, b)| a.conj() * b).sum()).collect();
    let mut x = vec![c(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = qty[i];
        for k in i + 1..n {
            acc -= r[i][k] * x[k];
        }
        x[i] = acc / r[i][i];
    }
    x
}

/// Fits b_1..b_order on the vertical line Re s = sigma over 8 ≤ |t| ≤ 200.
pub fn fit_stirling(sigma: f64, order: usize, a: &ArchParams) -> Result<StirlingExpansion> {
    const EXTRA: usize = 6;
    const S0: f64 = 8.0;
    let m = order + EXTRA;
    let mut pts = Vec::new();
    for i in 0..160 {
        // Points clustered toward the large-|t| end where the expansion is sharp.
        let t = 8.0 * (25.0f64).powf(i as f64 / 159.0);
        pts.push(c(sigma, t));
        pts.push(c(sigma, -t));
    }
    let mut y = Vec::with_capacity(pts.len());
    for &s in &pts {
        y.push(h_value(s, a)?);
    }
    let cols: Vec<Vec<Complex64>> = (1..=m)
        .map(|j| pts.iter().map(|s| (s / S0).inv().powu(j as u32)).collect())
        .collect();
    let x = lstsq(&cols, &y);
    let coeffs = (0..order).map(|j| x[j] * S0.powi(j as i32 + 1)).collect();
    Ok(StirlingExpansion { coeffs, order })
}

/// H(s) evaluated directly, together with the fitted expansion on its line.
pub fn stirling_h(s: Complex64, order: usize, a: &ArchParams) -> Result<(Complex64, StirlingExpansion)> {
    if s.norm() < 2.0 {
        return Err(Error::Domain(format!("|s| = {} < 2", s.norm())));
    }
    Ok((h_value(s, a)?, fit_stirling(s.re, order, a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::arch_params;

    #[test]
    fn basic_values() {
        assert!((gamma_r(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((gg_delta(c(0.5, 0.0), 0).unwrap() - 1.0).norm() < 1e-14);
        assert!(gamma_r(c(-2.0, 0.0)).is_err());
        for &(x, y) in &[(0.3, 1.0), (-0.2, 7.0), (0.7, -3.0)] {
            let s = c(x, y);
            let p = gg_delta(s, 0).unwrap() * gg_delta(1.0 - s, 0).unwrap();
            assert!((p - 1.0).norm() < 1e-12);
            let q = gg_delta(s, 1).unwrap() * gg_delta(1.0 - s, 1).unwrap();
            assert!((q + 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn g_plus_is_inverse_product() {
        let g = GammaData::from_arch(&arch_params(0.3, 0.2, 0.25));
        assert!((g_pm(c(0.5, 0.0), &GammaData::zero(), Sign::Plus).unwrap() - 1.0).norm() < 1e-14);
        for &(x, y) in &[(-0.3, 2.0), (0.1, -9.0)] {
            let s = c(x, y);
            let mut prod = g_pm(s, &g, Sign::Plus).unwrap();
            for j in 0..4 {
                prod *= gg_delta(s + g.lambda[j], 0).unwrap();
            }
            assert!((prod - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn gamma_factor_symmetries() {
        let a = arch_params(0.3, 0.2, 0.25);
        let v = gamma_factor(c(1.7, 0.0), 2.0, &a).unwrap();
        assert!(v.im.abs() < 1e-14 * v.norm());
        let w = gamma_factor(c(1.3, 0.0), 0.0, &a).unwrap();
        let mut root = c(1.0, 0.0);
        for al in a.alpha {
            root *= gamma(c((1.3 - al) / 2.0, 0.0));
        }
        let want = root * root * PI.powf(-4.0 * 1.3);
        assert!(((w - want) / want).norm() < 1e-13);
    }

    #[test]
    fn h_is_small_and_real_for_zero_alpha() {
        let a = arch_params(0.25, 0.25, 0.25);
        assert!(a.alpha.iter().all(|x| x.abs() < 1e-15));
        let far = h_value(c(0.25, 400.0), &a).unwrap().norm();
        let near = h_value(c(0.25, 20.0), &a).unwrap().norm();
        assert!(far < near && far < 1e-2);
        let e = fit_stirling(0.25, 3, &a).unwrap();
        for b in &e.coeffs {
            assert!(b.im.abs() < 1e-8 * b.norm().max(1e-3), "{b}");
        }
    }
}
