//! Mellin transforms of test functions and the integral transforms Ψ±.
//!
//! Ψ±(x) = (1/2πi) ∫_(−σ) ψ̃(s) x^s G±(s) ds is evaluated on a truncated
//! vertical line. The shifted form F₊ (variable w = (1−s)/2) and the
//! Bessel-type asymptotic expansion give two independent routes to Ψ₊.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::arith::e;
use crate::coeffs::ArchParams;
use crate::error::{Error, Result};
use crate::quad;
use crate::special::{self, bessel::bessel_j_signed, GammaData, Sign};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Anything with compact support in (0, ∞) that can be Mellin transformed.
pub trait Window: Send + Sync {
    fn support(&self) -> (f64, f64);
    fn value(&self, x: f64) -> Complex64;
    /// Extra oscillation of x ↦ value(x) in log-scale frequency units.
    fn log_bandwidth(&self) -> f64 {
        0.0
    }
    /// j-th derivative in x, when available in closed form.
    fn derivative(&self, _j: u32, _x: f64) -> Option<Complex64> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Shape {
    /// exp(−1/(1−τ²)) on (−1, 1).
    CanonicalBump,
    /// exp(−k τ²/(1−τ²)) on (−1, 1); k = 1 is the canonical bump up to e.
    Gevrey { k: f64 },
}

impl Shape {
    fn k(&self) -> f64 {
        match *self {
            Shape::CanonicalBump => 1.0,
            Shape::Gevrey { k } => k,
        }
    }

    /// p^{(j)}(τ) from the Taylor coefficients of p = e^φ, using
    /// (n+1) p_{n+1} = Σ_{i≤n} (i+1) φ_{i+1} p_{n−i} and the partial fractions
    /// φ = const − (k/2)[1/(1−τ) + 1/(1+τ)]. This stays accurate where the
    /// expanded polynomial form loses all digits near the endpoints.
    fn profile_derivative(&self, j: u32, tau: f64) -> f64 {
        self.profile_derivatives(j as usize, tau)[j as usize]
    }

    /// p^{(n)}(τ) for n = 0..=jmax.
    fn profile_derivatives(&self, jmax: usize, tau: f64) -> Vec<f64> {
        let mut p = vec![0.0; jmax + 1];
        if tau.abs() >= 1.0 {
            return p;
        }
        let base = self.profile(tau);
        p[0] = base;
        if base == 0.0 {
            return p;
        }
        let k = self.k();
        let (u, v) = (1.0 / (1.0 - tau), 1.0 / (1.0 + tau));
        // phi[m] = m φ_m.
        let mut phi = vec![0.0; jmax + 1];
        let (mut up, mut vp) = (u, v);
        for (m, slot) in phi.iter_mut().enumerate().skip(1) {
            up *= u;
            vp *= -v;
            *slot = -0.5 * k * (up + vp) * m as f64;
        }
        for n in 0..jmax {
            let mut acc = 0.0;
            for i in 0..=n {
                acc += phi[i + 1] * p[n - i];
            }
            p[n + 1] = acc / (n + 1) as f64;
        }
        let mut fact = 1.0;
        for (n, v) in p.iter_mut().enumerate().skip(1) {
            fact *= n as f64;
            *v *= fact;
        }
        p
    }

    fn profile(&self, tau: f64) -> f64 {
        if tau.abs() >= 1.0 {
            return 0.0;
        }
        let d = 1.0 - tau * tau;
        match *self {
            Shape::CanonicalBump => (-1.0 / d).exp(),
            Shape::Gevrey { k } => (-k * tau * tau / d).exp(),
        }
    }
}

/// A smooth bump ψ supported on [lo, hi] ⊂ (0, ∞).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub shape: Shape,
    pub lo: f64,
    pub hi: f64,
    /// Size parameter N of the support.
    pub scale: f64,
    pub amplitude: f64,
    pub deriv_cap: u32,
}

impl TestFunction {
    /// Canonical bump rescaled to [c1 N, c2 N], 1 ≤ c1 < c2 ≤ 2.5.
    pub fn canonical(n: f64, c1: f64, c2: f64) -> Result<Self> {
        if !(n > 0.0 && 1.0 <= c1 && c1 < c2 && c2 <= 2.5) {
            return Err(Error::Argument(format!(
                "need N > 0 and 1 <= c1 < c2 <= 2.5, got N={n}, c1={c1}, c2={c2}"
            )));
        }
        Ok(TestFunction {
            shape: Shape::CanonicalBump,
            lo: c1 * n,
            hi: c2 * n,
            scale: n,
            amplitude: 1.0,
            deriv_cap: 6,
        })
    }

    /// Any shape on an arbitrary support [lo, hi] with 0 < lo < hi; N = lo.
    pub fn with_support(shape: Shape, lo: f64, hi: f64) -> Result<Self> {
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::Argument(format!("bad support [{lo}, {hi}]")));
        }
        if let Shape::Gevrey { k } = shape {
            if k <= 0.0 {
                return Err(Error::Argument("Gevrey parameter must be positive".into()));
            }
        }
        Ok(TestFunction { shape, lo, hi, scale: lo, amplitude: 1.0, deriv_cap: 6 })
    }

    pub fn scaled(&self, a: f64) -> Self {
        TestFunction { amplitude: self.amplitude * a, ..*self }
    }

    /// ψ(x/λ): support and scale multiplied by λ.
    pub fn dilated(&self, lambda: f64) -> Self {
        TestFunction {
            lo: self.lo * lambda,
            hi: self.hi * lambda,
            scale: self.scale * lambda,
            ..*self
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.lo || x >= self.hi {
            return 0.0;
        }
        let tau = (2.0 * x - self.lo - self.hi) / (self.hi - self.lo);
        self.amplitude * self.shape.profile(tau)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn integral(&self) -> f64 {
        quad::composite(|x| self.eval(x), self.lo, self.hi, 64)
    }

    /// ∫ ψ(x) e(−xξ) dx.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        let panels = 64 + (4.0 * xi.abs() * (self.hi - self.lo)).ceil() as usize;
        quad::composite_c(|x| e(-x * xi) * self.eval(x), self.lo, self.hi, panels)
    }

    /// ψ̃(s) = ∫ ψ(t) t^{s−1} dt.
    pub fn mellin(&self, s: Complex64) -> Complex64 {
        mellin(self, s)
    }
}

impl TestFunction {
    /// ψ^{(n)}(x) for n = 0..=jmax.
    pub fn derivatives_upto(&self, jmax: usize, x: f64) -> Vec<f64> {
        if x <= self.lo || x >= self.hi {
            return vec![0.0; jmax + 1];
        }
        let w = self.hi - self.lo;
        let tau = (2.0 * x - self.lo - self.hi) / w;
        let mut d = self.shape.profile_derivatives(jmax, tau);
        let mut sc = self.amplitude;
        for v in d.iter_mut() {
            *v *= sc;
            sc *= 2.0 / w;
        }
        d
    }

    /// ψ^{(j)}(x).
    pub fn eval_derivative(&self, j: u32, x: f64) -> f64 {
        if x <= self.lo || x >= self.hi {
            return 0.0;
        }
        let w = self.hi - self.lo;
        let tau = (2.0 * x - self.lo - self.hi) / w;
        self.amplitude * (2.0 / w).powi(j as i32) * self.shape.profile_derivative(j, tau)
    }
}

impl Window for TestFunction {
    fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
    fn value(&self, x: f64) -> Complex64 {
        c(self.eval(x), 0.0)
    }
    fn derivative(&self, j: u32, x: f64) -> Option<Complex64> {
        Some(c(self.eval_derivative(j, x), 0.0))
    }
}

/// f(x) = w₃(x/N) e(ux/(rT)) with w₃(y) = base(y)/√y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseWeightedWindow {
    pub base: TestFunction,
    pub u: f64,
    pub r: f64,
    pub t_scale: f64,
    pub n_scale: f64,
}

impl PhaseWeightedWindow {
    pub fn new(base: TestFunction, u: f64, r: f64, t_scale: f64, n_scale: f64) -> Result<Self> {
        if !(r > 0.0 && t_scale > 0.0 && n_scale > 0.0) {
            return Err(Error::Argument("r, T and N must be positive".into()));
        }
        Ok(PhaseWeightedWindow { base, u, r, t_scale, n_scale })
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let y = x / self.n_scale;
        let b = self.base.eval(y);
        if b == 0.0 {
            return c(0.0, 0.0);
        }
        e(self.u * x / (self.r * self.t_scale)) * (b / y.sqrt())
    }
}

impl Window for PhaseWeightedWindow {
    fn support(&self) -> (f64, f64) {
        (self.base.lo * self.n_scale, self.base.hi * self.n_scale)
    }
    fn value(&self, x: f64) -> Complex64 {
        self.eval(x)
    }
    fn log_bandwidth(&self) -> f64 {
        2.0 * PI * self.u.abs() * self.support().1 / (self.r * self.t_scale)
    }
    fn derivative(&self, j: u32, x: f64) -> Option<Complex64> {
        // Leibniz over base(x/N), (x/N)^{−1/2} and e(ux/(rT)).
        let n = self.n_scale;
        let y = x / n;
        if self.base.eval(y) == 0.0 {
            return Some(c(0.0, 0.0));
        }
        let om = c(0.0, 2.0 * PI * self.u / (self.r * self.t_scale));
        let ph = e(self.u * x / (self.r * self.t_scale));
        let mut acc = c(0.0, 0.0);
        let binom = |n: u32, k: u32| (0..k).fold(1.0, |a, i| a * (n - i) as f64 / (i + 1) as f64);
        for a in 0..=j {
            let da = self.base.eval_derivative(a, y) / n.powi(a as i32);
            for b in 0..=(j - a) {
                let cexp = j - a - b;
                // d^b/dx^b (x/N)^{−1/2} = (−1/2)(−3/2)… y^{−1/2−b} / N^b
                let fall = (0..b).fold(1.0, |acc, i| acc * (-0.5 - i as f64));
                let db = fall * y.powf(-0.5 - b as f64) / n.powi(b as i32);
                let dc = om.powu(cexp) * ph;
                acc += dc * (binom(j, a) * binom(j - a, b) * da * db);
            }
        }
        Some(acc)
    }
}

/// Integration-by-parts order used for large |Im s|.
const IBP_ORDER: u32 = 6;
/// Orders tried by the tabulated transform; the lowest rounding floor wins.
const IBP_ORDERS: [u32; 3] = [6, 12, 20];

/// Trapezoid samples on a uniform grid in u = ln x of f(e^u) and of
/// f^{(J)}(e^u) e^{Ju}. The first gives f̃(s) = ∫ f(e^u) e^{us} du directly;
/// the second gives it after J integrations by parts, which keeps the
/// rounding floor far below |f̃| at large |Im s|.
#[derive(Debug, Clone)]
pub struct MellinSampler {
    u0: f64,
    h: f64,
    vals: Vec<Complex64>,
    ibp: Option<Vec<Complex64>>,
    mass: f64,
    ibp_mass: f64,
    lo: f64,
    hi: f64,
}

/// Log-frequency beyond which the Fourier transform of u ↦ f(e^u) is
/// negligible, found from trapezoid convergence at s = 0.
pub fn decay_bandwidth(w: &dyn Window) -> f64 {
    bandwidth_of(&|x| w.value(x), w.support())
}

pub fn bandwidth_of(f: &dyn Fn(f64) -> Complex64, (lo, hi): (f64, f64)) -> f64 {
    let (a, b) = (lo.ln(), hi.ln());
    let trap = |n: usize| {
        let h = (b - a) / n as f64;
        let mut sum = c(0.0, 0.0);
        let mut mass = 0.0;
        for k in 1..n {
            let v = f((a + k as f64 * h).exp());
            sum += v;
            mass += v.norm();
        }
        (sum * h, mass * h)
    };
    let mut n = 16;
    let mut prev = trap(n);
    while n < 1 << 20 {
        let next = trap(2 * n);
        if (next.0 - prev.0).norm() <= 4e-15 * next.1 {
            break;
        }
        prev = next;
        n *= 2;
    }
    2.0 * PI * n as f64 / (b - a)
}

fn geometric_sum(vals: &[Complex64], u0: f64, h: f64, s: Complex64) -> Complex64 {
    const RESYNC: usize = 64;
    let step = (s * h).exp();
    let mut acc = c(0.0, 0.0);
    let mut z = c(0.0, 0.0);
    for (k, v) in vals.iter().enumerate() {
        if k % RESYNC == 0 {
            z = (s * (u0 + k as f64 * h)).exp();
        } else {
            z *= step;
        }
        acc += v * z;
    }
    acc * h
}

impl MellinSampler {
    pub fn new(w: &dyn Window, t_cap: f64) -> Self {
        Self::with_bandwidth(w, t_cap, decay_bandwidth(w))
    }

    fn with_bandwidth(w: &dyn Window, t_cap: f64, omega: f64) -> Self {
        let (lo, hi) = w.support();
        let (a, b) = (lo.ln(), hi.ln());
        // Derivatives carry extra bandwidth; 1.5× covers J = 6 comfortably.
        let cap = t_cap.abs() + 1.5 * omega + w.log_bandwidth();
        let n = (((b - a) * cap / (2.0 * PI)).ceil() as usize).max(32);
        let h = (b - a) / n as f64;
        let xs: Vec<f64> = (1..n).map(|k| (a + k as f64 * h).exp()).collect();
        let vals: Vec<Complex64> = xs.iter().map(|&x| w.value(x)).collect();
        let ibp: Option<Vec<Complex64>> = xs
            .iter()
            .map(|&x| w.derivative(IBP_ORDER, x).map(|d| d * x.powi(IBP_ORDER as i32)))
            .collect();
        let mass = vals.iter().map(|v| v.norm()).sum::<f64>() * h;
        let ibp_mass = ibp.as_ref().map_or(f64::INFINITY, |v| v.iter().map(|z| z.norm()).sum::<f64>() * h);
        MellinSampler { u0: a + h, h, vals, ibp, mass, ibp_mass, lo, hi }
    }

    fn reach(&self, sigma: f64) -> f64 {
        self.lo.powf(sigma).max(self.hi.powf(sigma))
    }

    /// f̃(s) together with an estimate of its absolute rounding error.
    pub fn eval_floor(&self, s: Complex64) -> (Complex64, f64) {
        let direct_floor = 1e-15 * self.mass * self.reach(s.re);
        let mut poch = 1.0;
        for i in 0..IBP_ORDER {
            poch *= (s + i as f64).norm();
        }
        let ibp_floor = 1e-15 * self.ibp_mass * self.reach(s.re) / poch;
        match &self.ibp {
            Some(v) if ibp_floor < direct_floor => {
                let mut den = c(1.0, 0.0);
                for i in 0..IBP_ORDER {
                    den *= s + i as f64;
                }
                let sign = if IBP_ORDER % 2 == 0 { 1.0 } else { -1.0 };
                (geometric_sum(v, self.u0, self.h, s) / den * sign, ibp_floor)
            }
            _ => (geometric_sum(&self.vals, self.u0, self.h, s), direct_floor),
        }
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.eval_floor(s).0
    }
}

/// f̃(s) = ∫ f(t) t^{s−1} dt.
pub fn mellin(w: &dyn Window, s: Complex64) -> Complex64 {
    MellinSampler::new(w, s.im).eval(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadRule {
    /// Uniform trapezoid in t; spectrally accurate for these integrands.
    Trapezoid,
}

/// A truncated vertical line and its quadrature. `t_max = 0` selects the
/// height automatically; `step` is the node spacing in t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub abscissa: f64,
    pub t_max: f64,
    pub step: f64,
    pub rule: QuadRule,
}

impl ContourSpec {
    pub fn new(abscissa: f64) -> Self {
        ContourSpec { abscissa, t_max: 0.0, step: 0.05, rule: QuadRule::Trapezoid }
    }
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec::new(0.3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiValue {
    pub value: Complex64,
    pub tail_bound: f64,
    pub contour: ContourSpec,
}

const CUT: f64 = 1e-16;
const T_LIMIT: f64 = 2.0e5;

/// f̃(ρ + i k d) for k = −kmax..=kmax with rounding floors, from one FFT of
/// the log-grid samples (two when derivatives are available).
pub fn mellin_grid(
    w: &dyn Window,
    rho: f64,
    d: f64,
    kmax: usize,
) -> Vec<(Complex64, f64)> {
    let (lo, hi) = w.support();
    let (a, b) = (lo.ln(), hi.ln());
    let orders: Vec<u32> = if w.derivative(1, (lo * hi).sqrt()).is_some() {
        IBP_ORDERS.to_vec()
    } else {
        Vec::new()
    };
    // Aliasing of the order-J samples is amplified by frequency^J, so each
    // sample set needs its own bandwidth.
    // Orders whose bandwidth would dominate the FFT length are skipped.
    let t_top = d.abs() * kmax as f64;
    let omega0 = decay_bandwidth(w);
    let mut omega = omega0;
    // Bandwidths grow with the order, so stop at the first one rejected.
    let orders: Vec<u32> = orders
        .into_iter()
        .take_while(|&j| {
            let g = |x: f64| w.derivative(j, x).unwrap() * x.powi(j as i32);
            let om = bandwidth_of(&g, (lo, hi));
            let keep = om <= 8.0 * omega0 + t_top;
            if keep {
                omega = omega.max(om);
            }
            keep
        })
        .collect();
    let need = ((t_top + 1.25 * omega + w.log_bandwidth()) / d.abs()).ceil() as usize;
    let len = need.max(2 * kmax + 1).next_power_of_two();
    // h d = ±2π/len makes the phase e^{i k d u_j} an exact root of unity.
    let h = 2.0 * PI / (len as f64 * d.abs());
    let n = ((b - a) / h).ceil() as usize;
    debug_assert!(n <= len);
    let mut planner = FftPlanner::new();
    let fft = if d > 0.0 { planner.plan_fft_inverse(len) } else { planner.plan_fft_forward(len) };
    let transform = |vals: &mut Vec<Complex64>| -> f64 {
        let mass = vals.iter().map(|v| v.norm()).sum::<f64>() * h;
        fft.process(vals);
        mass
    };
    let mut direct = vec![c(0.0, 0.0); len];
    let mut ibp = vec![vec![c(0.0, 0.0); len]; orders.len()];
    for j in 1..n {
        let u = a + j as f64 * h;
        let x = u.exp();
        let damp = (rho * u).exp();
        direct[j] = w.value(x) * damp;
        for (buf, &o) in ibp.iter_mut().zip(&orders) {
            buf[j] = w.derivative(o, x).unwrap() * x.powi(o as i32) * damp;
        }
    }
    let m0 = transform(&mut direct);
    let masses: Vec<f64> = ibp.iter_mut().map(|buf| transform(buf)).collect();
    let mut out = Vec::with_capacity(2 * kmax + 1);
    for kk in 0..=(2 * kmax) {
        let k = kk as i64 - kmax as i64;
        let idx = k.rem_euclid(len as i64) as usize;
        let im = k as f64 * d;
        let s = c(rho, im);
        let shift = c(0.0, im * a).exp() * h;
        let mut best = (direct[idx] * shift, 1e-15 * m0);
        let mut poch = c(1.0, 0.0);
        let mut done = 0;
        for ((buf, &o), mass) in ibp.iter().zip(&orders).zip(&masses) {
            while done < o {
                poch *= s + done as f64;
                done += 1;
            }
            let floor = 1e-15 * mass / poch.norm();
            if floor < best.1 {
                let sign = if o % 2 == 0 { 1.0 } else { -1.0 };
                best = (buf[idx] * shift / poch * sign, floor);
            }
        }
        out.push(best);
    }
    out
}

/// Integrand values F(re + ikΔt) on a uniform truncated line.
#[derive(Debug, Clone)]
pub struct ContourTable {
    pub re: f64,
    pub spec: ContourSpec,
    kmax: usize,
    vals: Vec<Complex64>,
    /// Δt Σ |F| over the kept nodes.
    pub abs_mass: f64,
    /// Majorant for Δt Σ |F| beyond the truncation height.
    pub tail_mass: f64,
}

/// Maps (s, f̃ value, f̃ rounding floor) to the integrand and its noise.
type Integrand<'a> = dyn Fn(Complex64, Complex64, f64) -> Result<(Complex64, f64)> + 'a;

impl ContourTable {
    /// The Mellin factor is taken at rho + i·kappa·t on the line re + it.
    /// `pole_gap` is the distance from the line to the nearest singularity;
    /// the step is reduced so the trapezoid still resolves it.
    pub fn build(
        re: f64,
        spec: ContourSpec,
        w: &dyn Window,
        rho: f64,
        kappa: f64,
        pole_gap: f64,
        f: &Integrand<'_>,
    ) -> Result<Self> {
        if !(pole_gap > 1e-4) {
            return Err(Error::Pole(format!("contour Re s = {re} passes within {pole_gap:e} of a pole")));
        }
        // Trapezoid error ~ exp(−2π gap/Δt).
        let dt = spec.step.min(pole_gap / 8.0);
        let spec = ContourSpec { step: dt, ..spec };
        let mut t_top = if spec.t_max > 0.0 { spec.t_max } else { 64.0 };
        loop {
            let kmax = (t_top / dt).ceil() as usize;
            let mel = mellin_grid(w, rho, kappa * dt, kmax);
            let mut vals = Vec::with_capacity(mel.len());
            let mut live = Vec::with_capacity(mel.len());
            for (kk, (m, floor)) in mel.into_iter().enumerate() {
                let t = (kk as f64 - kmax as f64) * dt;
                let (v, noise) = f(c(re, t), m, floor)?;
                live.push(v.norm() > noise);
                vals.push(v);
            }
            let peak = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let reach = vals
                .iter()
                .zip(&live)
                .enumerate()
                .filter(|(_, (v, l))| **l && v.norm() > CUT * peak)
                .map(|(kk, _)| (kk as f64 - kmax as f64).abs() * dt)
                .fold(0.0, f64::max);
            let fixed = spec.t_max > 0.0;
            if fixed || reach <= 0.5 * t_top {
                let keep = if fixed { kmax } else { ((reach / dt).ceil() as usize + 8).min(kmax) };
                let lo = kmax - keep;
                let kept: Vec<Complex64> = vals[lo..=kmax + keep].to_vec();
                let abs_mass = kept.iter().map(|v| v.norm()).sum::<f64>() * dt;
                let dropped = vals[..lo].iter().chain(&vals[kmax + keep + 1..]);
                let edge = kept[..4].iter().chain(&kept[kept.len() - 4..]).map(|v| v.norm()).fold(0.0, f64::max);
                let tail_mass = dropped.map(|v| v.norm()).sum::<f64>() * dt
                    + if fixed { edge * t_top } else { CUT * peak * 16.0 * dt };
                let spec = ContourSpec { t_max: keep as f64 * dt, ..spec };
                return Ok(ContourTable { re, spec, kmax: keep, vals: kept, abs_mass, tail_mass });
            }
            t_top *= 2.0;
            if t_top > T_LIMIT {
                return Err(Error::Truncation(format!(
                    "contour integrand still above {CUT:e} of its peak at height {T_LIMIT:e}"
                )));
            }
        }
    }

    /// (1/2π) Δt Σ F(s) y^{κ s}, s = re + ikΔt, and the matching tail bound.
    pub fn eval_power(&self, y: f64, kappa: f64) -> (Complex64, f64) {
        const RESYNC: usize = 256;
        let ly = kappa * y.ln();
        let dt = self.spec.step;
        let step = c(0.0, dt * ly).exp();
        let mut acc = c(0.0, 0.0);
        let mut z = c(0.0, 0.0);
        for (kk, v) in self.vals.iter().enumerate() {
            if kk % RESYNC == 0 {
                z = c(0.0, (kk as f64 - self.kmax as f64) * dt * ly).exp();
            } else {
                z *= step;
            }
            acc += v * z;
        }
        let mag = (self.re * ly).exp() / (2.0 * PI);
        (acc * dt * mag, self.tail_mass * mag)
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    /// (t, F) pairs.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        let dt = self.spec.step;
        self.vals.iter().enumerate().map(move |(kk, v)| ((kk as f64 - self.kmax as f64) * dt, *v))
    }

    /// Ψ-type integral (1/2π) ∫ F(re+it) e^{(re+it)ℓ} dt on a uniform ℓ-grid
    /// covering [l_lo, l_hi], with the factor e^{re ℓ} left out.
    fn fft_grid(&self, l_lo: f64, l_hi: f64) -> Result<(f64, Vec<Complex64>)> {
        const PHASE_PER_STEP: f64 = 0.12;
        let dt = self.spec.step;
        let period = 2.0 * PI / dt;
        if l_hi - l_lo > period - 60.0 {
            return Err(Error::Argument("requested range exceeds the alias-free window".into()));
        }
        // Step in ℓ so that the 10-point interpolation error of each
        // component, ≈ |F(t)| (t dℓ)^10 / 10!, stays below CUT · peak.
        let peak = self.vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut dl_max = f64::INFINITY;
        for (kk, v) in self.vals.iter().enumerate() {
            let t = (kk as f64 - self.kmax as f64).abs() * dt;
            if t == 0.0 || v.norm() == 0.0 {
                continue;
            }
            let theta = (CUT * peak * 3_628_800.0 / v.norm()).powf(0.1).min(1.0);
            dl_max = dl_max.min(theta.max(PHASE_PER_STEP) / t);
        }
        let mut n = (2 * self.kmax + 1).next_power_of_two();
        while 2.0 * PI / (n as f64 * dt) > dl_max {
            n <<= 1;
        }
        if n > 1 << 25 {
            return Err(Error::Truncation(format!("FFT grid too large: {n} points")));
        }
        let mut buf = vec![c(0.0, 0.0); n];
        for (kk, v) in self.vals.iter().enumerate() {
            let k = kk as i64 - self.kmax as i64;
            // Index 0 of the output corresponds to ℓ = l_lo.
            buf[k.rem_euclid(n as i64) as usize] = v * c(0.0, k as f64 * dt * l_lo).exp();
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        let dl = 2.0 * PI / (n as f64 * dt);
        let count = ((l_hi - l_lo) / dl).ceil() as usize + 1;
        buf.truncate(count);
        for v in buf.iter_mut() {
            *v *= dt / (2.0 * PI);
        }
        Ok((dl, buf))
    }
}

/// Reusable Ψ± for a fixed window, Gamma data and sign.
#[derive(Debug, Clone)]
pub struct PsiTransform {
    pub sign: Sign,
    pub gamma: GammaData,
    table: Arc<ContourTable>,
}

impl PsiTransform {
    pub fn new(w: &dyn Window, g: &GammaData, spec: ContourSpec, sign: Sign) -> Result<Self> {
        if spec.abscissa <= 0.0 {
            return Err(Error::Argument("abscissa sigma must be positive".into()));
        }
        let gg = *g;
        let integrand = move |s: Complex64, m: Complex64, floor: f64| -> Result<(Complex64, f64)> {
            let g = special::ln_g_pm(s, &gg, sign)?.exp();
            Ok((m * g, floor * g.norm()))
        };
        let mut gap = f64::INFINITY;
        for j in 0..4 {
            let delta = (g.delta[j] + if sign == Sign::Minus { 1 } else { 0 }) % 2;
            for n in 0..4 {
                let pole = 1.0 + delta as f64 + 2.0 * n as f64 - g.lambda[j].re;
                gap = gap.min((pole + spec.abscissa).abs());
            }
        }
        let table = ContourTable::build(-spec.abscissa, spec, w, -spec.abscissa, 1.0, gap, &integrand)?;
        Ok(PsiTransform { sign, gamma: *g, table: Arc::new(table) })
    }

    pub fn eval(&self, x: f64) -> Result<PsiValue> {
        if !(x > 0.0) {
            return Err(Error::Argument(format!("Psi_pm needs x > 0, got {x}")));
        }
        let (value, tail) = self.table.eval_power(x, 1.0);
        Ok(PsiValue { value, tail_bound: tail, contour: self.table.spec })
    }

    pub fn table(&self) -> &ContourTable {
        &self.table
    }

    /// Tabulates Ψ(e^ℓ) for y_lo ≤ e^ℓ ≤ y_hi with one FFT.
    pub fn grid(&self, y_lo: f64, y_hi: f64) -> Result<PsiGrid> {
        let l0 = y_lo.ln() - 1.0;
        let (dl, vals) = self.table.fft_grid(l0, y_hi.ln() + 1.0)?;
        Ok(PsiGrid { l0, dl, sigma: -self.table.re, vals })
    }
}

/// Ψ(e^ℓ) e^{σℓ} on a uniform grid; evaluated by 10-point interpolation.
#[derive(Debug, Clone)]
pub struct PsiGrid {
    l0: f64,
    dl: f64,
    sigma: f64,
    vals: Vec<Complex64>,
}

const BARY: [f64; 10] = [1.0, -9.0, 36.0, -84.0, 126.0, -126.0, 84.0, -36.0, 9.0, -1.0];

impl PsiGrid {
    pub fn range(&self) -> (f64, f64) {
        (
            (self.l0 + 4.0 * self.dl).exp(),
            (self.l0 + (self.vals.len() as f64 - 6.0) * self.dl).exp(),
        )
    }

    pub fn eval(&self, y: f64) -> Complex64 {
        let l = y.ln();
        let pos = (l - self.l0) / self.dl;
        let i0 = pos.floor() as isize - 4;
        assert!(
            i0 >= 0 && (i0 as usize + 10) <= self.vals.len(),
            "PsiGrid evaluated outside its range at y = {y}"
        );
        let i0 = i0 as usize;
        let mut num = c(0.0, 0.0);
        let mut den = 0.0;
        for (j, b) in BARY.iter().enumerate() {
            let d = pos - (i0 + j) as f64;
            if d == 0.0 {
                return self.vals[i0 + j] * (-self.sigma * l).exp();
            }
            let q = b / d;
            num += self.vals[i0 + j] * q;
            den += q;
        }
        num / den * (-self.sigma * l).exp()
    }
}

/// (1/2πi) ∫_(−σ) ψ̃(s) x^s G±(s) ds.
pub fn psi_pm(
    x: f64,
    g: &GammaData,
    psi: &dyn Window,
    spec: ContourSpec,
    sign: Sign,
) -> Result<PsiValue> {
    PsiTransform::new(psi, g, spec, sign)?.eval(x)
}

/// Ψ(x) = Ψ₊(|x|) + sgn(x) Ψ₋(|x|).
pub fn psi_full(
    x: f64,
    g: &GammaData,
    psi: &dyn Window,
    spec: ContourSpec,
) -> Result<PsiValue> {
    if x == 0.0 {
        return Err(Error::Argument("Psi needs x != 0".into()));
    }
    let p = psi_pm(x.abs(), g, psi, spec, Sign::Plus)?;
    let m = psi_pm(x.abs(), g, psi, spec, Sign::Minus)?;
    let value = if x > 0.0 { p.value + m.value } else { p.value - m.value };
    Ok(PsiValue { value, tail_bound: p.tail_bound + m.tail_bound, contour: p.contour })
}

/// K with |Ψ±(x)| ≤ K x^{−σ} for all x > 0: (1/2π) ∫ |ψ̃ G±| over Re s = −σ.
///
/// Up to |t| = 1024 the tabulated |ψ̃| is used; beyond it the bound
/// |ψ̃(s)| ≤ min_J ∫ |ψ^{(J)}(y)| y^{J−σ−1} dy / |(s)_J|, J ≤ 60, which
/// follows from J integrations by parts.
pub fn psi_majorant(psi: &TestFunction, g: &GammaData, sigma: f64, sign: Sign) -> Result<f64> {
    const T_HEAD: f64 = 1024.0;
    const DT: f64 = 0.05;
    const JMAX: usize = 60;
    let kmax = (T_HEAD / DT) as usize;
    let mel = mellin_grid(psi, -sigma, DT, kmax);
    let mut head = 0.0;
    for (kk, (m, floor)) in mel.iter().enumerate() {
        let t = (kk as f64 - kmax as f64) * DT;
        let gv = special::ln_g_pm(c(-sigma, t), g, sign)?.exp().norm();
        let w = if kk == 0 || kk == 2 * kmax { 0.5 } else { 1.0 };
        head += w * (m.norm() + floor) * gv;
    }
    head *= DT;
    // I_J by Gauss–Legendre; the 1% margin covers quadrature error.
    let (lo, hi) = psi.support();
    let (x, wts) = quad::gl24();
    let panels = 400;
    let h = (hi - lo) / panels as f64;
    let mut moments = vec![0.0; JMAX + 1];
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(wts) {
            let y = mid + 0.5 * h * xi;
            let d = psi.derivatives_upto(JMAX, y);
            let ly = y.ln();
            for (j, dj) in d.iter().enumerate() {
                moments[j] += 0.5 * h * wi * dj.abs() * ((j as f64 - sigma - 1.0) * ly).exp();
            }
        }
    }
    for m in moments.iter_mut() {
        *m *= 1.01;
    }
    let bound = |t: f64| {
        let s = c(-sigma, t);
        let mut best = moments[0];
        let mut poch = 1.0;
        for (j, m) in moments.iter().enumerate().skip(1) {
            poch *= (s + (j - 1) as f64).norm();
            best = best.min(m / poch);
        }
        best
    };
    // Both half-lines, log-spaced trapezoid; the integrand is smooth in ln t.
    let mut tail = 0.0;
    for sgn in [1.0, -1.0] {
        let ratio: f64 = 1.002;
        let mut t = T_HEAD;
        let mut prev = bound(t) * special::ln_g_pm(c(-sigma, sgn * t), g, sign)?.exp().norm() * t;
        let exponent = 2.0 + 4.0 * sigma - JMAX as f64;
        loop {
            let tn = t * ratio;
            let cur = bound(tn) * special::ln_g_pm(c(-sigma, sgn * tn), g, sign)?.exp().norm() * tn;
            tail += 0.5 * (prev + cur) * ratio.ln();
            t = tn;
            prev = cur;
            if t > 1e3 * T_HEAD || (cur < 1e-20 * head && bound(t) * 2.0 > moments[JMAX] / t.powi(JMAX as i32)) {
                // Remaining integrand ≤ cur (t'/t)^{exponent + 1} in the measure dt'/t'.
                if exponent + 1.0 >= 0.0 {
                    return Err(Error::Truncation(format!("majorant tail diverges at sigma = {sigma}")));
                }
                tail += cur / -(exponent + 1.0) * 1.1;
                break;
            }
        }
    }
    Ok((head + tail) / (2.0 * PI))
}

/// ln R(w) = Σ ln Γ(w − α_j/2) − Σ ln Γ(1/2 − w + α_j/2).
fn ln_ratio(w: Complex64, a: &ArchParams) -> Result<Complex64> {
    let mut acc = c(0.0, 0.0);
    for al in a.alpha {
        let num = w - al / 2.0;
        if special::gamma::pole_distance(num) < 1e-8 {
            return Err(Error::Pole(format!("R(w) pole at {w}")));
        }
        acc += special::ln_gamma(num) - special::ln_gamma(0.5 - w + al / 2.0);
    }
    Ok(acc)
}

/// 𝒢(s) = R(s) f̃(1 − 2s).
pub fn curly_g(s: Complex64, a: &ArchParams, f: &dyn Window) -> Result<Complex64> {
    Ok(ln_ratio(s, a)?.exp() * mellin(f, 1.0 - s * 2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residue {
    pub pole: Complex64,
    /// Number of coalescing Gamma poles enclosed by the circle.
    pub multiplicity: usize,
    pub value: Complex64,
}

/// The shifted form 2xπ²/(2πi) ∫_(σ₁) π^{−8s} x^{−2s} R(s) f̃(1−2s) ds plus
/// the residues at every pole of R with real part above σ₁.
pub fn f_plus_shifted(
    x: f64,
    a: &ArchParams,
    f: &dyn Window,
    sigma1: f64,
) -> Result<(Complex64, Vec<Residue>)> {
    f_plus_shifted_with(x, a, f, sigma1, ContourSpec::new(sigma1))
}

pub fn f_plus_shifted_with(
    x: f64,
    a: &ArchParams,
    f: &dyn Window,
    sigma1: f64,
    spec: ContourSpec,
) -> Result<(Complex64, Vec<Residue>)> {
    if !(x > 0.0) {
        return Err(Error::Argument("F_plus needs x > 0".into()));
    }
    let lp = PI.ln();
    let aa = *a;
    let integrand = move |s: Complex64, m: Complex64, floor: f64| -> Result<(Complex64, f64)> {
        let r = (ln_ratio(s, &aa)? - s * 8.0 * lp).exp();
        Ok((r * m, floor * r.norm()))
    };
    let gap = a
        .alpha
        .iter()
        .flat_map(|al| (0..8).map(move |n| al / 2.0 - n as f64))
        .map(|p| (p - sigma1).abs())
        .fold(f64::INFINITY, f64::min);
    let table = ContourTable::build(sigma1, spec, f, 1.0 - 2.0 * sigma1, -2.0, gap, &integrand)?;
    let pref = 2.0 * x * PI * PI;
    let (line, _) = table.eval_power(x, -2.0);
    let residues = residues_above(x, a, f, sigma1)?;
    let total = line * pref + residues.iter().map(|r| r.value).sum::<Complex64>();
    Ok((total, residues))
}

fn residues_above(x: f64, a: &ArchParams, f: &dyn Window, sigma1: f64) -> Result<Vec<Residue>> {
    let mut poles: Vec<f64> = Vec::new();
    for al in a.alpha {
        let mut p = al / 2.0;
        while p > sigma1 {
            poles.push(p);
            p -= 1.0;
        }
    }
    poles.sort_by(|u, v| u.partial_cmp(v).unwrap());
    // Group poles that a 0.05 circle cannot separate.
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for p in poles {
        match clusters.last_mut() {
            Some(cl) if p - cl.last().unwrap() < 0.1 => cl.push(p),
            _ => clusters.push(vec![p]),
        }
    }
    let centers: Vec<(f64, f64)> = clusters
        .iter()
        .map(|cl| {
            let lo = cl[0];
            let hi = *cl.last().unwrap();
            ((lo + hi) / 2.0, (hi - lo) / 2.0)
        })
        .collect();
    let mut all_poles = Vec::new();
    for al in a.alpha {
        for n in 0..8 {
            all_poles.push(al / 2.0 - n as f64);
        }
    }
    let lp = PI.ln();
    let mut out = Vec::new();
    for (cl, &(ctr, spread)) in clusters.iter().zip(&centers) {
        let mut rad = spread + 0.05;
        let clearance = |r: f64| {
            let wall = ctr - r - sigma1;
            let other = all_poles
                .iter()
                .filter(|p| !cl.iter().any(|q| (*q - **p).abs() < 1e-12))
                .map(|p| (p - ctr).abs() - r)
                .fold(f64::INFINITY, f64::min);
            wall.min(other)
        };
        while clearance(rad) < 0.01 && rad > spread + 1e-3 {
            rad = spread + (rad - spread) / 2.0;
        }
        if clearance(rad) < 0.0 || rad - spread < 1e-3 {
            return Err(Error::Pole(format!("no clear circle around pole cluster at {ctr}")));
        }
        const M: usize = 128;
        let mut acc = c(0.0, 0.0);
        for k in 0..M {
            let th = 2.0 * PI * (k as f64 + 0.5) / M as f64;
            let d = Complex64::from_polar(rad, th);
            let s = c(ctr, 0.0) + d;
            let v = (ln_ratio(s, a)? - s * 8.0 * lp - s * 2.0 * x.ln()).exp()
                * mellin(f, 1.0 - s * 2.0);
            acc += v * d;
        }
        let value = acc / M as f64 * (2.0 * x * PI * PI);
        out.push(Residue { pole: c(ctr, 0.0), multiplicity: cl.len(), value });
    }
    Ok(out)
}

/// Coefficients C_m with 1 + H(s) = Σ_m C_m / (−1 − w)_m, w = 4s − 3/2,
/// from the fitted Stirling coefficients b_j.
pub fn inverse_factorial_coeffs(b: &[Complex64], count: usize) -> Vec<Complex64> {
    let n = count;
    // Power series in u = 1/z with z = −w, truncated at u^{n−1}.
    let mul = |p: &[Complex64], q: &[Complex64]| {
        let mut r = vec![c(0.0, 0.0); n];
        for i in 0..n {
            for j in 0..n - i {
                r[i + j] += p[i] * q[j];
            }
        }
        r
    };
    let geometric = |a: f64| {
        // 1/(1 + a u)
        (0..n).map(|k| c((-a).powi(k as i32), 0.0)).collect::<Vec<_>>()
    };
    let mut target = vec![c(0.0, 0.0); n];
    target[0] = c(1.0, 0.0);
    for (j0, bj) in b.iter().enumerate() {
        let j = j0 + 1;
        if j >= n {
            break;
        }
        // b_j (−4)^j u^j (1 − 3u/2)^{−j}
        let mut p = vec![c(0.0, 0.0); n];
        p[j] = bj * (-4f64).powi(j as i32);
        let g = geometric(-1.5);
        for _ in 0..j {
            p = mul(&p, &g);
        }
        for i in 0..n {
            target[i] += p[i];
        }
    }
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for m in 0..n {
        let mut p = vec![c(0.0, 0.0); n];
        p[m] = c(1.0, 0.0);
        for i in 0..m {
            p = mul(&p, &geometric(i as f64 - 1.0));
        }
        basis.push(p);
    }
    let mut cm = vec![c(0.0, 0.0); n];
    for m in 0..n {
        let mut v = target[m];
        for k in 0..m {
            v -= cm[k] * basis[k][m];
        }
        cm[m] = v;
    }
    cm
}

/// Data of the asymptotic expansion of Ψ₊ for fixed archimedean parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPipeline {
    pub arch: ArchParams,
    pub b: Vec<Complex64>,
    pub c_m: Vec<Complex64>,
}

impl AsymptoticPipeline {
    pub fn new(a: &ArchParams, terms: usize) -> Result<Self> {
        let order = terms.max(1) + 2;
        let fit = special::fit_stirling(0.25, order, a)?;
        let c_m = inverse_factorial_coeffs(&fit.coeffs, terms + 1);
        Ok(AsymptoticPipeline { arch: *a, b: fit.coeffs, c_m })
    }

    /// Term B_m(x) = ((4π)^{2−m}/(8π)) x ∫ ψ(y) (xy)^{−(m+1)/4} J_{m−2}(8π(xy)^{1/4}) dy.
    pub fn term(x: f64, psi: &TestFunction, m: usize) -> f64 {
        let pref = (4.0 * PI).powi(2 - m as i32) / (8.0 * PI) * x;
        let (lo, hi) = psi.support();
        let osc = 8.0 * PI * (x * hi).powf(0.25) * (1.0 - (lo / hi).powf(0.25));
        let panels = 32 + (osc / 2.0).ceil() as usize;
        pref * quad::composite(
            |y| {
                let z = x * y;
                psi.eval(y) * z.powf(-(m as f64 + 1.0) / 4.0)
                    * bessel_j_signed(m as i32 - 2, 8.0 * PI * z.powf(0.25))
            },
            lo,
            hi,
            panels,
        )
    }

    /// Majorant of |B_m| from |J_ν(z)| ≤ √(2/(πz)).
    pub fn term_envelope(x: f64, psi: &TestFunction, m: usize) -> f64 {
        let pref = (4.0 * PI).powi(2 - m as i32) / (8.0 * PI) * x;
        let (lo, hi) = psi.support();
        pref * quad::composite(
            |y| {
                let z = x * y;
                psi.eval(y).abs()
                    * z.powf(-(m as f64 + 1.0) / 4.0)
                    * (2.0 / (PI * 8.0 * PI * z.powf(0.25))).sqrt()
            },
            lo,
            hi,
            32,
        )
    }

    pub fn eval(&self, x: f64, psi: &TestFunction, terms: usize) -> Result<(Complex64, f64)> {
        if x * psi.scale < 10.0 {
            return Err(Error::Domain(format!("xN = {} below 10", x * psi.scale)));
        }
        if terms == 0 || terms >= self.c_m.len() {
            return Err(Error::Argument(format!("terms must lie in 1..{}", self.c_m.len())));
        }
        let mut v = c(0.0, 0.0);
        for m in 0..terms {
            v += self.c_m[m] * Self::term(x, psi, m);
        }
        let env = self.c_m[terms].norm() * Self::term_envelope(x, psi, terms);
        Ok((v, env))
    }

    /// (c_j, d_j), j = 1..terms: coefficients of (xy)^{−j/4−1/8} e(±4(xy)^{1/4})
    /// in the leading Hankel form of each term.
    pub fn lemma_constants(&self, terms: usize) -> Vec<(Complex64, Complex64)> {
        (0..terms.min(self.c_m.len()))
            .map(|m| {
                let pref = self.c_m[m] * (4.0 * PI).powi(2 - m as i32) / (8.0 * PI) / (4.0 * PI);
                let ph = (m as f64 - 1.5) * PI / 2.0;
                (pref * Complex64::from_polar(1.0, -ph), pref * Complex64::from_polar(1.0, ph))
            })
            .collect()
    }
}

/// Σ_{m<K} C_m B_m(x) and the size of the first omitted term.
pub fn psi_asymptotic(
    x: f64,
    psi: &TestFunction,
    terms: usize,
    a: &ArchParams,
) -> Result<(Complex64, f64)> {
    AsymptoticPipeline::new(a, terms)?.eval(x, psi, terms)
}

/// One row of the error-decay experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub terms: usize,
    pub slope: f64,
    pub predicted: f64,
    pub xs: Vec<f64>,
    pub envelopes: Vec<f64>,
}

/// Narrow window used to expose the power-law error of the expansion.
pub fn decay_window() -> TestFunction {
    TestFunction::with_support(Shape::Gevrey { k: 30.0 }, 1.0, 1.02).expect("valid support")
}

/// Least-squares slope of ln y against ln x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// For each K, the envelope of |Ψ₊ − Σ_{m<K} C_m B_m| over one oscillation
/// period at each sweep point, and its fitted log-log slope.
pub fn decay_sweep(
    a: &ArchParams,
    psi: &TestFunction,
    term_list: &[usize],
    x_lo: f64,
    x_hi: f64,
    points: usize,
) -> Result<Vec<DecayFit>> {
    const SAMPLES: usize = 16;
    let kmax = term_list.iter().copied().max().unwrap_or(1);
    let pipe = AsymptoticPipeline::new(a, kmax)?;
    let tr = PsiTransform::new(psi, &GammaData::from_arch(a), ContourSpec::new(0.2), Sign::Plus)?;
    let y0 = psi.support().0;
    // One period of e(4(xy)^{1/4}) in u = x^{1/4}.
    let du = 0.25 / y0.powf(0.25);
    let mut xs = Vec::with_capacity(points);
    let mut env = vec![vec![0.0; points]; term_list.len()];
    for i in 0..points {
        let t = i as f64 / (points - 1).max(1) as f64;
        let xc = x_lo * (x_hi / x_lo).powf(t);
        xs.push(xc);
        let u0 = xc.powf(0.25);
        for j in 0..SAMPLES {
            let u = u0 + du * (j as f64 / SAMPLES as f64 - 0.5);
            let x = u.powi(4);
            let exact = tr.eval(x)?.value;
            let mut partial = c(0.0, 0.0);
            let mut k_done = 0;
            let mut ks: Vec<(usize, usize)> = term_list.iter().copied().enumerate().collect();
            ks.sort_by_key(|p| p.1);
            for (slot, k) in ks {
                while k_done < k {
                    partial += pipe.c_m[k_done] * AsymptoticPipeline::term(x, psi, k_done);
                    k_done += 1;
                }
                let err = (exact - partial).norm();
                if err > env[slot][i] {
                    env[slot][i] = err;
                }
            }
        }
    }
    Ok(term_list
        .iter()
        .zip(env)
        .map(|(&k, e)| DecayFit {
            terms: k,
            slope: loglog_slope(&xs, &e),
            predicted: (3.0 - k as f64) / 4.0 - 0.125,
            xs: xs.clone(),
            envelopes: e,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::arch_params;

    fn bump() -> TestFunction {
        TestFunction::canonical(8.0, 1.0, 2.0).unwrap()
    }

    #[test]
    fn window_basics() {
        let p = bump();
        assert_eq!(p.eval(8.0), 0.0);
        assert!((p.eval(12.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!(TestFunction::canonical(1.0, 0.5, 2.0).is_err());
        assert!(TestFunction::canonical(1.0, 1.0, 3.0).is_err());
        let m1 = p.mellin(c(1.0, 0.0));
        assert!((m1.re - p.integral()).abs() < 1e-13 * p.integral());
        assert!(m1.re > 0.0);
    }

    #[test]
    fn mellin_scale_law() {
        let p = TestFunction::canonical(1.0, 1.0, 2.0).unwrap();
        let q = p.dilated(8.0);
        for s in [c(0.5, 3.0), c(-0.3, 20.0), c(1.2, -7.0)] {
            let lhs = q.mellin(s);
            let rhs = p.mellin(s) * (s * 8f64.ln()).exp();
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1e-12), "{s}");
        }
    }

    #[test]
    fn mellin_matches_direct_quadrature() {
        let p = bump();
        for s in [c(0.2, 5.0), c(-0.7, 41.0)] {
            let direct = quad::composite_c(
                |t| ((s - 1.0) * t.ln()).exp() * p.eval(t),
                8.0,
                16.0,
                400,
            );
            assert!((p.mellin(s) - direct).norm() < 1e-12 * direct.norm().max(1e-14));
        }
    }

    #[test]
    fn gevrey_integral_and_fourier() {
        let p = TestFunction::with_support(Shape::Gevrey { k: 2.0 }, 4.0, 6.0).unwrap();
        let f0 = p.fourier(0.0);
        assert!((f0.re - p.integral()).abs() < 1e-13 && f0.im.abs() < 1e-14);
        // Real window: ŵ(−ξ) = conj ŵ(ξ).
        assert!((p.fourier(-1.3) - p.fourier(1.3).conj()).norm() < 1e-14);
    }

    #[test]
    fn barycentric_reproduces_polynomials() {
        let vals: Vec<Complex64> = (0..40).map(|i| c((i as f64 * 0.1).powi(5), 0.0)).collect();
        let g = PsiGrid { l0: 0.0, dl: 0.1, sigma: 0.0, vals };
        let l: f64 = 1.234;
        let got = g.eval(l.exp()).re;
        assert!((got - l.powi(5)).abs() < 1e-10);
    }

    #[test]
    fn inverse_factorial_constant_series() {
        let cm = inverse_factorial_coeffs(&[], 4);
        assert_eq!(cm[0], c(1.0, 0.0));
        assert!(cm[1..].iter().all(|v| v.norm() < 1e-15));
        // b1/s alone: leading C_1 = −4 b1.
        let cm = inverse_factorial_coeffs(&[c(0.5, 0.0)], 3);
        assert!((cm[1] - c(-2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn psi_real_for_real_data() {
        let a = arch_params(0.3, 0.2, 0.25);
        let g = GammaData::from_arch(&a);
        let p = TestFunction::canonical(1.0, 1.0, 2.0).unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            let v = psi_pm(3.0, &g, &p, ContourSpec::new(0.3), sign).unwrap();
            assert!(v.value.im.abs() < 1e-10 * v.value.norm().max(1.0), "{:?}", v.value);
            assert!(v.tail_bound.is_finite());
        }
    }

    #[test]
    fn contour_invariance() {
        let a = arch_params(0.3, 0.2, 0.25);
        let g = GammaData::from_arch(&a);
        let p = TestFunction::canonical(1.0, 1.0, 2.0).unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            let u = psi_pm(3.0, &g, &p, ContourSpec::new(0.3), sign).unwrap().value;
            let v = psi_pm(3.0, &g, &p, ContourSpec::new(0.45), sign).unwrap().value;
            assert!((u - v).norm() <= 1e-9 * u.norm(), "{u} vs {v}");
        }
    }

    #[test]
    fn shifted_form_with_residue_matches_direct() {
        let a = arch_params(0.3, 0.2, 0.25);
        let g = GammaData::from_arch(&a);
        let p = TestFunction::canonical(1.0, 1.0, 2.0).unwrap();
        let direct = psi_pm(3.0, &g, &p, ContourSpec::new(0.3), Sign::Plus).unwrap().value;
        // σ₁ = −0.3 crosses the triple pole at 0.025 and the pole at −0.075,
        // which share one circle.
        let (v, res) = f_plus_shifted(3.0, &a, &p, -0.3).unwrap();
        assert_eq!(res.len(), 1);
        assert_eq!(res[0].multiplicity, 4);
        assert!((v - direct).norm() <= 1e-8 * direct.norm(), "{v} vs {direct}");
        // Close to the pole the step must shrink.
        let (w, res) = f_plus_shifted(3.0, &a, &p, 0.05).unwrap();
        assert!(res.is_empty());
        assert!((w - direct).norm() <= 1e-7 * direct.norm(), "{w} vs {direct}");
    }

    #[test]
    fn grid_matches_pointwise() {
        let a = arch_params(0.1, -0.05, 0.2);
        let g = GammaData::from_arch(&a);
        let p = TestFunction::canonical(1.0, 1.0, 2.0).unwrap();
        let tr = PsiTransform::new(&p, &g, ContourSpec::new(0.3), Sign::Minus).unwrap();
        let grid = tr.grid(0.5, 1e5).unwrap();
        for &y in &[0.7, 3.3, 41.0, 977.0, 6.1e4] {
            let d = tr.eval(y).unwrap().value;
            assert!((grid.eval(y) - d).norm() <= 1e-10 * d.norm().max(1e-3), "y={y}");
        }
    }

    #[test]
    fn curly_g_decays() {
        let a = arch_params(0.3, 0.2, 0.25);
        let p = TestFunction::canonical(1.0, 1.0, 2.0).unwrap();
        let mags: Vec<f64> = [10.0, 40.0, 160.0, 640.0]
            .iter()
            .map(|&t| curly_g(c(0.25, t), &a, &p).unwrap().norm())
            .collect();
        for w in mags.windows(2) {
            assert!(w[1] < 0.05 * w[0], "{mags:?}");
        }
    }

    #[test]
    fn contour_rejects_pole_on_line() {
        let a = arch_params(0.3, 0.2, 0.25);
        let p = TestFunction::canonical(1.0, 1.0, 2.0).unwrap();
        assert!(matches!(f_plus_shifted(3.0, &a, &p, 0.025), Err(Error::Pole(_))));
    }
}
