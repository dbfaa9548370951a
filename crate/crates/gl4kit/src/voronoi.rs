//! Two-sided numerical check of the GL(4) Voronoi formula for divisor-type
//! sources, with the polar terms supplied by an Estermann-type series built
//! from Hurwitz zeta values.
//!
//! The dual side uses Ψ_½(±x) = ½[Ψ₊(x) ± Ψ₋(x)]: with Ψ(±x) = Ψ₊ ± Ψ₋ the
//! m ≠ 0 sum counts every |m| twice (compare r = 1, where the formula reduces
//! to Σ d₄(n)ψ(n) = polar + Σ_{m≥1} d₄(m) Ψ₊(m)/m).

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, e_frac, euler_phi, factorize, gcd_i, mod_inv, primes_up_to, rem};
use crate::coeffs::{d4_coefficient_exact, CoefficientSource, CoefficientTable};
use crate::error::{Error, Result};
use crate::expsums::{hyper_kloosterman, HyperKLParams};
use crate::psi::{mellin, psi_majorant, ContourSpec, PsiTransform, TestFunction};
use crate::special::{GammaData, Sign};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// B_{2j} for j = 1..=14.
const BERNOULLI: [f64; 14] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
];

/// Hurwitz ζ(s, q) = Σ_{k≥0} (k+q)^{−s} for 0 < q ≤ 1 by Euler–Maclaurin.
/// Accurate to ~1e-15 relative for Re s ≥ 0 and |s| ≲ 10. For Re s < 0 the
/// head and the correction term cancel, costing ~(24^{1−Re s}/|ζ|)·1e-16.
pub fn hurwitz_zeta(s: Complex64, q: f64) -> Result<Complex64> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::Argument(format!("Hurwitz parameter q = {q} outside (0, 1]")));
    }
    if (s - 1.0).norm() < 1e-12 {
        return Err(Error::Pole(format!("zeta_H at s = {s}")));
    }
    const HEAD: usize = 24;
    let mut acc = c(0.0, 0.0);
    for k in 0..HEAD {
        acc += (-s * (k as f64 + q).ln()).exp();
    }
    let a = HEAD as f64 + q;
    let la = a.ln();
    acc += (-(s - 1.0) * la).exp() / (s - 1.0) + 0.5 * (-s * la).exp();
    // (s)_{2j−1} a^{−s−2j+1} B_{2j}/(2j)!
    let mut rising = s;
    let mut fact = 2.0;
    let mut pw = (-(s + 1.0) * la).exp();
    for (j0, b) in BERNOULLI.iter().enumerate() {
        let j = j0 + 1;
        let term = rising * pw * (b / fact);
        acc += term;
        if term.norm() < 1e-18 * acc.norm() {
            break;
        }
        let k = 2 * j as u32;
        rising *= (s + (k - 1) as f64) * (s + k as f64);
        fact *= ((k + 1) * (k + 2)) as f64;
        pw /= a * a;
    }
    Ok(acc)
}

pub fn zeta(s: Complex64) -> Result<Complex64> {
    hurwitz_zeta(s, 1.0)
}

/// D(s, a/r) = Σ_n A(1,1,n) e(an/r) n^{−s} for the shifted divisor source,
/// in the form r^{−4s} Σ_{c ∈ (1..r)⁴} e(a c₁c₂c₃c₄/r) ∏ ζ_H(s − a_i, c_i/r).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistedDivisorSeries {
    pub shift: [f64; 4],
    pub a: i64,
    pub r: u64,
}

impl TwistedDivisorSeries {
    pub fn new(shift: [f64; 4], a: i64, r: u64) -> Result<Self> {
        CoefficientSource::divisor(shift)?;
        if r == 0 || gcd_i(a, r as i64) != 1 {
            return Err(Error::Argument(format!("need r >= 1 and gcd(a, r) = 1, got a={a}, r={r}")));
        }
        Ok(TwistedDivisorSeries { shift, a, r })
    }

    /// Poles of the series, at 1 + a_i.
    pub fn poles(&self) -> [f64; 4] {
        self.shift.map(|a| 1.0 + a)
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let r = self.r as usize;
        // Distribution of c₁⋯c₄ mod r, weighted by the Hurwitz factors.
        let mut dist = vec![c(0.0, 0.0); r];
        dist[1 % r] = c(1.0, 0.0);
        for &ai in &self.shift {
            let z: Vec<Complex64> = (1..=r)
                .map(|ci| hurwitz_zeta(s - ai, ci as f64 / r as f64))
                .collect::<Result<_>>()?;
            let mut next = vec![c(0.0, 0.0); r];
            for (j, dj) in dist.iter().enumerate() {
                if *dj == c(0.0, 0.0) {
                    continue;
                }
                for (ci, zc) in (1..=r).zip(&z) {
                    next[(j * ci) % r] += dj * zc;
                }
            }
            dist = next;
        }
        let twisted: Complex64 =
            dist.iter().enumerate().map(|(j, v)| v * e_frac(self.a * j as i64, self.r)).sum();
        Ok(twisted * (-4.0 * s * (self.r as f64).ln()).exp())
    }
}

/// Σ over the poles 1 + a_i of (1/2πi)∮ ψ̃(s) D(s, a/r) ds on circles of
/// radius 0.05 (128-point trapezoid). Poles closer than 0.1 share a circle.
pub fn polar_correction(a: i64, r: u64, psi: &TestFunction, shift: [f64; 4]) -> Result<Complex64> {
    const M: usize = 128;
    const RADIUS: f64 = 0.05;
    let series = TwistedDivisorSeries::new(shift, a, r)?;
    let mut poles = series.poles().to_vec();
    poles.sort_by(f64::total_cmp);
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for p in poles {
        match clusters.last_mut() {
            Some(cl) if p - cl.last().unwrap() < 2.0 * RADIUS => cl.push(p),
            _ => clusters.push(vec![p]),
        }
    }
    let mut total = c(0.0, 0.0);
    for (i, cl) in clusters.iter().enumerate() {
        let ctr = (cl[0] + cl[cl.len() - 1]) / 2.0;
        let spread = (cl[cl.len() - 1] - cl[0]) / 2.0;
        let gap = clusters
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .flat_map(|(_, o)| o.iter().map(|p| (p - ctr).abs()))
            .fold(f64::INFINITY, f64::min);
        let mut rad = spread + RADIUS;
        while rad > spread + 1e-3 && gap - rad < 0.5 * (rad - spread) {
            rad = spread + (rad - spread) / 2.0;
        }
        if gap - rad < 0.5 * (rad - spread) {
            return Err(Error::Pole(format!("pole cluster at {ctr} too close to its neighbours")));
        }
        let mut acc = c(0.0, 0.0);
        for k in 0..M {
            let d = Complex64::from_polar(rad, 2.0 * PI * (k as f64 + 0.5) / M as f64);
            let s = ctr + d;
            acc += mellin(psi, s) * series.eval(s)? * d;
        }
        total += acc / M as f64;
    }
    Ok(total)
}

/// Gamma data at infinity of the source: λ_j = −a_j, δ_j = 0 for the
/// shifted divisor source; synthetic sources carry none and use λ = 0.
pub fn gamma_data(src: &CoefficientSource) -> GammaData {
    match src {
        CoefficientSource::DivisorShift { shift } => {
            GammaData { lambda: shift.map(|a| c(-a, 0.0)), delta: [0; 4] }
        }
        CoefficientSource::Synthetic { .. } => GammaData::zero(),
    }
}

fn check_twist(a: i64, r: u64, q: [u64; 2]) -> Result<()> {
    if r == 0 || q.contains(&0) {
        return Err(Error::Argument("r and q must be positive".into()));
    }
    if gcd_i(a, r as i64) != 1 {
        return Err(Error::Argument(format!("gcd({a}, {r}) != 1")));
    }
    Ok(())
}

/// Σ_{n ≥ 1} A(q₂, q₁, n) e(an/r) ψ(n) over the support of ψ.
pub fn voronoi_lhs(
    a: i64,
    r: u64,
    psi: &TestFunction,
    table: &CoefficientTable,
    q: [u64; 2],
) -> Result<Complex64> {
    check_twist(a, r, q)?;
    let (lo, hi) = psi.support();
    let mut acc = c(0.0, 0.0);
    for n in (lo.floor().max(0.0) as u64 + 1)..=(hi.ceil() as u64) {
        let w = psi.eval(n as f64);
        if w == 0.0 {
            continue;
        }
        acc += table.coefficient(q[1], q[0], n)? * e_frac(a * n as i64, r) * w;
    }
    Ok(acc)
}

/// One (d₁, d₂) block of the dual side.
struct DualBlock {
    d: [u64; 2],
    /// Argument scale: Ψ is evaluated at m · d₂²d₁³/(r⁴q₂q₁²).
    scale: f64,
    kl_modulus: u64,
    kl: Vec<Complex64>,
    /// r/(d₁d₂).
    weight: f64,
}

/// The dual side of the formula, organized for streaming evaluation.
pub struct DualSide {
    r: u64,
    q: [u64; 2],
    blocks: Vec<DualBlock>,
    bad_primes: Vec<u64>,
    table: CoefficientTable,
    plus: PsiTransform,
    minus: PsiTransform,
}

impl DualSide {
    pub fn new(a: i64, r: u64, psi: &TestFunction, table: &CoefficientTable, q: [u64; 2]) -> Result<Self> {
        check_twist(a, r, q)?;
        // 𝒦ℒ is taken at −ā: with the e(−x) kernel in Ψ this is the sign for which
        // the identity holds; +ā yields the complex conjugate for real A.
        let abar = if r == 1 { 0 } else { -(mod_inv(a, r).expect("a is a unit") as i64) };
        let mut blocks = Vec::new();
        for d1 in divisors(r * q[0]) {
            for d2 in divisors(r * q[0] * q[1] / d1) {
                let p = HyperKLParams::new(q, [d1, d2], r)?;
                let (_, m2) = p.moduli();
                let kl = (0..m2).map(|m| hyper_kloosterman(abar, m as i64, &p)).collect::<Result<_>>()?;
                let scale = (d2 * d2) as f64 * (d1 * d1 * d1) as f64
                    / ((r as f64).powi(4) * q[1] as f64 * (q[0] * q[0]) as f64);
                blocks.push(DualBlock { d: [d1, d2], scale, kl_modulus: m2, kl, weight: r as f64 / (d1 * d2) as f64 });
            }
        }
        let mut bad_primes: Vec<u64> = Vec::new();
        for n in [r, q[0], q[1]] {
            bad_primes.extend(factorize(n)?.into_iter().map(|(p, _)| p));
        }
        bad_primes.sort_unstable();
        bad_primes.dedup();
        let g = gamma_data(table.source());
        let spec = ContourSpec::new(0.3);
        Ok(DualSide {
            r,
            q,
            blocks,
            bad_primes,
            table: table.clone(),
            plus: PsiTransform::new(psi, &g, spec, Sign::Plus)?,
            minus: PsiTransform::new(psi, &g, spec, Sign::Minus)?,
        })
    }

    /// The (d₁, d₂) pairs enumerated, each with d₁ | rq₁ and d₂ | rq₁q₂/d₁.
    pub fn divisor_pairs(&self) -> Vec<[u64; 2]> {
        self.blocks.iter().map(|b| b.d).collect()
    }

    /// Smallest argument scale over the blocks.
    pub fn x_unit(&self) -> f64 {
        self.blocks.iter().map(|b| b.scale).fold(f64::INFINITY, f64::min)
    }

    /// Partial sums Σ_{0<|m|≤M} for each M in `checkpoints` (increasing).
    pub fn partial_sums(&self, checkpoints: &[u64]) -> Result<Vec<Complex64>> {
        let m_max = *checkpoints.last().ok_or_else(|| Error::Argument("no checkpoints".into()))?;
        if checkpoints.windows(2).any(|w| w[0] >= w[1]) || checkpoints[0] == 0 {
            return Err(Error::Argument("checkpoints must be positive and increasing".into()));
        }
        let x_lo = self.x_unit();
        let x_hi = self.blocks.iter().map(|b| b.scale).fold(0.0, f64::max) * m_max as f64;
        let gp = self.plus.grid(x_lo, x_hi)?;
        let gm = self.minus.grid(x_lo, x_hi)?;
        let mut sieve = CoefficientSieve::new(&self.table, &self.bad_primes, m_max)?;
        let mut bad_cache: HashMap<(u64, usize), Complex64> = HashMap::new();
        let mut out = Vec::with_capacity(checkpoints.len());
        let mut total = c(0.0, 0.0);
        let mut next = 0;
        let mut lo = 1u64;
        while lo <= m_max {
            let hi = (lo + SEGMENT as u64 - 1).min(m_max);
            let seg = sieve.segment(lo, hi)?;
            let mut block_sum = c(0.0, 0.0);
            for (i, (good, bad)) in seg.iter().enumerate() {
                let m = lo + i as u64;
                let mut term = c(0.0, 0.0);
                for (bi, b) in self.blocks.iter().enumerate() {
                    let coef = if *bad == 1 && b.d == [1, 1] {
                        *good
                    } else {
                        let key = (*bad, bi);
                        let v = match bad_cache.get(&key) {
                            Some(v) => *v,
                            None => {
                                let v = self.table.coefficient(*bad, b.d[1], b.d[0])?;
                                bad_cache.insert(key, v);
                                v
                            }
                        };
                        good * v
                    };
                    if coef == c(0.0, 0.0) {
                        continue;
                    }
                    let x = m as f64 * b.scale;
                    let (p, n) = (gp.eval(x), gm.eval(x));
                    let kp = b.kl[(m % b.kl_modulus) as usize];
                    let kn = b.kl[rem(-(m as i64), b.kl_modulus) as usize];
                    term += coef * b.weight / m as f64 * 0.5 * (kp * (p + n) + kn * (p - n));
                }
                block_sum += term;
                if m == checkpoints[next] {
                    out.push(total + block_sum);
                    next += 1;
                }
            }
            total += block_sum;
            lo = hi + 1;
        }
        Ok(out)
    }

    /// Majorant for Σ_{|m|>M} of the dual terms, minimized over a few
    /// contour abscissae. Uses |Ψ±(x)| ≤ K±(σ) x^{−σ}, |𝒦ℒ| ≤ φ(m₁)φ(m₂),
    /// |A(m,d₂,d₁)| ≤ A*(m) A*(1,d₂,d₁) and Rankin's bound on Σ_{m>M} A*(m) m^{−1−σ}.
    /// A* is A itself for divisor sources and d₄ for tempered sources.
    pub fn tail_bound(&self, psi: &TestFunction, m: u64) -> Result<f64> {
        Ok(self.tail_certificate(psi)?.bound(m))
    }

    /// The M-independent part of [`DualSide::tail_bound`].
    pub fn tail_certificate(&self, psi: &TestFunction) -> Result<TailCertificate> {
        let g = gamma_data(self.table.source());
        let shift = match self.table.source() {
            CoefficientSource::DivisorShift { shift } => shift.map(|a| -a),
            CoefficientSource::Synthetic { .. } => [0.0; 4],
        };
        let floor = shift.iter().copied().fold(f64::INFINITY, f64::min);
        let mut rows = Vec::new();
        for sigma in [1.0, 2.0, 3.0, 4.0, 5.0] {
            let eps_max = sigma + floor;
            if eps_max <= 0.0 {
                continue;
            }
            let k = match (
                psi_majorant(psi, &g, sigma, Sign::Plus),
                psi_majorant(psi, &g, sigma, Sign::Minus),
            ) {
                (Ok(p), Ok(m)) => 0.5 * (p + m),
                // The majorant does not converge at this abscissa; try the others.
                (Err(Error::Truncation(_)), _) | (_, Err(Error::Truncation(_))) => continue,
                (Err(e), _) | (_, Err(e)) => return Err(e),
            };
            let mut blocks = 0.0;
            for b in &self.blocks {
                let ad = match self.table.source() {
                    CoefficientSource::DivisorShift { .. } => self.table.coefficient(1, b.d[1], b.d[0])?.norm(),
                    CoefficientSource::Synthetic { .. } => d4_coefficient_exact(1, b.d[1], b.d[0])? as f64,
                };
                // |𝒦ℒ| is at most its number of terms.
                let (m1, m2) = HyperKLParams::new(self.q, b.d, self.r)?.moduli();
                let kl_max = (euler_phi(m1) * euler_phi(m2)) as f64;
                // Both signs of m.
                blocks += 2.0 * b.weight * ad * kl_max * b.scale.powf(-sigma);
            }
            // Rankin: Σ_{m>M} A*(m) m^{−1−σ} ≤ M^{−ε} ∏ ζ(1 + σ − ε + b_i), b = dual shift.
            for i in 1..40 {
                let eps = eps_max * i as f64 / 40.0;
                let mut z = 1.0;
                for b in shift {
                    z *= zeta(c(1.0 + sigma - eps + b, 0.0))?.re;
                }
                rows.push((eps, blocks * k * z));
            }
        }
        if rows.is_empty() {
            return Err(Error::Truncation("no abscissa gives a convergent tail majorant".into()));
        }
        Ok(TailCertificate { rows })
    }
}

/// Tail majorant C M^{−ε}, minimized over the stored (ε, C) pairs.
#[derive(Debug, Clone)]
pub struct TailCertificate {
    rows: Vec<(f64, f64)>,
}

impl TailCertificate {
    pub fn bound(&self, m: u64) -> f64 {
        self.rows.iter().map(|&(eps, c)| c * (m as f64).powf(-eps)).fold(f64::INFINITY, f64::min)
    }

    /// Smallest M in [start, cap] with bound ≤ target, if any.
    pub fn first_below(&self, target: f64, start: u64, cap: u64) -> Option<u64> {
        let start = start.max(1);
        if self.bound(start) <= target {
            return Some(start);
        }
        if self.bound(cap) > target {
            return None;
        }
        // The bound is decreasing in M.
        let (mut lo, mut hi) = (start, cap);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.bound(mid) <= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }
}

const SEGMENT: usize = 1 << 16;

/// Segmented sieve producing, for each m, the value A(m_good, 1, 1) of the
/// part of m coprime to the bad primes together with the bad part itself.
struct CoefficientSieve<'a> {
    table: &'a CoefficientTable,
    bad: Vec<u64>,
    primes: Vec<u64>,
    /// A(p^e, 1, 1) for small primes, e < 64.
    small: HashMap<u64, Vec<Complex64>>,
}

impl<'a> CoefficientSieve<'a> {
    fn new(table: &'a CoefficientTable, bad: &[u64], m_max: u64) -> Result<Self> {
        let root = ((m_max as f64).sqrt() as usize + 2).max(2);
        Ok(CoefficientSieve { table, bad: bad.to_vec(), primes: primes_up_to(root), small: HashMap::new() })
    }

    fn local(&mut self, p: u64, e: u32) -> Result<Complex64> {
        if !self.small.contains_key(&p) {
            self.small.insert(p, vec![c(1.0, 0.0)]);
        }
        let row = self.small.get_mut(&p).unwrap();
        while row.len() <= e as usize {
            let k = row.len() as u32;
            row.push(self.table.local(p, [k, 0, 0])?);
        }
        Ok(row[e as usize])
    }

    /// A(p, 1, 1) = e₃(β_p) for primes beyond the sieving range.
    fn large_prime(&self, p: u64) -> Result<Complex64> {
        Ok(self.table.source().satake(p)?.elementary()[3])
    }

    fn segment(&mut self, lo: u64, hi: u64) -> Result<Vec<(Complex64, u64)>> {
        let len = (hi - lo + 1) as usize;
        let mut rest: Vec<u64> = (lo..=hi).collect();
        let mut good = vec![c(1.0, 0.0); len];
        let mut bad = vec![1u64; len];
        let primes = self.primes.clone();
        for &p in &primes {
            if p * p > hi && !self.bad.contains(&p) {
                break;
            }
            let first = lo.div_ceil(p) * p;
            let mut m = first;
            let is_bad = self.bad.contains(&p);
            while m <= hi {
                let i = (m - lo) as usize;
                let mut e = 0;
                let mut pe = 1;
                while rest[i] % p == 0 {
                    rest[i] /= p;
                    e += 1;
                    pe *= p;
                }
                if is_bad {
                    bad[i] *= pe;
                } else {
                    good[i] *= self.local(p, e)?;
                }
                m += p;
            }
        }
        for i in 0..len {
            let p = rest[i];
            if p > 1 {
                if self.bad.contains(&p) {
                    bad[i] *= p;
                } else if p < 1 << 16 {
                    good[i] *= self.local(p, 1)?;
                } else {
                    good[i] *= self.large_prime(p)?;
                }
            }
        }
        Ok(good.into_iter().zip(bad).collect())
    }
}

/// Σ_{d₁|rq₁} Σ_{d₂|rq₁q₂/d₁} Σ_{0<|m|≤M} r A(m,d₂,d₁)/(|m|d₁d₂) 𝒦ℒ(−ā, m; r, q, d) Ψ_½(m d₂²d₁³/(r⁴q₂q₁²)),
/// and a majorant for the omitted |m| > M.
pub fn voronoi_rhs(
    a: i64,
    r: u64,
    psi: &TestFunction,
    table: &CoefficientTable,
    q: [u64; 2],
    m_max: u64,
) -> Result<(Complex64, f64)> {
    let dual = DualSide::new(a, r, psi, table, q)?;
    let v = dual.partial_sums(&[m_max])?[0];
    Ok((v, dual.tail_bound(psi, m_max)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VoronoiReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub polar: Complex64,
    pub m_truncation: u64,
    pub tail_bound: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum Verdict {
    Pass,
    Fail,
    /// The truncation could not be certified below tolerance within the cap.
    Inconclusive(String),
    /// Synthetic source: the formula presupposes automorphy, nothing is asserted.
    Diagnostic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Largest M the doubling schedule may reach.
    pub m_cap: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { m_cap: 1 << 26 }
    }
}

pub fn voronoi_verify(
    a: i64,
    r: u64,
    psi: &TestFunction,
    source: &CoefficientSource,
    q: [u64; 2],
    tol: f64,
) -> Result<(VoronoiReport, Verdict)> {
    voronoi_verify_with(a, r, psi, source, q, tol, VerifyOptions::default())
}

/// M is the smallest value ≥ M₀ = ⌈40⁴/(x_unit N)⌉ whose certified tail
/// falls below tol/4 of |lhs|, capped at `opts.m_cap`. The verdict is Pass when
/// the truncated discrepancy plus the tail is within tol, Fail when the
/// discrepancy exceeds tol even after removing the tail, Inconclusive otherwise.
pub fn voronoi_verify_with(
    a: i64,
    r: u64,
    psi: &TestFunction,
    source: &CoefficientSource,
    q: [u64; 2],
    tol: f64,
    opts: VerifyOptions,
) -> Result<(VoronoiReport, Verdict)> {
    let table = CoefficientTable::new(source.clone());
    let lhs = voronoi_lhs(a, r, psi, &table, q)?;
    let (polar, diagnostic) = match source {
        CoefficientSource::DivisorShift { shift } if q == [1, 1] => (polar_correction(a, r, psi, *shift)?, false),
        CoefficientSource::DivisorShift { .. } => {
            return Err(Error::Argument("polar oracle covers q = (1, 1) only".into()))
        }
        CoefficientSource::Synthetic { .. } => (c(0.0, 0.0), true),
    };
    let dual = DualSide::new(a, r, psi, &table, q)?;
    let scale = lhs.norm().max(1e-30);
    let cert = dual.tail_certificate(psi)?;
    let m0 = ((40f64.powi(4) / (dual.x_unit() * psi.scale)).ceil().max(1.0) as u64).min(opts.m_cap);
    let m = cert.first_below(tol / 4.0 * scale, m0, opts.m_cap).unwrap_or(opts.m_cap);
    let rhs = dual.partial_sums(&[m])?[0];
    let tail_bound = cert.bound(m);
    let discrepancy = (lhs - polar - rhs).norm();
    let rel_error = discrepancy / scale;
    let report = VoronoiReport { lhs, rhs, polar, m_truncation: m, tail_bound, rel_error };
    let allowed = tol * scale;
    let verdict = if diagnostic {
        Verdict::Diagnostic
    } else if discrepancy + tail_bound <= allowed {
        Verdict::Pass
    } else if discrepancy - tail_bound > allowed {
        Verdict::Fail
    } else {
        Verdict::Inconclusive(format!(
            "truncation: tail bound {tail_bound:.3e} at M = {m} vs allowed {allowed:.3e}"
        ))
    };
    Ok((report, verdict))
}
