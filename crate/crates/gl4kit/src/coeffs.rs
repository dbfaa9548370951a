//! GL(4) Fourier coefficients from local Satake data, and the coefficient
//! identities (Hecke relation, Möbius inversions, prime-power inversion).

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::RwLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, factorize, gcd, is_prime, mobius, valuation};
use crate::error::{Error, Result};

/// Exponent used in every average-of-squares comparison quantity.
pub const LEMMA_EPS: f64 = 0.1;

/// Archimedean parameters: the spectral triple ν and the derived α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArchParams {
    pub nu: [f64; 3],
    pub alpha: [f64; 4],
}

impl ArchParams {
    pub fn new(nu1: f64, nu2: f64, nu3: f64, cuspidal: bool) -> Result<Self> {
        let alpha = [
            1.5 - nu1 - 2.0 * nu2 - 3.0 * nu3,
            -1.5 + 3.0 * nu1 + 2.0 * nu2 + nu3,
            -0.5 - nu1 + 2.0 * nu2 + nu3,
            0.5 - nu1 - 2.0 * nu2 + nu3,
        ];
        let out = ArchParams { nu: [nu1, nu2, nu3], alpha };
        if cuspidal {
            out.check_cuspidal()?;
        }
        Ok(out)
    }

    /// Parameters whose α vector is the given one (which must sum to zero).
    pub fn from_alpha(alpha: [f64; 4]) -> Result<Self> {
        let s: f64 = alpha.iter().sum();
        if s.abs() > 1e-12 {
            return Err(Error::Argument(format!("alpha sums to {s}, expected 0")));
        }
        let nu1 = (1.0 + alpha[1] - alpha[2]) / 4.0;
        let nu2 = (1.0 + alpha[2] - alpha[3]) / 4.0;
        let nu3 = (1.0 - alpha[0] + alpha[3]) / 4.0;
        Ok(ArchParams { nu: [nu1, nu2, nu3], alpha })
    }

    pub fn check_cuspidal(&self) -> Result<()> {
        for (i, a) in self.alpha.iter().enumerate() {
            if a.abs() >= 0.5 {
                return Err(Error::Range { index: i + 1, value: *a });
            }
        }
        Ok(())
    }

    /// Parameters of the dual form, built from (ν₃, ν₂, ν₁).
    pub fn dual(&self) -> Self {
        let [n1, n2, n3] = self.nu;
        ArchParams::new(n3, n2, n1, false).expect("non-cuspidal construction is infallible")
    }
}

/// Free-function form of [`ArchParams::new`] without the range check.
pub fn arch_params(nu1: f64, nu2: f64, nu3: f64) -> ArchParams {
    ArchParams::new(nu1, nu2, nu3, false).expect("non-cuspidal construction is infallible")
}

/// Local Satake parameters at one prime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSatake {
    pub prime: u64,
    pub beta: [Complex64; 4],
}

impl LocalSatake {
    pub fn new(prime: u64, beta: [Complex64; 4]) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::Argument(format!("{prime} is not prime")));
        }
        let prod = beta.iter().product::<Complex64>();
        if (prod - 1.0).norm() > 1e-12 {
            return Err(Error::Argument(format!("Satake product {prod} != 1")));
        }
        Ok(LocalSatake { prime, beta })
    }

    pub fn is_tempered(&self) -> bool {
        self.beta.iter().all(|b| (b.norm() - 1.0).abs() <= 1e-12)
    }

    /// Closed under z -> 1/conj(z) as a multiset.
    pub fn is_self_dual_closed(&self) -> bool {
        let mut used = [false; 4];
        for b in &self.beta {
            let target = b.conj().inv();
            let hit = (0..4).find(|&j| !used[j] && (self.beta[j] - target).norm() <= 1e-12);
            match hit {
                Some(j) => used[j] = true,
                None => return false,
            }
        }
        true
    }

    /// Elementary symmetric polynomials e₀..e₄ of β.
    pub fn elementary(&self) -> [Complex64; 5] {
        elementary(&self.beta)
    }
}

fn elementary(beta: &[Complex64; 4]) -> [Complex64; 5] {
    let mut e = [Complex64::new(0.0, 0.0); 5];
    e[0] = Complex64::new(1.0, 0.0);
    for b in beta {
        for k in (1..5).rev() {
            e[k] += e[k - 1] * b;
        }
    }
    e
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientSource {
    /// Tempered, self-dual-closed Satake data drawn per prime from `seed`,
    /// with optional explicit overrides.
    Synthetic {
        seed: u64,
        #[serde(default)]
        overrides: BTreeMap<u64, LocalSatake>,
    },
    /// A(1,1,n) = Σ_{n₁n₂n₃n₄=n} ∏ n_i^{a_i}, i.e. β_i = p^{a_i}.
    DivisorShift { shift: [f64; 4] },
}

impl CoefficientSource {
    pub fn synthetic(seed: u64) -> Self {
        CoefficientSource::Synthetic { seed, overrides: BTreeMap::new() }
    }

    pub fn divisor(shift: [f64; 4]) -> Result<Self> {
        let s: f64 = shift.iter().sum();
        if s.abs() > 1e-12 {
            return Err(Error::Argument(format!("shift sums to {s}, expected 0")));
        }
        Ok(CoefficientSource::DivisorShift { shift })
    }

    /// Source of the dual form: conjugated Satake data, or the negated shift.
    pub fn dual(&self) -> Self {
        match self {
            CoefficientSource::DivisorShift { shift } => {
                CoefficientSource::DivisorShift { shift: shift.map(|a| -a) }
            }
            CoefficientSource::Synthetic { seed, overrides } => CoefficientSource::Synthetic {
                seed: *seed,
                overrides: overrides
                    .iter()
                    .map(|(&p, s)| (p, LocalSatake { prime: p, beta: s.beta.map(|b| b.inv()) }))
                    .collect(),
            },
        }
    }

    pub fn satake(&self, p: u64) -> Result<LocalSatake> {
        if !is_prime(p) {
            return Err(Error::Argument(format!("{p} is not prime")));
        }
        match self {
            CoefficientSource::Synthetic { seed, overrides } => {
                if let Some(s) = overrides.get(&p) {
                    return Ok(s.clone());
                }
                let mut rng =
                    ChaCha8Rng::seed_from_u64(seed ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let theta = rng.gen::<f64>() * 2.0 * PI;
                let phi = rng.gen::<f64>() * 2.0 * PI;
                let u = |a: f64| Complex64::from_polar(1.0, a);
                Ok(LocalSatake { prime: p, beta: [u(theta), u(-theta), u(phi), u(-phi)] })
            }
            CoefficientSource::DivisorShift { shift } => {
                let lp = (p as f64).ln();
                let beta = shift.map(|a| Complex64::new((a * lp).exp(), 0.0));
                Ok(LocalSatake { prime: p, beta })
            }
        }
    }
}

/// Complete homogeneous h_0..=h_n from the elementary polynomials.
fn complete_homogeneous(e: &[Complex64; 5], n: usize) -> Vec<Complex64> {
    let mut h = vec![Complex64::new(0.0, 0.0); n + 1];
    h[0] = Complex64::new(1.0, 0.0);
    for j in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 1..=4.min(j) {
            let term = e[i] * h[j - i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        h[j] = acc;
    }
    h
}

fn det4(mut m: [[Complex64; 4]; 4]) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for c in 0..4 {
        let piv = (c..4)
            .max_by(|&a, &b| m[a][c].norm().total_cmp(&m[b][c].norm()))
            .unwrap();
        if m[piv][c].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..4 {
            let f = m[r][c] / m[c][c];
            for k in c..4 {
                let v = m[c][k];
                m[r][k] -= f * v;
            }
        }
    }
    det
}

/// Schur polynomial s_λ(β) by the Jacobi–Trudi determinant det[h_{λ_i − i + j}].
pub fn schur(beta: &[Complex64; 4], lambda: [u32; 4]) -> Complex64 {
    let e = elementary(beta);
    let h = complete_homogeneous(&e, lambda[0] as usize + 3);
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let idx = lambda[i] as i64 - i as i64 + j as i64;
            if idx >= 0 {
                *cell = h[idx as usize];
            }
        }
    }
    det4(m)
}

/// s_λ(1,1,1,1) by the Weyl dimension formula, exactly.
pub fn schur_at_one(lambda: [u32; 4]) -> u128 {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..4 {
        for j in i + 1..4 {
            num *= (lambda[i] as i64 - lambda[j] as i64 + j as i64 - i as i64) as u128;
            den *= (j - i) as u128;
        }
    }
    num / den
}

pub fn partition(k: [u32; 3]) -> [u32; 4] {
    [k[0] + k[1] + k[2], k[0] + k[1], k[0], 0]
}

/// A(p^{k₁}, p^{k₂}, p^{k₃}) via the Schur rule.
pub fn local_coefficient(src: &CoefficientSource, p: u64, k: [u32; 3]) -> Result<Complex64> {
    let sat = src.satake(p)?;
    if k == [0, 0, 0] {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(schur(&sat.beta, partition(k)))
}

/// Memoized multiplicative assembly of A(m₁, m₂, m₃).
#[derive(Debug)]
pub struct CoefficientTable {
    source: CoefficientSource,
    cache: RwLock<HashMap<(u64, [u32; 3]), Complex64>>,
}

impl Clone for CoefficientTable {
    fn clone(&self) -> Self {
        let cache = self.cache.read().expect("cache lock").clone();
        CoefficientTable { source: self.source.clone(), cache: RwLock::new(cache) }
    }
}

impl CoefficientTable {
    pub fn new(source: CoefficientSource) -> Self {
        CoefficientTable { source, cache: RwLock::new(HashMap::new()) }
    }

    pub fn source(&self) -> &CoefficientSource {
        &self.source
    }

    pub fn local(&self, p: u64, k: [u32; 3]) -> Result<Complex64> {
        if k == [0, 0, 0] {
            return Ok(Complex64::new(1.0, 0.0));
        }
        if let Some(v) = self.cache.read().expect("cache lock").get(&(p, k)) {
            return Ok(*v);
        }
        let v = local_coefficient(&self.source, p, k)?;
        self.cache.write().expect("cache lock").insert((p, k), v);
        Ok(v)
    }

    pub fn coefficient(&self, m1: u64, m2: u64, m3: u64) -> Result<Complex64> {
        if m1 == 0 || m2 == 0 || m3 == 0 {
            return Err(Error::Argument("coefficient indices must be positive".into()));
        }
        let mut primes: Vec<u64> = Vec::new();
        for m in [m1, m2, m3] {
            primes.extend(factorize(m)?.into_iter().map(|(p, _)| p));
        }
        primes.sort_unstable();
        primes.dedup();
        let mut acc = Complex64::new(1.0, 0.0);
        for p in primes {
            let k = [valuation(m1, p), valuation(m2, p), valuation(m3, p)];
            acc *= self.local(p, k)?;
        }
        Ok(acc)
    }

    /// A at rational arguments num/den, zero unless every den divides its num.
    fn a_frac(&self, m: [(u64, u64); 3]) -> Result<Complex64> {
        if m.iter().any(|&(n, d)| d == 0 || n == 0 || n % d != 0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        self.coefficient(m[0].0 / m[0].1, m[1].0 / m[1].1, m[2].0 / m[2].1)
    }
}

/// Exact A(m₁,m₂,m₃) for the unshifted divisor source.
pub fn d4_coefficient_exact(m1: u64, m2: u64, m3: u64) -> Result<u128> {
    let mut primes: Vec<u64> = Vec::new();
    for m in [m1, m2, m3] {
        primes.extend(factorize(m)?.into_iter().map(|(p, _)| p));
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(primes
        .into_iter()
        .map(|p| schur_at_one(partition([valuation(m1, p), valuation(m2, p), valuation(m3, p)])))
        .product())
}

/// Absolute residual of an identity together with the size of its terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub abs: f64,
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        self.abs / self.scale.max(1.0)
    }
}

struct Acc {
    sum: Complex64,
    scale: f64,
}

impl Acc {
    fn new() -> Self {
        Acc { sum: Complex64::new(0.0, 0.0), scale: 0.0 }
    }
    fn add(&mut self, z: Complex64) {
        self.sum += z;
        self.scale += z.norm();
    }
}

fn residual(lhs: Acc, rhs: Acc) -> Residual {
    Residual { abs: (lhs.sum - rhs.sum).norm(), scale: lhs.scale.max(rhs.scale) }
}

/// A(k,1,1)A(1,ℓ,d) against Σ_{c₁c₂|k, c₁|ℓ, c₂|d} A(k/(c₁c₂), ℓ/c₁, dc₁/c₂).
pub fn hecke_identity(t: &CoefficientTable, k: u64, l: u64, d: u64) -> Result<Residual> {
    let mut lhs = Acc::new();
    lhs.add(t.coefficient(k, 1, 1)? * t.coefficient(1, l, d)?);
    let mut rhs = Acc::new();
    for c1 in divisors(gcd(k, l)) {
        for c2 in divisors(gcd(k / c1, d)) {
            rhs.add(t.a_frac([(k, c1 * c2), (l, c1), (d * c1, c2)])?);
        }
    }
    Ok(residual(lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InversionArgs {
    Basic { k: u64, l: u64 },
    PrimePower { p: u64, k: u32, l: u32, n: u32 },
    General { k: u64, l: u64, n: u64 },
}

pub fn inversion_identity(t: &CoefficientTable, args: InversionArgs) -> Result<Residual> {
    match args {
        InversionArgs::Basic { k, l } => {
            let mut lhs = Acc::new();
            for d in divisors(gcd(k, l)) {
                let md = mobius(d);
                if md == 0 {
                    continue;
                }
                for e in divisors(gcd(d, k / d)) {
                    let me = mobius(e);
                    if me == 0 {
                        continue;
                    }
                    let term = t.a_frac([(k, d * e), (1, 1), (1, 1)])?
                        * t.a_frac([(1, 1), (l, d), (d, e)])?;
                    lhs.add(term * (md * me) as f64);
                }
            }
            let mut rhs = Acc::new();
            rhs.add(t.coefficient(k, l, 1)?);
            Ok(residual(lhs, rhs))
        }
        InversionArgs::PrimePower { p, k, l, n } => {
            if !is_prime(p) {
                return Err(Error::Argument(format!("{p} is not prime")));
            }
            // p^e for possibly negative e, as a fraction (num, den).
            let pw = |e: i64| -> (u64, u64) {
                if e >= 0 {
                    (p.pow(e as u32), 1)
                } else {
                    (1, p.pow((-e) as u32))
                }
            };
            let (k, l, n) = (k as i64, l as i64, n as i64);
            let one = (1, 1);
            let a = |x: (u64, u64), y: (u64, u64), z: (u64, u64)| t.a_frac([x, y, z]);
            let mut lhs = Acc::new();
            lhs.add(a(pw(k), one, one)? * a(one, pw(l), pw(n))?);
            let mut rhs = Acc::new();
            rhs.add(a(pw(k), pw(l), pw(n))?);
            rhs.add(a(pw(k - 1), one, one)? * a(one, pw(l), pw(n - 1))?);
            rhs.add(a(pw(k - 1), one, one)? * a(one, pw(l - 1), pw(n + 1))?);
            rhs.add(-(a(pw(k - 2), one, one)? * a(one, pw(l - 1), pw(n))?));
            Ok(residual(lhs, rhs))
        }
        InversionArgs::General { k, l, n } => {
            let mut lhs = Acc::new();
            lhs.add(t.coefficient(k, l, n)?);
            let mut rhs = Acc::new();
            for d in divisors(gcd(k, l)) {
                for e in divisors(gcd(d, k / d)) {
                    let me = mobius(e);
                    if me == 0 {
                        continue;
                    }
                    for f in divisors(gcd(k, n)) {
                        let mdf = mobius(d * f);
                        if mdf == 0 {
                            continue;
                        }
                        let term = t.a_frac([(k, d * f * e), (1, 1), (1, 1)])?
                            * t.a_frac([(1, 1), (l, d), (d * n, e * f)])?;
                        rhs.add(term * (mdf * me) as f64);
                    }
                }
            }
            Ok(residual(lhs, rhs))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquaresMode {
    /// Σ_{k∼K} Σ_{ℓ∼L} |A(k,ℓ,1)|² against (KL)^{1+ε}.
    KlPlane { k: u64, l: u64 },
    /// Σ_{ℓ∼L} |A(a,ℓ,f)|² against afL, for squarefree a, f.
    ALF { a: u64, f: u64, l: u64 },
    /// Σ_{m≤M} |A(m,b,c)|² against (bcM)^{1+ε}.
    MBC { m: u64, b: u64, c: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumReport {
    pub sum: f64,
    pub comparison: f64,
    pub ratio: f64,
    pub terms: u64,
}

/// Dyadic range X < x ≤ 2X.
fn dyadic(x: u64) -> std::ops::RangeInclusive<u64> {
    (x + 1)..=(2 * x)
}

pub fn average_squares(t: &CoefficientTable, mode: SquaresMode) -> Result<SumReport> {
    let mut sum = 0.0;
    let mut terms = 0;
    let comparison = match mode {
        SquaresMode::KlPlane { k, l } => {
            if k > 0 && l > 0 {
                for a in dyadic(k) {
                    for b in dyadic(l) {
                        sum += t.coefficient(a, b, 1)?.norm_sqr();
                        terms += 1;
                    }
                }
            }
            ((k * l) as f64).powf(1.0 + LEMMA_EPS)
        }
        SquaresMode::ALF { a, f, l } => {
            for b in dyadic(l) {
                sum += t.coefficient(a, b, f)?.norm_sqr();
                terms += 1;
            }
            (a * f * l) as f64
        }
        SquaresMode::MBC { m, b, c } => {
            for x in 1..=m {
                sum += t.coefficient(x, b, c)?.norm_sqr();
                terms += 1;
            }
            ((b * c * m) as f64).powf(1.0 + LEMMA_EPS)
        }
    };
    let ratio = if comparison > 0.0 { sum / comparison } else { 0.0 };
    Ok(SumReport { sum, comparison, ratio, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn alpha_half_triple() {
        let a = arch_params(0.5, 0.5, 0.5);
        let want = [-1.5, 1.5, 0.5, -0.5];
        for i in 0..4 {
            assert!((a.alpha[i] - want[i]).abs() < 1e-15);
        }
        assert!(ArchParams::new(0.5, 0.5, 0.5, true).is_err());
    }

    #[test]
    fn dual_negates_alpha_set() {
        let a = arch_params(0.31, 0.22, 0.17);
        let d = a.dual();
        let mut x: Vec<f64> = a.alpha.iter().map(|v| -v).collect();
        let mut y: Vec<f64> = d.alpha.to_vec();
        x.sort_by(f64::total_cmp);
        y.sort_by(f64::total_cmp);
        for i in 0..4 {
            assert!((x[i] - y[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn from_alpha_inverts() {
        let a = arch_params(0.3, 0.2, 0.4);
        let b = ArchParams::from_alpha(a.alpha).unwrap();
        for i in 0..3 {
            assert!((a.nu[i] - b.nu[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn schur_small_cases() {
        let beta = [c(0.3, 0.1), c(-1.2, 0.4), c(0.7, -0.2), c(2.0, 1.0)];
        let e = elementary(&beta);
        assert!((schur(&beta, [1, 0, 0, 0]) - e[1]).norm() < 1e-13);
        assert!((schur(&beta, [1, 1, 0, 0]) - e[2]).norm() < 1e-13);
        assert!((schur(&beta, [1, 1, 1, 0]) - e[3]).norm() < 1e-13);
        // s_(2) = Σ_{i≤j} β_i β_j
        let mut h2 = c(0.0, 0.0);
        for i in 0..4 {
            for j in i..4 {
                h2 += beta[i] * beta[j];
            }
        }
        assert!((schur(&beta, [2, 0, 0, 0]) - h2).norm() < 1e-12);
    }

    #[test]
    fn weyl_dimension_matches_float_schur() {
        let one = [c(1.0, 0.0); 4];
        for k1 in 0..5 {
            for k2 in 0..5 {
                for k3 in 0..5 {
                    let lam = partition([k1, k2, k3]);
                    let exact = schur_at_one(lam) as f64;
                    assert!((schur(&one, lam).re - exact).abs() < 1e-9 * exact.max(1.0));
                }
            }
        }
    }

    #[test]
    fn normalization_and_d4() {
        let t = CoefficientTable::new(CoefficientSource::divisor([0.0; 4]).unwrap());
        assert_eq!(t.coefficient(1, 1, 1).unwrap(), c(1.0, 0.0));
        assert!((t.coefficient(1, 1, 12).unwrap().re - 40.0).abs() < 1e-12);
        assert!((local_coefficient(t.source(), 7, [0, 0, 1]).unwrap().re - 4.0).abs() < 1e-12);
        assert_eq!(d4_coefficient_exact(1, 1, 12).unwrap(), 40);
    }

    #[test]
    fn rejects_composite_prime_and_zero_index() {
        let src = CoefficientSource::synthetic(1);
        assert!(local_coefficient(&src, 6, [1, 0, 0]).is_err());
        let t = CoefficientTable::new(src);
        assert!(t.coefficient(0, 1, 1).is_err());
        assert!(matches!(t.coefficient(1, 1, (1 << 50) + 1), Err(Error::Capacity(_))));
    }

    #[test]
    fn synthetic_is_tempered_and_self_dual() {
        let src = CoefficientSource::synthetic(99);
        for p in [2, 3, 5, 97] {
            let s = src.satake(p).unwrap();
            assert!(s.is_tempered());
            assert!(s.is_self_dual_closed());
        }
    }

    #[test]
    fn small_identity_cases() {
        let t = CoefficientTable::new(CoefficientSource::synthetic(5));
        assert!(hecke_identity(&t, 3, 1, 3).unwrap().abs < 1e-12);
        assert!(hecke_identity(&t, 1, 6, 10).unwrap().abs < 1e-12);
        let b = inversion_identity(&t, InversionArgs::Basic { k: 1, l: 1 }).unwrap();
        assert!(b.abs < 1e-15);
        let pp = InversionArgs::PrimePower { p: 2, k: 1, l: 1, n: 0 };
        assert!(inversion_identity(&t, pp).unwrap().abs < 1e-12);
    }

    #[test]
    fn empty_range_sums_to_zero() {
        let t = CoefficientTable::new(CoefficientSource::synthetic(5));
        let r = average_squares(&t, SquaresMode::MBC { m: 0, b: 1, c: 1 }).unwrap();
        assert_eq!(r.sum, 0.0);
        assert_eq!(r.terms, 0);
    }
}
