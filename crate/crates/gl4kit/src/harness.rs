//! Dyadic objects of the second-moment reduction: the weight g(u), a smooth
//! dyadic partition of unity, and a direct evaluator of I(R, K; ℓ).

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::e;
use crate::coeffs::{CoefficientSource, CoefficientTable};
use crate::expsums::kloosterman;
use crate::psi::TestFunction;
use crate::quad;
use crate::{Error, Result};

/// Exponent ε in the u-range [−T^ε, T^ε].
pub const EPSILON: f64 = 0.1;

const QUAD_REL: f64 = 1e-12;

/// g(u) = min{1/|u|, (R/K)/(1 + u²)}; at u = 0 the finite branch R/K.
pub fn g_weight(u: f64, r: f64, k: f64) -> f64 {
    let c = r / k;
    let smooth = c / (1.0 + u * u);
    if u == 0.0 {
        smooth
    } else {
        smooth.min(1.0 / u.abs())
    }
}

/// Positive u where the two branches of g cross (roots of u² − cu + 1, c = R/K).
/// Empty when c < 2: the smooth branch is then the minimum everywhere.
pub fn g_crossovers(r: f64, k: f64) -> Vec<f64> {
    let c = r / k;
    if c < 2.0 {
        return Vec::new();
    }
    let d = (c * c - 4.0).sqrt();
    vec![(c - d) / 2.0, (c + d) / 2.0]
}

/// ∫_{−L}^{L} g(u) du in closed form.
pub fn g_integral(limit: f64, r: f64, k: f64) -> f64 {
    let c = r / k;
    let smooth = |a: f64, b: f64| c * (b.atan() - a.atan());
    let half = match g_crossovers(r, k).as_slice() {
        [lo, hi] => {
            let (lo, hi) = (lo.min(limit), hi.min(limit));
            smooth(0.0, lo) + (hi / lo).ln() + smooth(hi, limit.max(hi))
        }
        _ => smooth(0.0, limit),
    };
    2.0 * half
}

/// Elementary majorant 2 min{πc/2, 1 + ln⁺(cL)} for ∫_{−L}^{L} g, c = R/K.
pub fn g_integral_bound(limit: f64, r: f64, k: f64) -> f64 {
    let c = r / k;
    2.0 * (0.5 * std::f64::consts::PI * c).min(1.0 + (c * limit).ln().max(0.0))
}

/// Smooth step: 0 for s ≤ 1, 1 for s ≥ 2.
fn step(s: f64) -> f64 {
    let x = s - 1.0;
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let f = |y: f64| (-1.0 / y).exp();
    f(x) / (f(x) + f(1.0 - x))
}

/// w₁(t) = H(2t) − H(t) with H a smooth step from 1 to 2, so w₁ lives on
/// [1/2, 2] and Σ_{j≥0} w₁(t/2^j) telescopes to H(2t) = 1 for t ≥ 1.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DyadicWindow;

impl DyadicWindow {
    pub fn eval(&self, t: f64) -> f64 {
        step(2.0 * t) - step(t)
    }

    /// Σ_{j≥0} w₁(t/2^j).
    pub fn partition_sum(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        let mut x = t;
        while x > 0.5 {
            acc += self.eval(x);
            x /= 2.0;
        }
        acc
    }
}

/// max_t |Σ_j w₁(t/2^j) − 1| over the grid.
pub fn dyadic_partition_check(t_grid: &[f64]) -> Result<f64> {
    let w = DyadicWindow;
    let mut worst: f64 = 0.0;
    for &t in t_grid {
        if !(t >= 1.0) {
            return Err(Error::Argument(format!("partition is checked for t >= 1, got {t}")));
        }
        worst = worst.max((w.partition_sum(t) - 1.0).abs());
    }
    Ok(worst)
}

/// Parameters of I(R, K; ℓ): r ∼ R, |k| ∼ K, n ∼ N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IRKConfig {
    pub t: f64,
    pub n: u64,
    pub r: u64,
    pub k: u64,
    pub ell: u64,
}

/// Which hypotheses of the I(R, K; ℓ) ≪ T^{2+ε} lemma hold, read with ε = 0.1
/// and implied constants 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaRanges {
    /// T ≤ N ≤ T^{2+ε}/ℓ².
    pub n_in_range: bool,
    /// R ≤ X = min{T, N/T}.
    pub r_below_x: bool,
    /// K ≤ R T^ε.
    pub k_below: bool,
    /// ℓ ≤ T^{1+ε}.
    pub ell_in_range: bool,
}

impl LemmaRanges {
    pub fn all(&self) -> bool {
        self.n_in_range && self.r_below_x && self.k_below && self.ell_in_range
    }
}

pub const MAX_R: u64 = 32;
pub const MAX_N: u64 = 2048;

impl IRKConfig {
    pub fn new(t: f64, n: u64, r: u64, k: u64, ell: u64) -> Result<Self> {
        if !(t >= 1.0) || n == 0 || r == 0 || k == 0 || ell == 0 {
            return Err(Error::Argument(format!("need T >= 1 and positive N, R, K, l; got {t}, {n}, {r}, {k}, {ell}")));
        }
        Ok(IRKConfig { t, n, r, k, ell })
    }

    pub fn ranges(&self) -> LemmaRanges {
        let (t, n, r, k, l) = (self.t, self.n as f64, self.r as f64, self.k as f64, self.ell as f64);
        let x = t.min(n / t);
        LemmaRanges {
            n_in_range: t <= n && n <= t.powf(2.0 + EPSILON) / (l * l),
            r_below_x: r <= x,
            k_below: k <= r * t.powf(EPSILON),
            ell_in_range: l <= t.powf(1.0 + EPSILON),
        }
    }

    /// Half-width T^ε of the u-integral.
    pub fn u_limit(&self) -> f64 {
        self.t.powf(EPSILON)
    }

    fn check_size(&self) -> Result<()> {
        if self.r > MAX_R || self.n > MAX_N {
            return Err(Error::DeskScale(format!("R = {} (max {MAX_R}), N = {} (max {MAX_N})", self.r, self.n)));
        }
        Ok(())
    }
}

/// Summation order for I(R, K; ℓ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IrkOrder {
    /// For each (r, k), integrate g(u)|Σ_n ...|² over u.
    ROuter,
    /// Expand the square, sum k inside, integrate g(u) e(uh/(rT)) per difference h.
    NOuter,
}

/// w₃(x) = w₂(x)/√x with w₂ the canonical bump on [1, 2].
pub fn w3(x: f64) -> f64 {
    let w2 = TestFunction::canonical(1.0, 1.0, 2.0).expect("valid support");
    if x <= 0.0 {
        0.0
    } else {
        w2.eval(x) / x.sqrt()
    }
}

/// Split [−L, L] at 0 and at the crossovers of g, where g has kinks.
fn u_pieces(cfg: &IRKConfig) -> Vec<(f64, f64)> {
    let l = cfg.u_limit();
    let mut cuts = vec![0.0, l];
    for u in g_crossovers(cfg.r as f64, cfg.k as f64) {
        if u < l {
            cuts.push(u);
        }
    }
    cuts.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        out.push((w[0], w[1]));
        out.push((-w[1], -w[0]));
    }
    out
}

/// I(R, K; ℓ) for the coefficients of `table`, r-outer order.
pub fn irk_evaluate(cfg: &IRKConfig, table: &CoefficientTable) -> Result<f64> {
    irk_evaluate_with(cfg, table, IrkOrder::ROuter)
}

pub fn irk_evaluate_with(cfg: &IRKConfig, table: &CoefficientTable, order: IrkOrder) -> Result<f64> {
    irk_evaluate_fn(cfg, |n| table.coefficient(1, cfg.ell, n), order)
}

/// I(R, K; ℓ) with A(1, ℓ, n) supplied by `coeff`.
pub fn irk_evaluate_fn<F: Fn(u64) -> Result<Complex64>>(cfg: &IRKConfig, coeff: F, order: IrkOrder) -> Result<f64> {
    cfg.check_size()?;
    let nn = cfg.n as f64;
    // b_n = A(1, ℓ, n) w₃(n/N) / √N over the open support N < n < 2N.
    let mut b = Vec::new();
    for n in cfg.n + 1..2 * cfg.n {
        let w = w3(n as f64 / nn);
        if w != 0.0 {
            b.push((n, coeff(n)? * (w / nn.sqrt())));
        }
    }
    let ks: Vec<i64> = (cfg.k + 1..=2 * cfg.k).flat_map(|k| [k as i64, -(k as i64)]).collect();
    let (rk, kk) = (cfg.r as f64, cfg.k as f64);
    let pieces = u_pieces(cfg);
    let mut total = 0.0;
    for r in cfg.r + 1..=2 * cfg.r {
        let freq = 1.0 / (r as f64 * cfg.t);
        let inner = match order {
            IrkOrder::ROuter => {
                let mut acc = 0.0;
                for &k in &ks {
                    let a: Vec<(f64, Complex64)> =
                        b.iter().map(|&(n, bn)| (n as f64, bn * kloosterman(k, n as i64, r).re)).collect();
                    let f = |u: f64| {
                        let s: Complex64 = a.iter().map(|&(n, an)| an * e(u * n * freq)).sum();
                        g_weight(u, rk, kk) * s.norm_sqr()
                    };
                    for &(lo, hi) in &pieces {
                        acc += quad::converged(f, lo, hi, QUAD_REL);
                    }
                }
                acc
            }
            IrkOrder::NOuter => {
                // S(k, n; r) depends on n mod r only.
                let s: Vec<Vec<f64>> =
                    ks.iter().map(|&k| (0..r).map(|n| kloosterman(k, n as i64, r).re).collect()).collect();
                let c: Vec<Vec<f64>> = (0..r as usize)
                    .map(|x| (0..r as usize).map(|y| s.iter().map(|row| row[x] * row[y]).sum()).collect())
                    .collect();
                // ĝ(h) = ∫ g(u) e(uh/(rT)) du is real since g is even.
                let span = 2 * cfg.n as usize;
                let ghat: Vec<f64> = (0..span)
                    .map(|h| {
                        let f = |u: f64| g_weight(u, rk, kk) * (2.0 * std::f64::consts::PI * u * h as f64 * freq).cos();
                        pieces.iter().map(|&(lo, hi)| quad::converged(f, lo, hi, QUAD_REL)).sum()
                    })
                    .collect();
                let mut acc = Complex64::new(0.0, 0.0);
                for &(n1, b1) in &b {
                    for &(n2, b2) in &b {
                        let cr = c[(n1 % r) as usize][(n2 % r) as usize];
                        acc += b1 * b2.conj() * (cr * ghat[n1.abs_diff(n2) as usize]);
                    }
                }
                acc.re
            }
        };
        total += inner / (r * r) as f64;
    }
    Ok(cfg.t * total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub t: f64,
    pub n: u64,
    pub r: u64,
    pub k: u64,
    pub value: f64,
}

/// I values against T and the least-squares exponent of ln I on ln T.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingTable {
    pub ell: u64,
    pub rows: Vec<ScalingRow>,
    pub exponent: Option<f64>,
}

impl ScalingTable {
    /// Columns: T, I, exponent (the fitted exponent repeated on every row).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["T", "I", "exponent"]).map_err(io)?;
        let exp = self.exponent.map(|x| x.to_string()).unwrap_or_default();
        for row in &self.rows {
            w.write_record([row.t.to_string(), row.value.to_string(), exp.clone()]).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))
    }
}

/// Parameters for a given T: N = ⌊T^{3/2}⌉, R = ⌊min{T, N/T}⌋, K = R.
pub fn scaling_config(t: f64, ell: u64) -> Result<IRKConfig> {
    let n = t.powf(1.5).round() as u64;
    let r = (t.min(n as f64 / t)).floor().max(1.0) as u64;
    IRKConfig::new(t, n, r, r, ell)
}

pub fn scaling_experiment(t_list: &[f64], source: &CoefficientSource, ell: u64) -> Result<ScalingTable> {
    let table = CoefficientTable::new(source.clone());
    let mut rows = Vec::new();
    for &t in t_list {
        let cfg = scaling_config(t, ell)?;
        let value = irk_evaluate(&cfg, &table)?;
        rows.push(ScalingRow { t, n: cfg.n, r: cfg.r, k: cfg.k, value });
    }
    Ok(ScalingTable { ell, exponent: fit_exponent(&rows), rows })
}

/// Slope of ln I against ln T; None with fewer than two usable rows.
fn fit_exponent(rows: &[ScalingRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.value > 0.0).map(|r| (r.t.ln(), r.value.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_weight_examples() {
        assert_eq!(g_weight(0.5, 10.0, 1.0), 2.0);
        assert_eq!(g_weight(-0.7, 3.0, 1.0), g_weight(0.7, 3.0, 1.0));
        assert_eq!(g_weight(0.0, 3.0, 2.0), 1.5);
    }

    #[test]
    fn crossover_matches_bisection() {
        let c = 10.0;
        let diff = |u: f64| 1.0 / u - c / (1.0 + u * u);
        let (mut lo, mut hi) = (0.01, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if diff(mid).signum() == diff(lo).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = g_crossovers(c, 1.0);
        assert!((x[0] - lo).abs() < 1e-12);
        assert!(g_crossovers(1.5, 1.0).is_empty());
    }

    #[test]
    fn g_integral_closed_form() {
        for (l, r, k) in [(1.4, 10.0, 1.0), (1.4, 1.0, 2.0), (5.0, 4.0, 2.0), (20.0, 50.0, 1.0)] {
            let mut cuts = vec![0.0, l];
            cuts.extend(g_crossovers(r, k).into_iter().filter(|&u| u < l));
            cuts.sort_by(f64::total_cmp);
            let num: f64 = cuts
                .windows(2)
                .map(|w| 2.0 * quad::converged(|u| g_weight(u, r, k), w[0], w[1], 1e-14))
                .sum();
            let exact = g_integral(l, r, k);
            assert!((num - exact).abs() < 1e-12 * exact, "{l} {r} {k}: {num} vs {exact}");
            assert!(exact <= g_integral_bound(l, r, k));
        }
    }

    #[test]
    fn partition_exact_at_powers_of_two() {
        let grid: Vec<f64> = (0..20).map(|k| 2f64.powi(k)).collect();
        assert!(dyadic_partition_check(&grid).unwrap() <= 1e-12);
        assert!(dyadic_partition_check(&[0.5]).is_err());
        let w = DyadicWindow;
        assert_eq!(w.eval(0.5), 0.0);
        assert_eq!(w.eval(2.0), 0.0);
        assert!(w.eval(1.0) > 0.0);
    }

    #[test]
    fn zero_table_gives_zero() {
        let cfg = IRKConfig::new(8.0, 16, 2, 2, 1).unwrap();
        for order in [IrkOrder::ROuter, IrkOrder::NOuter] {
            assert_eq!(irk_evaluate_fn(&cfg, |_| Ok(Complex64::new(0.0, 0.0)), order).unwrap(), 0.0);
        }
    }

    #[test]
    fn single_spike_closed_form() {
        let cfg = IRKConfig::new(8.0, 16, 2, 2, 1).unwrap();
        let n0 = 23u64;
        let spike = |n: u64| Ok(Complex64::new(if n == n0 { 1.0 } else { 0.0 }, 0.0));
        let gi = g_integral(cfg.u_limit(), 2.0, 2.0);
        let w = w3(n0 as f64 / 16.0);
        let mut want = 0.0;
        for r in 3..=4u64 {
            for k in [3i64, 4, -3, -4] {
                want += kloosterman(k, n0 as i64, r).norm_sqr() / (r * r) as f64;
            }
        }
        want *= cfg.t * w * w / 16.0 * gi;
        for order in [IrkOrder::ROuter, IrkOrder::NOuter] {
            let got = irk_evaluate_fn(&cfg, spike, order).unwrap();
            assert!((got - want).abs() < 1e-10 * want, "{order:?}: {got} vs {want}");
        }
    }

    #[test]
    fn desk_scale_enforced() {
        let cfg = IRKConfig::new(8.0, 4096, 2, 2, 1).unwrap();
        let t = CoefficientTable::new(CoefficientSource::divisor([0.0; 4]).unwrap());
        assert!(matches!(irk_evaluate(&cfg, &t), Err(Error::DeskScale(_))));
    }

    #[test]
    fn ranges_recorded() {
        let cfg = IRKConfig::new(16.0, 64, 4, 2, 1).unwrap();
        assert!(cfg.ranges().all());
        let bad = IRKConfig::new(16.0, 64, 8, 2, 1).unwrap();
        assert!(!bad.ranges().r_below_x);
    }
}
