use std::f64::consts::PI;

use gl4kit::coeffs::{CoefficientSource, CoefficientTable};
use gl4kit::psi::{Shape, TestFunction};
use gl4kit::voronoi::{
    hurwitz_zeta, polar_correction, voronoi_lhs, voronoi_verify_with, zeta, DualSide, Verdict, VerifyOptions,
};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn divisor() -> CoefficientSource {
    CoefficientSource::divisor([0.0; 4]).unwrap()
}

fn gevrey(lo: f64, hi: f64) -> TestFunction {
    TestFunction::with_support(Shape::Gevrey { k: 30.0 }, lo, hi).unwrap()
}

fn d4_brute(n: u64) -> u64 {
    let mut count = 0;
    for a in 1..=n {
        for b in 1..=n / a {
            for c in 1..=n / (a * b) {
                if n % (a * b * c) == 0 {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Σ_k f(x_k)w_k by composite Simpson on [lo, hi] with many panels.
fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut acc = f(lo) + f(hi);
    for i in 1..n {
        acc += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn zeta_known_values() {
    assert!((zeta(c(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-14);
    assert!((zeta(c(4.0, 0.0)).unwrap().re - PI.powi(4) / 90.0).abs() < 1e-14);
    assert!((zeta(c(0.0, 0.0)).unwrap().re + 0.5).abs() < 1e-14);
    // Left of the critical strip the Euler-Maclaurin head cancels against the correction.
    assert!((zeta(c(-1.0, 0.0)).unwrap().re + 1.0 / 12.0).abs() < 1e-11);
    // First zero on the critical line.
    assert!(zeta(c(0.5, 14.134725141734693)).unwrap().norm() < 1e-12);
}

#[test]
fn hurwitz_half_is_scaled_zeta() {
    for (s, tol) in [(c(2.5, 0.0), 1e-13), (c(0.3, 4.0), 1e-13), (c(1.2, -7.0), 1e-13), (c(-1.5, 1.0), 1e-9)] {
        let want = ((s * 2f64.ln()).exp() - 1.0) * zeta(s).unwrap();
        let got = hurwitz_zeta(s, 0.5).unwrap();
        assert!((got - want).norm() < tol * want.norm(), "{s}: {got} vs {want}");
    }
    assert!(hurwitz_zeta(c(1.0, 0.0), 0.5).is_err());
    assert!(hurwitz_zeta(c(2.0, 0.0), 1.5).is_err());
}

#[test]
fn lhs_matches_brute_force_divisor_sums() {
    let psi = gevrey(8.0, 16.0);
    let table = CoefficientTable::new(divisor());
    for (a, r) in [(0i64, 1u64), (1, 2), (1, 3), (2, 5)] {
        let got = voronoi_lhs(a, r, &psi, &table, [1, 1]).unwrap();
        let want: Complex64 = (9..16u64)
            .map(|n| {
                let ph = 2.0 * PI * ((a * n as i64).rem_euclid(r as i64)) as f64 / r as f64;
                Complex64::from_polar(d4_brute(n) as f64 * psi.eval(n as f64), ph)
            })
            .sum();
        assert!((got - want).norm() < 1e-12 * want.norm(), "r={r}: {got} vs {want}");
    }
}

#[test]
fn polar_term_matches_stieltjes_expansion() {
    // ζ(1+u) = 1/u + γ₀ − γ₁u + γ₂u²/2 + …, so ζ(1+u)⁴ = Σ_j c_j u^{j−4} with
    // c₀..c₃ below, and the residue of ψ̃(1+u)ζ(1+u)⁴ is Σ_{j+k=3} c_j M_k/k!
    // with M_k = ∫ψ(x)(ln x)^k dx.
    let (g0, g1, g2): (f64, f64, f64) = (0.5772156649015329, 0.0728158454836767, -0.0096903631928723 / 2.0);
    let cs = [1.0, 4.0 * g0, 6.0 * g0 * g0 + 4.0 * g1, 4.0 * g0.powi(3) + 12.0 * g0 * g1 + 4.0 * g2];
    for psi in [gevrey(8.0, 16.0), TestFunction::canonical(8.0, 1.0, 2.0).unwrap()] {
        let moments: Vec<f64> =
            (0..4).map(|k| simpson(|x| psi.eval(x) * x.ln().powi(k), 8.0, 16.0, 20_000)).collect();
        let want = (0..4).map(|j| cs[j] * moments[3 - j] / [1.0, 1.0, 2.0, 6.0][3 - j]).sum::<f64>();
        let got = polar_correction(0, 1, &psi, [0.0; 4]).unwrap();
        assert!((got.re - want).abs() < 1e-9 * want.abs() && got.im.abs() < 1e-9 * want.abs(), "{got} vs {want}");
    }
}

#[test]
fn r_one_identity_is_scale_covariant() {
    for (lo, hi) in [(4.0, 8.0), (8.0, 16.0), (16.0, 32.0)] {
        let psi = gevrey(lo, hi);
        let (rep, verdict) =
            voronoi_verify_with(0, 1, &psi, &divisor(), [1, 1], 1e-8, VerifyOptions { m_cap: 1 << 24 }).unwrap();
        assert_eq!(verdict, Verdict::Pass, "[{lo},{hi}]: {rep:?}");
        assert!(rep.rel_error < 1e-8);
    }
}

#[test]
fn r_two_identity_passes_with_certified_tail() {
    let psi = gevrey(8.0, 16.0);
    let (rep, verdict) =
        voronoi_verify_with(1, 2, &psi, &divisor(), [1, 1], 1e-6, VerifyOptions { m_cap: 1 << 25 }).unwrap();
    assert_eq!(verdict, Verdict::Pass, "{rep:?}");
}

#[test]
fn dual_blocks_are_divisor_pairs() {
    // For q = (1,1) the blocks run over d₁ | r, d₂ | r/d₁.
    let psi = gevrey(8.0, 16.0);
    let table = CoefficientTable::new(divisor());
    for r in [1u64, 2, 6, 12] {
        let dual = DualSide::new(1, r, &psi, &table, [1, 1]).unwrap();
        let mut got = dual.divisor_pairs();
        got.sort();
        let mut want = Vec::new();
        for d1 in (1..=r).filter(|d| r % d == 0) {
            for d2 in (1..=r / d1).filter(|d| (r / d1) % d == 0) {
                want.push([d1, d2]);
            }
        }
        want.sort();
        assert_eq!(got, want, "r={r}");
    }
}

#[test]
fn tail_bound_decreases_and_partial_sums_stabilize() {
    let psi = gevrey(8.0, 16.0);
    let table = CoefficientTable::new(divisor());
    let dual = DualSide::new(0, 1, &psi, &table, [1, 1]).unwrap();
    let cert = dual.tail_certificate(&psi).unwrap();
    let ms = [1u64 << 14, 1 << 16, 1 << 18, 1 << 20];
    let bounds: Vec<f64> = ms.iter().map(|&m| cert.bound(m)).collect();
    assert!(bounds.windows(2).all(|w| w[1] < w[0]), "{bounds:?}");
    let sums = dual.partial_sums(&ms).unwrap();
    // Successive partial sums differ by no more than the earlier tail bound.
    for i in 0..ms.len() - 1 {
        assert!((sums[i + 1] - sums[i]).norm() <= bounds[i], "M={}: {} > {}", ms[i], (sums[i + 1] - sums[i]).norm(), bounds[i]);
    }
}

#[test]
fn synthetic_source_is_diagnostic_only() {
    let psi = gevrey(8.0, 16.0);
    let (_, verdict) = voronoi_verify_with(
        0,
        1,
        &psi,
        &CoefficientSource::synthetic(5),
        [1, 1],
        1e-4,
        VerifyOptions { m_cap: 1 << 12 },
    )
    .unwrap();
    assert_eq!(verdict, Verdict::Diagnostic);
}

#[test]
fn rejects_non_coprime_twist() {
    let psi = gevrey(8.0, 16.0);
    assert!(voronoi_verify_with(2, 4, &psi, &divisor(), [1, 1], 1e-4, VerifyOptions::default()).is_err());
}
