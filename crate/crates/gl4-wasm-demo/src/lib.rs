//! Browser bindings for three gl4kit operations. The `*_impl` functions carry
//! the logic and are what the native tests exercise.

use gl4kit::coeffs::{CoefficientSource, CoefficientTable};
use gl4kit::expsums::kloosterman;
use gl4kit::special::{bessel_j as bessel, reconstruct_j};
use wasm_bindgen::prelude::*;

/// Largest modulus accepted from the page; S(k, n; r) costs O(r).
pub const MAX_MODULUS: u64 = 1_000_000;
/// Largest coefficient index accepted from the page.
pub const MAX_INDEX: u64 = 1 << 40;

pub fn kloosterman_impl(k: i64, n: i64, r: u64) -> Result<[f64; 2], String> {
    if r == 0 || r > MAX_MODULUS {
        return Err(format!("modulus must be in 1..={MAX_MODULUS}"));
    }
    let s = kloosterman(k, n, r);
    Ok([s.re, s.im])
}

pub fn coefficient_impl(m1: u64, m2: u64, m3: u64, source: &str, param: f64) -> Result<[f64; 2], String> {
    if [m1, m2, m3].iter().any(|&m| m == 0 || m > MAX_INDEX) {
        return Err(format!("indices must be in 1..={MAX_INDEX}"));
    }
    let src = match source {
        // A symmetric shift (t, −t, 0, 0); t = 0 gives d₄.
        "divisor" => CoefficientSource::divisor([param, -param, 0.0, 0.0]).map_err(|e| e.to_string())?,
        "synthetic" => CoefficientSource::synthetic(param as u64),
        other => return Err(format!("unknown source {other}")),
    };
    let a = CoefficientTable::new(src).coefficient(m1, m2, m3).map_err(|e| e.to_string())?;
    Ok([a.re, a.im])
}

/// J_k(x) from the series and from the W_k reconstruction.
pub fn bessel_impl(k: u32, x: f64) -> Result<[f64; 2], String> {
    if !(x > 0.0 && x.is_finite()) || k > 64 {
        return Err("need x > 0 and k <= 64".into());
    }
    let rec = reconstruct_j(k, x / (2.0 * std::f64::consts::PI)).map_err(|e| e.to_string())?;
    Ok([bessel(k, x), rec])
}

/// S(k, n; r) as [re, im].
#[wasm_bindgen]
pub fn kloosterman_sum(k: i64, n: i64, r: u64) -> Result<Vec<f64>, JsError> {
    kloosterman_impl(k, n, r).map(|v| v.to_vec()).map_err(|e| JsError::new(&e))
}

/// A(m1, m2, m3) as [re, im] for `source` "divisor" (param = shift t) or "synthetic" (param = seed).
#[wasm_bindgen]
pub fn gl4_coefficient(m1: u64, m2: u64, m3: u64, source: &str, param: f64) -> Result<Vec<f64>, JsError> {
    coefficient_impl(m1, m2, m3, source, param).map(|v| v.to_vec()).map_err(|e| JsError::new(&e))
}

/// [series J_k(x), reconstructed J_k(x)].
#[wasm_bindgen]
pub fn bessel_j(k: u32, x: f64) -> Result<Vec<f64>, JsError> {
    bessel_impl(k, x).map(|v| v.to_vec()).map_err(|e| JsError::new(&e))
}
