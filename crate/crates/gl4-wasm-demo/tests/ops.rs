use gl4_wasm_demo::{bessel_impl, coefficient_impl, kloosterman_impl};

#[test]
fn kloosterman_small_cases() {
    // x ∈ {1,2,3,4}, x̄ = {1,3,2,4}: phases (x + x̄)/5.
    let want: f64 = [2.0, 5.0, 5.0, 8.0].iter().map(|m: &f64| (2.0 * std::f64::consts::PI * m / 5.0).cos()).sum();
    let [re, im] = kloosterman_impl(1, 1, 5).unwrap();
    assert!((re - want).abs() < 1e-12 && im.abs() < 1e-12);
    assert!(kloosterman_impl(1, 1, 0).is_err());
}

#[test]
fn divisor_coefficient_is_d4() {
    // d₄(12) = d₄(4)·d₄(3) = 10·4.
    let [re, im] = coefficient_impl(1, 1, 12, "divisor", 0.0).unwrap();
    assert!((re - 40.0).abs() < 1e-9 && im.abs() < 1e-12);
    assert!(coefficient_impl(1, 1, 12, "nope", 0.0).is_err());
    assert!(coefficient_impl(0, 1, 12, "divisor", 0.0).is_err());
}

#[test]
fn bessel_routes_agree() {
    for (k, x) in [(0, 1.5), (1, 7.0), (3, 40.0)] {
        let [a, b] = bessel_impl(k, x).unwrap();
        assert!((a - b).abs() < 1e-10, "{k} {x}: {a} {b}");
    }
    assert!(bessel_impl(0, -1.0).is_err());
}
