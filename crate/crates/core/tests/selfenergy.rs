use lifshitz_core::selfenergy::*;
use lifshitz_core::torus::*;

const WATSON_I1: f64 = 0.505_462_019_717_326;

fn watson_closed_form() -> f64 {
    use std::f64::consts::PI;
    let g = libm::tgamma(1.0 / 24.0) * libm::tgamma(5.0 / 24.0) * libm::tgamma(7.0 / 24.0) * libm::tgamma(11.0 / 24.0);
    6f64.sqrt() / (32.0 * PI.powi(3)) * g / 3.0
}

#[test]
fn i1_at_zero_matches_closed_form() {
    let spec = QuadratureSpec::default();
    let r = torus_integral_i1(0.0f64, &spec).unwrap();
    let w = watson_closed_form();
    assert!((w - WATSON_I1).abs() < 1e-13, "{w}");
    assert!((r.value - w).abs() < 1e-11, "{} vs {w}", r.value);
    assert!(r.error_estimate < 1e-11);
}

#[test]
fn i1_at_zero_from_full_tensor_rule() {
    let v = tensor_midpoint_3d_richardson(16, 4);
    assert!((v - WATSON_I1).abs() < 1e-5, "{v}");
}

#[test]
fn large_energy_limits() {
    let spec = QuadratureSpec::default();
    let a = torus_integral_i1(100.0f64, &spec).unwrap().value;
    assert!(a > 1.0 / 106.0 && a < 1.0 / 100.0);
    let b = torus_integral_i2(100.0f64, &spec).unwrap().value;
    assert!((b * 103.0f64.powi(2) - 1.0).abs() < 0.1);
}

#[test]
fn monotone_in_estar() {
    let mut prev1 = f64::INFINITY;
    let mut prev2 = f64::INFINITY;
    for k in 0..30 {
        let e = 1e-4 * 1.5f64.powi(k);
        let a = i1(e).unwrap();
        let b = i2(e).unwrap();
        assert!(a < prev1 && b < prev2);
        prev1 = a;
        prev2 = b;
    }
    assert!(i1(0.1f64).unwrap() > i1(0.2f64).unwrap());
}

#[test]
fn i2_is_minus_derivative_of_i1() {
    for &(e, h) in &[(0.01, 1e-5), (0.3, 1e-4), (2.0, 1e-3)] {
        let fd = (i1(e - h).unwrap() - i1(e + h).unwrap()) / (2.0 * h);
        let v: f64 = i2(e).unwrap();
        assert!((v - fd).abs() < 1e-4 * v, "E*={e}: {v} vs {fd}");
    }
}

#[test]
fn i2_scales_like_inverse_square_root() {
    let pts: Vec<f64> = (0..=10).map(|k| 1e-4 * 2f64.powi(k)).filter(|&e| e <= 0.1).collect();
    let (c, big_c) = fit_i2_constants(&pts, &QuadratureSpec::default()).unwrap();
    assert!(c > 0.0 && big_c < 1.0 && big_c / c < 3.0, "{c} {big_c}");
}

#[test]
fn energy_has_single_minimum() {
    let spec = QuadratureSpec::default();
    for &l in &[0.05f64, 0.1, 0.2, 0.5] {
        let mut signs = Vec::new();
        for k in 0..80 {
            let e = l.powi(4) * 1e-3 * 1.25f64.powi(k);
            signs.push(energy_derivative(e, l, &spec).unwrap() > 0.0);
        }
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(changes, 1, "lambda={l}");
        assert!(!signs[0] && *signs.last().unwrap());
    }
}

#[test]
fn energy_tends_to_lambda_sq_i1_zero() {
    let spec = QuadratureSpec::default();
    let l = 0.2f64;
    let e0 = l * l * i1_at_zero::<f64>(&spec).unwrap();
    let e = energy_of_estar(1e-8, l, &spec).unwrap();
    assert!((e - e0).abs() < 1e-6);
}

#[test]
fn solved_contexts_are_consistent() {
    let spec = QuadratureSpec::default();
    for &l in &[0.05f64, 0.1, 0.2] {
        let lo = threshold_e_eps(l, 1.0, &spec).unwrap();
        let cap = l * l * i1_at_zero::<f64>(&spec).unwrap();
        for k in 0..20 {
            let e = lo + (l - l.powi(3)) * k as f64 / 19.0;
            let ctx = solve_self_energy(e, l, 1.0, &spec).unwrap();
            assert_eq!(ctx.sigma, ctx.energy - ctx.estar);
            assert!(ctx.fixed_point_residual(&spec).unwrap() < 1e-10 * ctx.sigma.max(1.0));
            let back = energy_of_estar(ctx.estar, l, &spec).unwrap();
            assert!((back - e).abs() < 1e-10);
            assert!(ctx.sigma > 0.0 && ctx.sigma <= cap);
        }
    }
}

#[test]
fn threshold_contexts_have_estar_of_order_lambda_cubed() {
    let spec = QuadratureSpec::default();
    let mut c = f64::INFINITY;
    for &l in &[0.05f64, 0.1, 0.2] {
        let t = threshold_e_eps(l, 1.0, &spec).unwrap();
        let ctx = solve_self_energy(t, l, 1.0, &spec).unwrap();
        c = c.min(ctx.estar / l.powi(3));
    }
    assert!(c > 0.1, "fitted c = {c}");
}
