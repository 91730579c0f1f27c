use lifshitz_core::green::fft::{periodized_cube, FFT_TOLERANCE};
use lifshitz_core::green::*;
use lifshitz_core::selfenergy::solve_self_energy;
use lifshitz_core::torus::QuadratureSpec;

#[test]
fn bessel_and_fft_agree_in_ball_of_radius_20() {
    for &e in &[0.05f64, 0.5] {
        let a = green_table_bessel(20, e).unwrap();
        let b = green_free_fft(256, e, 20, FFT_TOLERANCE).unwrap();
        let mut worst = 0.0f64;
        for (k, v) in a.canonical_entries() {
            let x = LatticeVector::new(k[0] as i64, k[1] as i64, k[2] as i64);
            worst = worst.max((v - b.value(x)).abs());
        }
        assert!(worst < 1e-8, "E*={e}: {worst}");
    }
}

#[test]
fn origin_value_is_the_self_energy() {
    let spec = QuadratureSpec::default();
    for &(l, e) in &[(0.1f64, 0.02), (0.3, 0.1), (0.5, 0.4)] {
        let ctx = solve_self_energy(e, l, 1.0, &spec).unwrap();
        let g = green_free(LatticeVector::new(0, 0, 0), ctx.estar).unwrap();
        assert!((l * l * g / ctx.sigma - 1.0).abs() < 1e-8);
    }
}

#[test]
fn positive_in_ball_of_radius_20() {
    for &e in &[1e-3f64, 1e-2, 1e-1] {
        let t = green_table_bessel(20, e).unwrap();
        assert!(t.canonical_entries().all(|(_, v)| v > 0.0));
    }
}

#[test]
fn discrete_resolvent_identity() {
    let e = 0.2f64;
    let t = green_table_bessel(8, e).unwrap();
    let g = |v: [i64; 3]| t.value(LatticeVector(v));
    for x in [[0i64, 0, 0], [1, 0, 0], [2, 1, -1], [3, 3, 0], [0, -4, 2]] {
        let mut s = (3.0 + e) * g(x);
        for d in 0..3 {
            for sgn in [-1i64, 1] {
                let mut y = x;
                y[d] += sgn;
                s -= 0.5 * g(y);
            }
        }
        let expect = if x == [0, 0, 0] { 1.0 } else { 0.0 };
        assert!((s - expect).abs() < 1e-8, "{x:?}: {s}");
    }
}

#[test]
fn decreasing_in_estar() {
    for x in [LatticeVector::new(0, 0, 0), LatticeVector::new(4, 1, 0)] {
        let mut prev = f64::INFINITY;
        for &e in &[0.01, 0.05, 0.2, 1.0, 5.0] {
            let v = green_free(x, e).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }
}

#[test]
fn asymptotic_form_along_axis() {
    let e = 0.01;
    let d: Vec<u32> = (20..=60).step_by(4).collect();
    let rep = check_asymptotics(&d, e).unwrap();
    for &(r, _, ratio) in &rep.points {
        assert!((0.8..=1.2).contains(&ratio), "r={r}: {ratio}");
        assert!((ratio - 1.0).abs() <= rep.c1 * e.sqrt() + rep.c2 / r + 1e-12);
    }
    let k = rep.continuum_rate;
    assert!((rep.fitted_rate / k - 1.0).abs() < 0.05, "{}", rep.fitted_rate);
    assert!(rep.k_bound <= 2.0);
}

#[test]
fn k_bound_over_table() {
    let t = green_table_bessel(30, 0.01f64).unwrap();
    assert!(t.fitted_k() <= 2.0);
    let d: Vec<u32> = (31..=60).collect();
    let rep = check_asymptotics(&d, 0.01).unwrap();
    assert!(rep.k_bound <= 2.0);
}

#[test]
fn fft_table_symmetry() {
    let cube = periodized_cube(128, 0.3f64, 12).unwrap();
    assert!(cube.symmetry_defect() < 1e-12);
}

#[test]
fn csv_round_trip() {
    let t = green_table_bessel(4, 0.3f64).unwrap();
    let mut buf = Vec::new();
    t.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.lines().nth(1).unwrap() == "x1,x2,x3,value");
    let back = GreenTable::<f64>::read_csv(std::io::Cursor::new(buf)).unwrap();
    assert_eq!(back.method, GreenMethod::BesselIntegral);
    for (k, v) in t.canonical_entries() {
        let x = LatticeVector::new(k[0] as i64, k[1] as i64, k[2] as i64);
        assert!((back.value(x) - v).abs() <= 1e-16 * v);
    }
}
