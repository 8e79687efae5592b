use stark_delta::approx::{y_integral, YArgs, YMethod};
use stark_delta::identities::{check_airy_erf_identity, check_airy_fourier, check_z6_identity};
use stark_delta::Complex64 as C64;
use std::f64::consts::PI;

#[test]
fn z6_identity_on_grid() {
    for xi in [C64::new(0.1, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(0.0, 5.0), C64::new(1.0, 3.0)] {
        let r = check_z6_identity(xi).unwrap();
        assert!(r.is_clean(), "{xi}: {:?}", r.flags);
        assert!(r.value.rel_err <= 1e-9, "{xi}: {:?}", r.value);
        assert_eq!(r.value.abs_err, (r.value.lhs - r.value.rhs).norm());
    }
    let r = check_z6_identity(C64::new(2.0, 0.0)).unwrap().value;
    assert!(r.abs_err <= 1e-10);
}

#[test]
fn z6_identity_at_zero_is_one() {
    let r = check_z6_identity(C64::new(0.0, 0.0)).unwrap().value;
    assert!((r.lhs - 1.0).norm() < 1e-15 && (r.rhs - 1.0).norm() < 1e-15);
}

#[test]
fn z6_rhs_agrees_with_y_integral() {
    for xi in [C64::new(0.1, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(0.0, 5.0), C64::new(1.0, 3.0)] {
        let rhs = check_z6_identity(xi).unwrap().value.rhs;
        let y = y_integral(YArgs { xi1: xi, xi2: C64::new(0.0, 0.0) }, YMethod::Series).unwrap().value;
        assert!((rhs - y).norm() <= 1e-10, "{xi}: {rhs} {y}");
    }
}

#[test]
fn z6_rejects_large_argument() {
    assert!(check_z6_identity(C64::new(0.0, 51.0)).is_err());
}

#[test]
fn airy_fourier_identity() {
    for eta in [0.0, 1.0, -1.0, 2.0] {
        let r = check_airy_fourier(eta).unwrap();
        assert!(r.is_clean(), "{eta}: {:?}", r.flags);
        assert!(r.value.abs_err <= 1e-6, "{eta}: {:?}", r.value);
    }
    assert!((check_airy_fourier(0.0).unwrap().value.lhs - 1.0).norm() <= 1e-6);
    assert!((check_airy_fourier(1.0).unwrap().value.rhs - C64::from_polar(1.0, -1.0 / 3.0)).norm() < 1e-15);
}

#[test]
fn airy_fourier_conjugation_symmetry() {
    let p = check_airy_fourier(1.0).unwrap().value.lhs;
    let m = check_airy_fourier(-1.0).unwrap().value.lhs;
    assert!((p - m.conj()).norm() <= 1e-12, "{p} {m}");
    assert!(check_airy_fourier(5.5).is_err());
}

#[test]
fn airy_erf_identity_real_chi() {
    let r = check_airy_erf_identity(C64::new(0.3, 0.0), 0.02).unwrap();
    assert!(r.is_clean(), "{:?}", r.flags);
    assert!(r.value.rel_err <= 1e-3, "{:?}", r.value);
    let reg = r.value.regularization.unwrap();
    assert_eq!(reg.eps, vec![0.02, 0.01, 0.005]);
}

#[test]
fn airy_erf_identity_complex_chi() {
    let r = check_airy_erf_identity(C64::from_polar(0.3, PI / 12.0), 0.02).unwrap();
    assert!(!r.is_clean() || r.value.rel_err <= 1e-2, "{:?}", r);
}

#[test]
fn airy_erf_identity_at_zero() {
    let r = check_airy_erf_identity(C64::new(0.0, 0.0), 0.02).unwrap().value;
    assert_eq!(r.lhs, C64::new(0.0, 0.0));
    assert_eq!(r.rhs, C64::new(0.0, 0.0));
    assert!(check_airy_erf_identity(C64::new(0.3, 0.0), 0.0).is_err());
}

