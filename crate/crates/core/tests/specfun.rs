use num_complex::Complex64 as C64;
use proptest::prelude::*;
use stark_delta::specfun::{airy_ai, airy_ai_pair, cerf, cerfc, exp_times_erfc, hyp1f1_one, moshinsky};
use stark_delta::Error;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// erfc by the Maclaurin series of erf (|z| ≤ 3 or |Re z| < 2) or the Laplace
/// continued fraction otherwise, reflected for Re z < 0.
fn erfc_oracle(z: C64) -> C64 {
    if z.norm() <= 3.0 || z.re.abs() < 2.0 {
        let mut term = z;
        let mut sum = z;
        let z2 = z * z;
        for n in 1..200 {
            term *= -z2 / n as f64;
            let t = term / (2 * n + 1) as f64;
            sum += t;
            if t.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        return 1.0 - sum * (2.0 / std::f64::consts::PI.sqrt());
    }
    if z.re < 0.0 {
        return 2.0 - erfc_oracle(-z);
    }
    // erfc(z) = e^{-z²}/√π · 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + …)))), evaluated bottom-up.
    let mut f = z;
    for k in (1..400).rev() {
        f = z + (k as f64 / 2.0) / f;
    }
    (-z * z).exp() / (std::f64::consts::PI.sqrt() * f)
}

// Reference values computed with 40-digit arithmetic.
const ERFC_REF: &[((f64, f64), (f64, f64))] = &[
    ((2.0, 0.0), (0.0046777349810472658379, 0.0)),
    ((1.0, 1.0), (-0.31615128169794764488, -0.19045346923783468628)),
    ((-1.0, 1.0), (2.3161512816979476449, -0.19045346923783468628)),
    ((0.5, -3.0), (-403.8126834851066862, -1172.6091303384732848)),
    ((5.0, 5.0), (0.069620396256904884146, -0.038936190895121378954)),
    ((-4.0, 2.0), (2.0000005652170027935, 5.131005296081876296e-7)),
    ((10.0, 0.5), (-2.1725791006372490245e-45, 1.5664741417015799232e-45)),
    ((0.1, 0.2), (0.88297851369609569855, -0.22638445718145091844)),
    ((3.0, -3.0), (0.13217350242454885785, -0.012152181790312256514)),
    ((25.0, 1.0), (2.1973160562850434939e-273, 5.042235635542422656e-274)),
    ((-2.0, -0.3), (1.9987630892171224705, 0.004930619809302623855)),
    ((6.0, 0.0), (2.1519736712498913117e-17, 0.0)),
];

#[test]
fn cerfc_simple_values() {
    assert_eq!(cerfc(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    let z = c(1.0, 1.0);
    let s = cerfc(z).unwrap() + cerfc(-z).unwrap();
    assert!((s - 2.0).norm() < 1e-14);
    let v = cerfc(c(2.0, 0.0)).unwrap();
    assert!((v.re - 0.004677734981047266).abs() < 1e-12 * 0.0047);
    assert!((v - erfc_oracle(c(2.0, 0.0))).norm() < 1e-14);
}

#[test]
fn cerfc_matches_reference_table() {
    for &((x, y), (re, im)) in ERFC_REF {
        let want = c(re, im);
        let got = cerfc(c(x, y)).unwrap();
        assert!((got - want).norm() <= 1e-12 * want.norm(), "erfc({x}+{y}i) = {got}, want {want}");
    }
}

#[test]
fn cerfc_matches_series_and_continued_fraction() {
    for x in [-4.5, -2.0, -0.7, 0.0, 0.3, 1.5, 2.9, 3.5, 6.0, 12.0] {
        for y in [-4.0, -1.0, 0.0, 0.5, 2.5, 4.0] {
            let z = c(x, y);
            let got = cerfc(z).unwrap();
            let want = erfc_oracle(z);
            // The series loses digits to cancellation once its largest term,
            // about e^{|z|²}, exceeds the result.
            let series = z.norm() <= 3.0 || z.re.abs() < 2.0;
            let tol = if series { 1e-14 * z.norm_sqr().exp() / want.norm() } else { 0.0 };
            assert!((got - want).norm() <= (1e-12 + tol) * want.norm(), "z = {z}: {got} vs {want}");
        }
    }
}

#[test]
fn cerfc_rejects_non_finite_and_reports_overflow() {
    assert!(matches!(cerfc(c(f64::NAN, 0.0)), Err(Error::Domain(_))));
    assert!(matches!(cerfc(c(1.0, f64::INFINITY)), Err(Error::Domain(_))));
    assert!(matches!(cerfc(c(0.0, 40.0)), Err(Error::Overflow(_))));
    // Deep in the decaying sector the value underflows to zero.
    assert_eq!(cerfc(c(40.0, 0.0)).unwrap(), c(0.0, 0.0));
}

#[test]
fn exp_times_erfc_survives_huge_prefactor() {
    // e^{900}·erfc(30) ≈ 1/(30√π).
    let v = exp_times_erfc(c(900.0, 0.0), c(30.0, 0.0));
    let approx = 1.0 / (30.0 * std::f64::consts::PI.sqrt()) * (1.0 - 1.0 / 1800.0);
    assert!((v.re - approx).abs() < 1e-6 * approx);
}

#[test]
fn cerf_is_one_minus_cerfc() {
    for z in [c(0.2, 0.1), c(-1.0, 2.0), c(3.0, -0.5)] {
        assert!((cerf(z).unwrap() + cerfc(z).unwrap() - 1.0).norm() < 1e-13);
    }
}

proptest! {
    #[test]
    fn cerfc_conjugation_symmetry(x in -6.0f64..6.0, y in -6.0f64..6.0) {
        let z = c(x, y);
        let a = cerfc(z.conj()).unwrap();
        let b = cerfc(z).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-15 * a.norm().max(1.0));
    }

    #[test]
    fn cerfc_reflection(x in -5.0f64..5.0, y in -5.0f64..5.0) {
        let z = c(x, y);
        let e = cerfc(z).unwrap();
        let s = e + cerfc(-z).unwrap();
        // In f64 the sum can only be exact to rounding of the larger addend.
        prop_assert!((s - 2.0).norm() <= 1e-12 * e.norm().max(1.0), "z = {}, sum = {}", z, s);
    }
}

// Ai and Ai' reference values computed with 40-digit arithmetic.
const AIRY_REF: &[(f64, f64, f64)] = &[
    (-28.5, 0.24256293131365944682, 0.15196260335015472292),
    (-20.0, -0.17640612707798468959, 0.8928628567364712384),
    (-15.0, 0.27821749087082892953, 0.27237420430864202083),
    (-10.0, 0.040241238486443190689, 0.9962650441327900559),
    (-7.3, 0.33577037051514727697, -0.18009580448329365985),
    (-5.0, 0.35076100902411431979, 0.32719281855444313679),
    (-2.0, 0.22740742820168557599, 0.61825902074169104141),
    (-0.5, 0.4757280916105395888, -0.20408167033954738614),
    (0.0, 0.35502805388781723926, -0.25881940379280679841),
    (0.5, 0.23169360648083348977, -0.22491053266468389314),
    (1.0, 0.13529241631288141552, -0.15914744129679321279),
    (2.0, 0.034924130423274379135, -0.053090384433653631704),
    (4.0, 0.00095156385120480187362, -0.0019586409502041789001),
    (6.0, 9.9476943602528895702e-6, -0.000024765200397034954754),
    (8.0, 4.6922076160992316256e-8, -1.3414392979067865743e-7),
    (10.0, 1.1047532552898685934e-10, -3.5206336767389236366e-10),
    (11.9, 1.9725778430252003674e-13, -6.8455104418886716893e-13),
    (15.0, 2.164962520737992299e-18, -8.4205679540177727661e-18),
    (20.0, 1.6916728686705403136e-27, -7.5863916257483549605e-27),
];

/// Maclaurin series Ai(x) = c₁f(x) − c₂g(x), usable for |x| ≤ 2.
fn airy_maclaurin(x: f64) -> f64 {
    let c1 = 1.0 / (3f64.powf(2.0 / 3.0) * 1.3541179394264004169);
    let c2 = 1.0 / (3f64.powf(1.0 / 3.0) * 2.6789385347077476337);
    let (mut f, mut g) = (1.0, x);
    let (mut tf, mut tg) = (1.0, x);
    let x3 = x * x * x;
    for k in 1..60 {
        let k3 = 3.0 * k as f64;
        tf *= x3 / ((k3 - 1.0) * k3);
        tg *= x3 / (k3 * (k3 + 1.0));
        f += tf;
        g += tg;
    }
    c1 * f - c2 * g
}

#[test]
fn airy_at_zero() {
    let a = airy_ai(0.0).unwrap();
    assert!((a - 0.3550280539).abs() < 1e-10);
    assert!((a - airy_maclaurin(0.0)).abs() < 1e-15);
}

#[test]
fn airy_matches_maclaurin_oracle_near_origin() {
    for i in -40..=40 {
        let x = i as f64 * 0.05;
        assert!((airy_ai(x).unwrap() - airy_maclaurin(x)).abs() < 1e-13, "x = {x}");
    }
}

#[test]
fn airy_matches_reference_table() {
    for &(s, ai, aip) in AIRY_REF {
        let (a, ap) = airy_ai_pair(s).unwrap();
        assert!((a - ai).abs() <= 1e-12, "Ai({s}) = {a}, want {ai}");
        assert!((ap - aip).abs() <= 1e-11, "Ai'({s}) = {ap}, want {aip}");
    }
}

#[test]
fn airy_ode_residual() {
    let h = 1e-3;
    for s in [-8.0, -1.0, 1.0, 3.0] {
        let f = |x: f64| airy_ai(x).unwrap();
        let d2 = (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h);
        assert!((d2 - s * f(s)).abs() < 1e-6, "s = {s}");
    }
}

#[test]
fn airy_sign_changes_bracket_the_zeros() {
    let mut crossings = vec![];
    let mut prev = airy_ai(0.0).unwrap();
    for i in 1..=10_000 {
        let s = -(i as f64) * 1e-3;
        let v = airy_ai(s).unwrap();
        if v.signum() != prev.signum() {
            crossings.push(s);
        }
        prev = v;
    }
    assert_eq!(crossings.len(), 6);
    for (k, z) in crossings.iter().enumerate() {
        // McMahon-type estimate −[3π(4k−1)/8]^{2/3}.
        let t = 3.0 * std::f64::consts::PI * (4.0 * (k + 1) as f64 - 1.0) / 8.0;
        assert!((z + t.powf(2.0 / 3.0)).abs() < 0.02, "zero {k}: {z}");
    }
}

#[test]
fn airy_rejects_non_finite() {
    assert!(airy_ai(f64::NAN).is_err());
}

// ₁F₁(1; b; z) reference values computed with 40-digit arithmetic.
const HYP_REF: &[(f64, (f64, f64), (f64, f64))] = &[
    (7.0 / 6.0, (1.0, 0.0), (2.4145510711972095237, 0.0)),
    (7.0 / 6.0, (0.0, 5.0), (0.013508102380465817699, -0.67742619275471513515)),
    (7.0 / 6.0, (-3.0, 2.0), (0.036385129644402521892, 0.07638989318552879991)),
    (7.0 / 6.0, (-40.0, 0.0), (0.004257763475512793096, 0.0)),
    (7.0 / 6.0, (0.0, 30.0), (-0.056322840736750448107, -0.51774340554593829978)),
    (7.0 / 6.0, (45.0, 0.0), (17184340681948394467.0, 0.0)),
    (7.0 / 6.0, (-20.0, -20.0), (0.0041574803077666451644, -0.0043480981496156911221)),
    (7.0 / 6.0, (0.0, 50.0), (0.41763847127789423384, -0.23987996229123911033)),
    (1.5, (0.0, 5.0), (-0.19821036248576535714, -0.25061878261829224116)),
    (1.5, (-40.0, 0.0), (0.012662511829861760975, 0.0)),
    (1.5, (0.0, 30.0), (-0.095670600320164911476, -0.11403730110243177756)),
    (1.5, (-20.0, -20.0), (0.012486694032052024955, -0.012824058124564048502)),
    (1.5, (0.0, 50.0), (0.062165670736459325753, -0.098773243253092883966)),
    (11.0 / 6.0, (0.0, 5.0), (-0.21495610979694261218, 0.037127089304996066618)),
    (11.0 / 6.0, (-40.0, 0.0), (0.02092282001993728408, 0.0)),
    (11.0 / 6.0, (0.0, 30.0), (-0.050695911243682330311, 0.005402763746597830409)),
    (11.0 / 6.0, (0.0, 50.0), (-0.00018849346964122601493, -0.019443960403204837375)),
    (13.0 / 6.0, (1.0, 0.0), (1.6503095830634112982, 0.0)),
    (13.0 / 6.0, (-3.0, 2.0), (0.27314577925724293001, 0.15239000548823410416)),
    (13.0 / 6.0, (0.0, 30.0), (-0.020134465771230949245, 0.041079221584206951365)),
    (13.0 / 6.0, (-20.0, -20.0), (0.029172226353720593466, -0.028918587294993011852)),
    (17.0 / 6.0, (0.0, 5.0), (0.013613266078498616057, 0.44548390692554565268)),
    (17.0 / 6.0, (0.0, 50.0), (-0.00071294521478417620423, 0.036673578093886848371)),
    (17.0 / 6.0, (45.0, 0.0), (56109225810127339.939, 0.0)),
    (0.5, (0.0, 5.0), (3.5061878261829224116, -1.9821036248576535714)),
    (0.5, (-40.0, 0.0), (-0.013000946388940878013, 0.0)),
    (0.5, (0.0, 50.0), (10.877324325309288397, 6.2165670736459325753)),
    (2.0, (-40.0, 0.0), (0.024999999999999999894, 0.0)),
    (2.0, (0.0, 50.0), (-0.0052474970740785757183, 0.00070067943015773451862)),
];

#[test]
fn hyp1f1_simple_values() {
    assert_eq!(hyp1f1_one(7.0 / 6.0, c(0.0, 0.0)).unwrap().value, c(1.0, 0.0));
    let v = hyp1f1_one(2.0, c(1.0, 0.0)).unwrap();
    assert!(v.is_clean());
    // Direct oracle (e^z − 1)/z.
    assert!((v.value.re - (1f64.exp() - 1.0)).abs() < 1e-14);
    for z in [c(-40.0, 0.0), c(0.0, 50.0), c(-3.0, 2.0)] {
        let want = (z.exp() - 1.0) / z;
        let got = hyp1f1_one(2.0, z).unwrap().value;
        assert!((got - want).norm() <= 1e-10 * want.norm(), "z = {z}");
    }
}

#[test]
fn hyp1f1_matches_reference_table() {
    for &(b, (x, y), (re, im)) in HYP_REF {
        let want = c(re, im);
        let got = hyp1f1_one(b, c(x, y)).unwrap();
        assert!(got.is_clean(), "b={b} z={x}+{y}i flagged {:?}", got.flags);
        assert!((got.value - want).norm() <= 1e-10 * want.norm(), "b={b} z={x}+{y}i: {} vs {want}", got.value);
    }
}

#[test]
fn hyp1f1_recurrence() {
    for b in [7.0 / 6.0, 13.0 / 6.0] {
        for z in [c(1.0, 0.0), c(0.0, 5.0), c(-3.0, 2.0)] {
            let lhs = hyp1f1_one(b, z).unwrap().value;
            let rhs = 1.0 + z / b * hyp1f1_one(b + 1.0, z).unwrap().value;
            assert!((lhs - rhs).norm() <= 1e-9 * lhs.norm());
        }
    }
}

#[test]
fn hyp1f1_rejects_non_positive_b() {
    assert!(matches!(hyp1f1_one(0.0, c(1.0, 0.0)), Err(Error::Domain(_))));
    assert!(matches!(hyp1f1_one(-1.5, c(1.0, 0.0)), Err(Error::Domain(_))));
}

#[test]
fn moshinsky_field_free_sum_is_plane_wave() {
    let t = 1.0;
    let s = moshinsky(0.0, c(0.0, 1.0), t).unwrap() + moshinsky(0.0, c(0.0, -1.0), t).unwrap();
    assert!((s - C64::from_polar(1.0, t / 2.0)).norm() < 1e-13);
}

#[test]
fn moshinsky_limits() {
    assert!(moshinsky(1.0, c(1.0, 0.0), 1e-6).unwrap().norm() < 1e-3);
    // Reference value at t = 1e4 computed with 30-digit arithmetic.
    let m = moshinsky(1.0, c(1.0, 0.0), 1e4).unwrap();
    assert!((m - c(-0.750598766766373643672, 0.661128432204846965511)).norm() < 1e-10);
    // The approach to the plane wave is algebraic, |M − plane| ≈ 1/√(2πt).
    for t in [1e4, 1e6] {
        let m = moshinsky(1.0, c(1.0, 0.0), t).unwrap();
        let dev = (m - C64::from_polar(1.0, 1.0 - 0.5 * t)).norm();
        let law = 1.0 / (2.0 * std::f64::consts::PI * t).sqrt();
        assert!((dev - law).abs() < 0.01 * law, "t = {t}: {dev} vs {law}");
    }
    let far = moshinsky(1.0, c(1.0, 0.0), 1e6).unwrap();
    assert!((far - C64::from_polar(1.0, 1.0 - 0.5e6)).norm() < 1e-3);
    assert!(moshinsky(1.0, c(1.0, 0.0), 0.0).is_err());
}

#[test]
fn moshinsky_modulus_bound() {
    let mut checked = 0;
    for &k in &[c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0), c(0.5, -0.5)] {
        for i in -10..=10 {
            let x = i as f64 * 0.7;
            for t in [0.01, 0.3, 1.0, 4.0, 20.0] {
                // Sector |arg w| <= π/4, where |erfc(w)| <= 1.
                let w = (x - k * t) / (c(0.0, 2.0 * t)).sqrt();
                if (w * w).re < 0.0 || w.re < 0.0 {
                    continue;
                }
                let m = moshinsky(x, k, t).unwrap();
                let bound = (k * x - 0.5 * k * k * t).im.abs().exp();
                assert!(m.norm() <= bound + 1e-12 * bound, "x={x} k={k} t={t}");
                checked += 1;
            }
        }
    }
    assert!(checked > 100, "{checked}");
}
