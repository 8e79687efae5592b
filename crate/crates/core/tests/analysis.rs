use proptest::prelude::*;
use stark_delta::analysis::{density_proxy, extract_rate_shift, extrema, fit_c, has_ripple, Extremum};
use stark_delta::approx::{decay_closed_psi0, DecayAnsatz, DecayForm};
use stark_delta::volterra::{solve_psi0, SolveOptions};
use stark_delta::{Complex64 as C64, ComplexSeries, Flag, PhysParams, TimeGrid};

fn synth(grid: TimeGrid, e: C64) -> ComplexSeries {
    ComplexSeries::from_fn(grid, |t| Ok((-C64::i() * e * t).exp())).unwrap()
}

fn exact(f: f64, t_max: f64, h: f64) -> ComplexSeries {
    let p = PhysParams::natural(f).unwrap();
    let opts = SolveOptions { estimate_error: false, ..SolveOptions::default() };
    solve_psi0(&p, &TimeGrid::with_step(t_max, h).unwrap(), &opts).unwrap().series
}

#[test]
fn field_free_series_has_no_rate_or_shift() {
    let p = PhysParams::natural(0.0).unwrap();
    let s = synth(TimeGrid::new(20.0, 2000).unwrap(), C64::new(-0.5, 0.0));
    let r = extract_rate_shift(&s, &p).unwrap();
    assert!(r.is_clean());
    assert!(r.value.gamma[0].is_nan() && r.value.delta[0].is_nan());
    for i in 1..s.values.len() {
        assert!(r.value.gamma[i].abs() < 1e-12 && r.value.delta[i].abs() < 1e-12, "node {i}");
    }
    let pl = r.value.plateau.unwrap();
    assert!(pl.gamma.abs() < 1e-10 && pl.delta.abs() < 1e-10);
    assert!(density_proxy(&s, &p).iter().all(|v| v.abs() < 1e-14));
}

#[test]
fn synthetic_decay_is_recovered_exactly() {
    let p = PhysParams::natural(0.3).unwrap();
    let s = synth(TimeGrid::new(20.0, 2000).unwrap(), C64::new(-0.5 - 0.1, -0.25));
    let r = extract_rate_shift(&s, &p).unwrap().value;
    for i in 1..s.values.len() {
        assert!((r.delta[i] + 0.1).abs() < 1e-12 && (r.gamma[i] - 0.5).abs() < 1e-12, "node {i}");
    }
    let pl = r.plateau.unwrap();
    assert!((pl.delta + 0.1).abs() < 1e-9 && (pl.gamma - 0.5).abs() < 1e-9);
    for w in r.phase_unwrapped.windows(2) {
        assert!((w[1] - w[0]).abs() < std::f64::consts::PI);
    }
}

#[test]
fn input_checks_and_flags() {
    let p = PhysParams::natural(0.3).unwrap();
    let grid = TimeGrid::new(1.0, 10).unwrap();
    let off = ComplexSeries::from_fn(grid, |_| Ok(C64::new(0.5, 0.0))).unwrap();
    assert!(extract_rate_shift(&off, &p).is_err());

    let dip = ComplexSeries::from_fn(grid, |t| Ok(C64::new(if t > 0.45 && t < 0.55 { 0.0 } else { 1.0 }, 0.0))).unwrap();
    let r = extract_rate_shift(&dip, &p).unwrap();
    assert!(r.flags.iter().any(|f| matches!(f, Flag::TinyAmplitude { node: 5 })), "{:?}", r.flags);

    // Phase advancing by 2.5 rad per step cannot be followed.
    let fast = synth(grid, C64::new(25.0, 0.0));
    let r = extract_rate_shift(&fast, &p).unwrap();
    assert!(r.flags.iter().any(|f| matches!(f, Flag::PhaseJump { node: 1 })), "{:?}", r.flags);
}

#[test]
fn density_proxy_values() {
    let p = PhysParams::natural(1.0).unwrap();
    let s = exact(1.0, 30.0, 0.01);
    let proxy = density_proxy(&s, &p);
    assert_eq!(proxy[0], 0.0);
    assert!(*proxy.last().unwrap() >= 0.9, "{}", proxy.last().unwrap());
    assert!(proxy.iter().all(|v| (-1e-6..=1.0 + 1e-6).contains(v)));
}

#[test]
fn plateau_at_strong_field_matches_captions() {
    let p = PhysParams::natural(2.0).unwrap();
    let pl = extract_rate_shift(&exact(2.0, 30.0, 0.01), &p).unwrap().value.plateau.unwrap();
    assert!((pl.gamma - 1.2115).abs() <= 0.02 * 1.2115, "{}", pl.gamma);
    assert!((pl.delta + 0.11235).abs() <= 0.05 * 0.11235, "{}", pl.delta);
}

#[test]
fn extrema_detection() {
    let grid = TimeGrid::new(10.0, 1000).unwrap();
    let v: Vec<f64> = grid.nodes().map(|t| t.sin()).collect();
    let e = extrema(&v, &grid, 0.0, 10.0);
    let kinds: Vec<Extremum> = e.iter().map(|x| x.1).collect();
    assert_eq!(kinds, vec![Extremum::Max, Extremum::Min, Extremum::Max]);
    assert!(has_ripple(&v, &grid, 0.0, 10.0));
    let mono: Vec<f64> = grid.nodes().map(|t| (-t).exp()).collect();
    assert!(!has_ripple(&mono, &grid, 0.0, 10.0));
    // A minimum alone is no ripple.
    assert!(!has_ripple(&v, &grid, 3.0, 6.0));
}

#[test]
fn exact_density_proxy_ripples_at_f1() {
    let p = PhysParams::natural(1.0).unwrap();
    let s = exact(1.0, 15.0, 0.01);
    assert!(has_ripple(&density_proxy(&s, &p), &s.grid, 2.0, 15.0));
}

#[test]
#[ignore = "the exact f = 0.5 proxy rises monotonically on [2, 15]; its ripples are slope modulations without strict extrema"]
fn exact_density_proxy_ripples_at_f05() {
    let p = PhysParams::natural(0.5).unwrap();
    let s = exact(0.5, 15.0, 0.01);
    assert!(has_ripple(&density_proxy(&s, &p), &s.grid, 2.0, 15.0));
}

fn form_series(p: &PhysParams, a: &DecayAnsatz, form: DecayForm, grid: TimeGrid) -> ComplexSeries {
    ComplexSeries::from_fn(grid, |t| Ok(decay_closed_psi0(p, t, a, form)?.value)).unwrap()
}

#[test]
fn fit_c_endpoints() {
    let p = PhysParams::natural(0.5).unwrap();
    let a = DecayAnsatz::new(&p, 0.1896, -0.0738, 0.5).unwrap();
    let grid = TimeGrid::new(12.0, 240).unwrap();
    let add = fit_c(&form_series(&p, &a, DecayForm::Additive, grid), &p, &a).unwrap();
    assert!((add.value - 1.0).abs() <= 1e-3 && add.is_clean(), "{:?}", add);
    let mul = fit_c(&form_series(&p, &a, DecayForm::Multiplicative, grid), &p, &a).unwrap();
    assert!(mul.value.abs() <= 1e-3 && mul.is_clean(), "{:?}", mul);
    let short = form_series(&p, &a, DecayForm::Additive, TimeGrid::new(5.0, 100).unwrap());
    assert!(fit_c(&short, &p, &a).is_err());
}

#[test]
fn fit_c_against_exact_solve() {
    let p = PhysParams::natural(0.5).unwrap();
    let a = DecayAnsatz::new(&p, 0.1896, -0.0738, 0.5).unwrap();
    let s = exact(0.5, 10.0, 0.01);
    let c = fit_c(&s, &p, &a).unwrap();
    assert!(c.is_clean());
    assert!((c.value - 0.65).abs() <= 0.1, "{}", c.value);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn synthesised_ansatz_round_trips(gamma in 0.0f64..2.0, delta in -0.2f64..0.0) {
        let p = PhysParams::natural(0.5).unwrap();
        let a = DecayAnsatz::new(&p, gamma, delta, 1.0).unwrap();
        let s = form_series(&p, &a, DecayForm::AnsatzOnly, TimeGrid::new(40.0, 2000).unwrap());
        let r = extract_rate_shift(&s, &p).unwrap().value;
        let pl = r.plateau.unwrap();
        prop_assert!((pl.gamma - gamma).abs() <= 1e-9 && (pl.delta - delta).abs() <= 1e-9);
        prop_assert!((r.gamma[1000] - gamma).abs() <= 1e-9 && (r.delta[1000] - delta).abs() <= 1e-9);
    }

    #[test]
    fn proxy_ignores_global_phase(theta in -3.0f64..3.0, gamma in 0.0f64..1.0) {
        let p = PhysParams::natural(0.5).unwrap();
        let grid = TimeGrid::new(5.0, 50).unwrap();
        let s = synth(grid, C64::new(-0.5, -0.5 * gamma));
        let rotated = ComplexSeries::new(grid, s.values.iter().map(|v| v * C64::from_polar(1.0, theta)).collect()).unwrap();
        let a = density_proxy(&s, &p);
        let b = density_proxy(&rotated, &p);
        prop_assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-14));
    }
}

#[test]
fn fit_c_ignores_global_phase() {
    let p = PhysParams::natural(1.0).unwrap();
    let a = DecayAnsatz::new(&p, 0.52916, -0.10722, 0.5).unwrap();
    let s = exact(1.0, 10.0, 0.02);
    let base = fit_c(&s, &p, &a).unwrap().value;
    for theta in [0.7, -2.0, 3.1] {
        let r = ComplexSeries::new(s.grid, s.values.iter().map(|v| v * C64::from_polar(1.0, theta)).collect()).unwrap();
        assert!((fit_c(&r, &p, &a).unwrap().value - base).abs() <= 1e-12);
    }
}
