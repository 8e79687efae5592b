//! Weak-field closed forms for ψ(0, t) and ψ(x, t).

use crate::error::domain;
use crate::propagator::volkov_phi;
use crate::quad::{integrate_with_breaks, Tol};
use crate::specfun::{cerf, exp_times_erfc, hyp1f1_one};
use crate::{Flag, Flagged, PhysParams, Result};
use num_complex::Complex64 as C64;

/// Outer series terms below this fraction of the partial sum end the sum.
const SERIES_REL: f64 = 1e-14;
/// Consecutive negligible terms required before an outer sum stops.
const STAGNATION: usize = 10;
const AUTO_SERIES_LIMIT: f64 = 50.0;
const MAX_TERMS: usize = 400;
/// Largest partial sum over the result above which the series is flagged.
const CANCELLATION_LIMIT: f64 = 1e10;
/// Smallest multiplicative-form denominator before the result is flagged.
const SINGULAR_LIMIT: f64 = 1e-12;

/// Exponential decay ansatz ψ(0, t) = √B·e^{−iEt/ℏ}, E = E_b + Δ − iΓ/2,
/// together with the mixing weight of the combined form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayAnsatz {
    pub e_f: f64,
    pub gamma: f64,
    pub delta: f64,
    pub c: f64,
}

impl DecayAnsatz {
    pub fn new(params: &PhysParams, gamma: f64, delta: f64, c: f64) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() || !delta.is_finite() {
            return Err(domain(format!("need finite gamma >= 0 and delta, got {gamma}, {delta}")));
        }
        if !(0.0..=1.0).contains(&c) {
            return Err(domain(format!("mixing weight c must lie in [0, 1], got {c}")));
        }
        Ok(Self { e_f: params.e_b() + delta, gamma, delta, c })
    }

    /// Ansatz with the semiclassical Γ and Δ.
    pub fn wkb(params: &PhysParams, c: f64) -> Result<Self> {
        let (delta, gamma) = wkb_constants(params);
        Self::new(params, gamma, delta, c)
    }

    /// Complex quasi-energy E_f − iΓ/2.
    pub fn energy(&self) -> C64 {
        C64::new(self.e_f, -0.5 * self.gamma)
    }

    pub fn with_c(self, c: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c) {
            return Err(domain(format!("mixing weight c must lie in [0, 1], got {c}")));
        }
        Ok(Self { c, ..self })
    }
}

/// Semiclassical (Δ, Γ): Δ = −(5ℏ²B²/8m)f², Γ = (ℏ²B²/m)e^{−2/(3f)}, with Γ = 0 at f = 0.
pub fn wkb_constants(params: &PhysParams) -> (f64, f64) {
    let scale = params.hbar * params.hbar * params.b() * params.b() / params.mass;
    let f = params.f();
    let gamma = if f > 0.0 { scale * (-2.0 / (3.0 * f)).exp() } else { 0.0 };
    (-0.625 * scale * f * f, gamma)
}

/// Arguments of Y = ∫₀¹ e^{−ξ₁z⁶ − ξ₂z²} dz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YArgs {
    pub xi1: C64,
    pub xi2: C64,
}

impl YArgs {
    /// ξ₁ = f²E_b³t³/(3iℏ³), ξ₂ = Et/(iℏ).
    pub fn at(params: &PhysParams, t: f64, energy: C64) -> Self {
        let f = params.f();
        let eb = params.e_b() / params.hbar;
        let i = C64::i();
        Self { xi1: f * f * eb * eb * eb * t * t * t / (3.0 * i), xi2: energy * t / (i * params.hbar) }
    }

    /// χ with ξ₁ = χ⁶/3, principal sixth root.
    pub fn chi(&self) -> C64 {
        (3.0 * self.xi1).powf(1.0 / 6.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum YMethod {
    /// ₁F₁ series, falling back to quadrature if it flags. Beyond
    /// |ξ₁| = 50 the ₁F₁ terms are themselves integrals and quadrature is
    /// used directly.
    #[default]
    Auto,
    Series,
    Quadrature,
}

/// Sums `term(n)` for n ≥ 0 until the terms stay negligible, tracking the
/// largest partial sum.
fn outer_sum(mut term: impl FnMut(usize) -> Result<Flagged<C64>>, flags: &mut Vec<Flag>) -> Result<(C64, f64)> {
    let mut sum = C64::new(0.0, 0.0);
    let mut peak = 0.0f64;
    let mut quiet = 0;
    for n in 0..MAX_TERMS {
        let t = term(n)?;
        flags.extend(t.flags);
        sum += t.value;
        peak = peak.max(sum.norm());
        if t.value.norm() <= SERIES_REL * sum.norm() {
            quiet += 1;
            if quiet >= STAGNATION {
                return Ok((sum, peak));
            }
        } else {
            quiet = 0;
        }
    }
    flags.push(Flag::NotConverged(format!("Y series after {MAX_TERMS} terms")));
    Ok((sum, peak))
}

/// Y by the three ₁F₁ families: A₀ (z^{6m}), A₁ (z^{6n+2}) and A₂ (z^{6m+4}).
fn y_series(args: YArgs) -> Result<Flagged<C64>> {
    let (x1, x2) = (args.xi1, args.xi2);
    let mut flags = Vec::new();
    let f = |b: f64, flags: &mut Vec<Flag>| -> Result<C64> {
        let v = hyp1f1_one(b, x1)?;
        flags.extend(v.flags);
        Ok(v.value)
    };
    // (−ξ₂)^j/j! built incrementally, shared by the three families.
    let mut powers: Vec<C64> = vec![C64::new(1.0, 0.0)];
    let mut power = |j: usize| -> C64 {
        while powers.len() <= j {
            let k = powers.len();
            let next = powers[k - 1] * (-x2) / k as f64;
            powers.push(next);
        }
        powers[j]
    };

    let head0 = 1.0 + 6.0 * x1 / 7.0 * f(13.0 / 6.0, &mut flags)?;
    let mut fl = Vec::new();
    let (tail0, peak0) = outer_sum(
        |m| {
            let m = m + 1;
            let mut fl = Vec::new();
            let v = power(3 * m) * f(m as f64 + 7.0 / 6.0, &mut fl)? / (6 * m + 1) as f64;
            Ok(Flagged::with(v, fl))
        },
        &mut fl,
    )?;
    let a0 = head0 + tail0;

    let (a1, peak1) = outer_sum(
        |n| {
            let mut fl = Vec::new();
            let v = power(3 * n + 1) * f(n as f64 + 1.5, &mut fl)? / (6 * n + 3) as f64;
            Ok(Flagged::with(v, fl))
        },
        &mut fl,
    )?;

    let head2 = 0.1 + 3.0 * x1 / 55.0 * f(17.0 / 6.0, &mut flags)?;
    // A₂ = ξ₂²{head2 + Σ_{m≥1} (−ξ₂)^{3m}/(3m+2)!·₁F₁(1; m+11/6; ξ₁)/(6m+5)}; the
    // terms are carried as (−ξ₂)^{3m+2}/(3m+2)! since (−ξ₂)² = ξ₂².
    let (tail2, peak2) = outer_sum(
        |m| {
            let m = m + 1;
            let mut fl = Vec::new();
            let v = power(3 * m + 2) * f(m as f64 + 11.0 / 6.0, &mut fl)? / (6 * m + 5) as f64;
            Ok(Flagged::with(v, fl))
        },
        &mut fl,
    )?;
    let a2 = x2 * x2 * head2 + tail2;
    flags.extend(fl);

    let scale = (-x1).exp();
    let total = scale * (a0 + a1 + a2);
    let peak = scale.norm() * (peak0 + head0.norm()).max(peak1).max(peak2 + (x2 * x2 * head2).norm());
    if !(total.re.is_finite() && total.im.is_finite()) {
        return Err(crate::Error::Overflow(format!("Y series at xi1 = {x1}, xi2 = {x2}")));
    }
    if peak > CANCELLATION_LIMIT * total.norm() {
        flags.push(Flag::PrecisionLoss(format!(
            "Y series cancels by {:.1e} at xi1 = {x1}, xi2 = {x2}",
            peak / total.norm()
        )));
    }
    Ok(Flagged::with(total, flags))
}

fn y_quadrature(args: YArgs) -> Flagged<C64> {
    let (x1, x2) = (args.xi1, args.xi2);
    let scale = (-x1.re).max(0.0) + (-x2.re).max(0.0);
    // Panels carrying about two radians of phase each from either exponent.
    let mut breaks = vec![0.0, 1.0];
    for (w, p) in [(x1.im.abs(), 6.0), (x2.im.abs(), 2.0)] {
        let k_max = (0.5 * w).floor() as usize;
        breaks.extend((1..=k_max).map(|k| (2.0 * k as f64 / w).powf(1.0 / p)));
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let r = integrate_with_breaks(
        |z| {
            let z2 = z * z;
            (-x1 * z2 * z2 * z2 - x2 * z2).exp()
        },
        &breaks,
        Tol { max_panels: 4000 + 2 * breaks.len(), ..Tol::new(1e-15 * scale.exp(), 1e-12) },
    );
    let flags = if r.converged { vec![] } else { vec![Flag::QuadratureLimit { err_est: r.err }] };
    Flagged::with(r.value, flags)
}

/// Y(ξ₁, ξ₂) = ∫₀¹ e^{−ξ₁z⁶ − ξ₂z²} dz.
pub fn y_integral(args: YArgs, method: YMethod) -> Result<Flagged<C64>> {
    if ![args.xi1.re, args.xi1.im, args.xi2.re, args.xi2.im].iter().all(|v| v.is_finite()) {
        return Err(domain(format!("Y arguments not finite: {args:?}")));
    }
    match method {
        YMethod::Series => y_series(args),
        YMethod::Quadrature => Ok(y_quadrature(args)),
        YMethod::Auto if args.xi1.norm() > AUTO_SERIES_LIMIT => Ok(y_quadrature(args)),
        YMethod::Auto => {
            let s = y_series(args)?;
            if s.is_clean() {
                Ok(s)
            } else {
                Ok(y_quadrature(args))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayForm {
    /// √B·e^{−iEt/ℏ}.
    AnsatzOnly,
    /// φ_F(0, t) + √(2iℏB³t/(πm))·e^{−iEt/ℏ}·Y.
    Additive,
    /// φ_F(0, t)·(1 − √(2iℏB³t/(πm))·Y)⁻¹.
    Multiplicative,
    /// c·Additive + (1 − c)·Multiplicative.
    Combined,
}

/// Closed form of ψ(0, t) under the decay ansatz.
pub fn decay_closed_psi0(params: &PhysParams, t: f64, ansatz: &DecayAnsatz, form: DecayForm) -> Result<Flagged<C64>> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("decay forms need t >= 0, got {t}")));
    }
    let e = ansatz.energy();
    let decay = (-C64::i() * e * t / params.hbar).exp();
    let rb = params.b().sqrt();
    if form == DecayForm::AnsatzOnly {
        return Ok(Flagged::clean(rb * decay));
    }
    let phi = volkov_phi(0.0, t, params)?;
    if t == 0.0 {
        return Ok(Flagged::clean(phi));
    }
    let y = y_integral(YArgs::at(params, t, e), YMethod::Auto)?;
    let mut flags = y.flags;
    let b = params.b();
    let pref = (C64::new(0.0, 2.0 * params.hbar * b * b * b * t / (std::f64::consts::PI * params.mass))).sqrt();
    let additive = phi + pref * decay * y.value;
    let denom = 1.0 - pref * y.value;
    if denom.norm() < SINGULAR_LIMIT && form != DecayForm::Additive {
        flags.push(Flag::Singular { t });
    }
    let multiplicative = phi / denom;
    let v = match form {
        DecayForm::Additive => additive,
        DecayForm::Multiplicative => multiplicative,
        DecayForm::Combined => ansatz.c * additive + (1.0 - ansatz.c) * multiplicative,
        DecayForm::AnsatzOnly => unreachable!(),
    };
    Ok(Flagged::with(v, flags))
}

/// First scheme at the well: φ_F(0, t) + √B·e^{−iE_b t/ℏ}·erf(√(−iE_b t/ℏ)).
pub fn first_scheme_psi0(params: &PhysParams, t: f64) -> Result<C64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("first scheme needs t >= 0, got {t}")));
    }
    let k = -params.e_b() * t / params.hbar;
    let w = C64::new(0.0, k).sqrt();
    Ok(volkov_phi(0.0, t, params)? + params.b().sqrt() * C64::from_polar(1.0, k) * cerf(w)?)
}

/// Central-difference weights for the `order`-th derivative on offsets
/// −half..=half (Fornberg's recursion).
fn central_weights(order: usize, half: usize) -> Vec<f64> {
    let xs: Vec<f64> = (0..=2 * half).map(|j| j as f64 - half as f64).collect();
    let n = xs.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    for i in 1..n {
        let mut c2 = 1.0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            for k in (0..=order.min(i)).rev() {
                let prev_i = if k > 0 { c[i - 1][k - 1] } else { 0.0 };
                if j == i - 1 {
                    c[i][k] = c1 * (k as f64 * prev_i - xs[i - 1] * c[i - 1][k]) / c2;
                }
                let prev_j = if k > 0 { c[j][k - 1] } else { 0.0 };
                c[j][k] = (xs[i] * c[j][k] - k as f64 * prev_j) / c3;
            }
        }
        c1 = c2;
    }
    c.iter().map(|row| row[order]).collect()
}

/// T_f(x, t, σ) with its branch argument 1 − xBf − σf^{2/3}.
fn t_f(params: &PhysParams, x: f64, t: f64, sigma: f64) -> C64 {
    let f = params.f();
    let b = params.b();
    let i = C64::i();
    let root_eb = (i * params.e_b().abs() / params.hbar).sqrt();
    let alpha = x.abs() / (2.0 * i * params.hbar / params.mass).sqrt();
    let beta = root_eb * C64::new(1.0 - x * b * f - sigma * f.powf(2.0 / 3.0), 0.0).sqrt();
    let rt = t.sqrt();
    let u = alpha / rt;
    let ab = 2.0 * alpha * beta;
    root_eb / beta * (exp_times_erfc(-ab, u - beta * rt) - exp_times_erfc(ab, u + beta * rt))
}

/// ∂^order T_f/∂σ^order at σ = 0 with one Richardson step, or the flag if the
/// stencil straddles the branch point.
fn t_f_derivative(params: &PhysParams, x: f64, t: f64, order: usize, accuracy: usize) -> (C64, Option<Flag>) {
    if order == 0 {
        return (t_f(params, x, t, 0.0), None);
    }
    let f = params.f();
    if f == 0.0 {
        return (C64::new(0.0, 0.0), None);
    }
    let h = (1e-2 * f.powf(-2.0 / 3.0)).clamp(1e-4, 1e-1);
    // Central stencils have even accuracy order p and ⌊(d+1)/2⌋ − 1 + p/2 points a side.
    let p = accuracy.next_multiple_of(2);
    let half = (order + 1) / 2 - 1 + p / 2;
    let w = central_weights(order, half);
    let reach = half as f64 * h;
    let root = 1.0 - x * params.b() * f;
    let lo = root - reach * f.powf(2.0 / 3.0);
    let hi = root + reach * f.powf(2.0 / 3.0);
    let flag = (lo < 0.0 && hi > 0.0).then(|| Flag::StencilBranch { sigma: root / f.powf(2.0 / 3.0) });
    let diff = |h: f64| -> C64 {
        let s: C64 = w
            .iter()
            .enumerate()
            .map(|(j, wj)| t_f(params, x, t, (j as f64 - half as f64) * h) * *wj)
            .sum();
        s / h.powi(order as i32)
    };
    let coarse = diff(h);
    let fine = diff(0.5 * h);
    let r = 2f64.powi(p as i32);
    ((r * fine - coarse) / (r - 1.0), flag)
}

/// First-scheme ψ(x, t) through the σ-derivative series truncated after k = `order`.
pub fn first_scheme_psi_x(params: &PhysParams, x: f64, t: f64, order: usize) -> Result<Flagged<C64>> {
    if !(t > 0.0) || !t.is_finite() || !x.is_finite() {
        return Err(domain(format!("first scheme needs finite x and t > 0, got x = {x}, t = {t}")));
    }
    let mut flags = Vec::new();
    let mut sum = C64::new(0.0, 0.0);
    let mut fact = 1.0;
    for k in 0..=order {
        if k > 0 {
            fact *= 3.0 * k as f64;
        }
        let (d, flag) = t_f_derivative(params, x, t, 3 * k, 3 * order + 2);
        flags.extend(flag);
        sum += d / fact;
    }
    let phase = C64::from_polar(1.0, -params.e_b() * t / params.hbar);
    let v = volkov_phi(x, t, params)? + 0.5 * params.b().sqrt() * phase * sum;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(crate::Error::Overflow(format!("first scheme at x = {x}, t = {t}")));
    }
    Ok(Flagged::with(v, flags))
}
