//! Numerical checks of the Airy integral identities behind the closed forms.

use crate::error::domain;
use crate::quad::{integrate, integrate_with_breaks, Tol};
use crate::specfun::{airy_ai, cerf, hyp1f1_one};
use crate::{Flag, Flagged, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Ai(σ) < 1e−26 beyond this point.
const AI_DECAY_CUT: f64 = 20.0;
/// Half-oscillations of Ai(−s) fed to the averaging scheme.
const TAIL_LUMPS: usize = 48;
const FOURIER_TARGET: f64 = 1e-7;
/// e^{−39} ≈ 1e−17.
const GAUSS_CUT: f64 = 39.0;

/// ε ladder and the regularised values it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Regularization {
    pub eps: Vec<f64>,
    pub values: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub lhs: C64,
    pub rhs: C64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub regularization: Option<Regularization>,
    /// Cut-offs and other settings of the numerical side.
    pub detail: String,
}

impl IdentityReport {
    fn new(lhs: C64, rhs: C64, regularization: Option<Regularization>, detail: String) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = if rhs.norm() > 0.0 { abs_err / rhs.norm() } else { abs_err };
        Self { lhs, rhs, abs_err, rel_err, regularization, detail }
    }
}

/// s_k with (2/3)s_k^{3/2} = kπ: the half-period points of Ai(−s).
fn half_period(k: usize) -> f64 {
    (1.5 * PI * k as f64).powf(2.0 / 3.0)
}

fn ai(s: f64) -> f64 {
    airy_ai(s).unwrap_or(0.0)
}

/// ∫ Ai(σ)e^{iση} dσ against e^{−iη³/3}.
///
/// σ > 0 is cut at 20. On σ < 0 the integral is taken directly up to a point
/// well past the stationary phase at s = η², then continued over
/// half-oscillations whose partial sums are repeatedly averaged.
pub fn check_airy_fourier(eta: f64) -> Result<Flagged<IdentityReport>> {
    if !(eta.abs() <= 5.0) {
        return Err(domain(format!("check_airy_fourier needs |eta| <= 5, got {eta}")));
    }
    let tol = Tol::new(1e-15, 1e-14);
    let mut flags = Vec::new();
    let pos = integrate(|s| ai(s) * C64::from_polar(1.0, s * eta), 0.0, AI_DECAY_CUT, tol);
    let neg_f = |s: f64| ai(-s) * C64::from_polar(1.0, -s * eta);
    let s_min = 30f64.max(16.0 * eta * eta);
    let k0 = (s_min.powf(1.5) / (1.5 * PI)).ceil() as usize;
    let breaks: Vec<f64> = (0..=k0).map(half_period).collect();
    let head = integrate_with_breaks(neg_f, &breaks, Tol { max_panels: 20 * k0 + 4000, ..tol });
    if !(pos.converged && head.converged) {
        flags.push(Flag::QuadratureLimit { err_est: pos.err + head.err });
    }
    let mut row = Vec::with_capacity(TAIL_LUMPS + 1);
    let mut sum = pos.value + head.value;
    row.push(sum);
    for k in k0..k0 + TAIL_LUMPS {
        sum += integrate(neg_f, half_period(k), half_period(k + 1), tol).value;
        row.push(sum);
    }
    while row.len() > 2 {
        row = row.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    let spread = (row[1] - row[0]).norm();
    if spread > FOURIER_TARGET {
        flags.push(Flag::NotConverged(format!("Airy Fourier averaging spread {spread:.2e}")));
    }
    let lhs = 0.5 * (row[0] + row[1]);
    let rhs = C64::from_polar(1.0, -eta.powi(3) / 3.0);
    let detail = format!(
        "sigma in [-{:.1}, {AI_DECAY_CUT}] direct, {TAIL_LUMPS} averaged half-oscillations to -{:.1}",
        breaks[k0],
        half_period(k0 + TAIL_LUMPS)
    );
    Ok(Flagged::with(IdentityReport::new(lhs, rhs, None, detail), flags))
}

fn z6_rhs(xi1: C64) -> Result<Flagged<C64>> {
    let f = hyp1f1_one(13.0 / 6.0, xi1)?;
    Ok(f.map(|v| (-xi1).exp() * (xi1 * (6.0 / 7.0) * v + 1.0)))
}

/// ∫₀¹ e^{−ξ₁z⁶} dz against e^{−ξ₁}{(6ξ₁/7)·₁F₁(1; 13/6; ξ₁) + 1}.
pub fn check_z6_identity(xi1: C64) -> Result<Flagged<IdentityReport>> {
    if !(xi1.norm() <= 50.0) {
        return Err(domain(format!("check_z6_identity needs |xi1| <= 50, got {xi1}")));
    }
    let scale = (-xi1.re).max(0.0).exp();
    let q = integrate(|z| (-xi1 * z.powi(6)).exp(), 0.0, 1.0, Tol::new(1e-15 * scale, 1e-12));
    let rhs = z6_rhs(xi1)?;
    let mut flags = rhs.flags;
    if !q.converged {
        flags.push(Flag::QuadratureLimit { err_est: q.err });
    }
    let detail = "adaptive G7K15 on [0, 1], rel tol 1e-12".to_string();
    Ok(Flagged::with(IdentityReport::new(q.value, rhs.value, None, detail), flags))
}

/// erf(χ√σ)/√σ, an entire function of σ.
fn erf_ratio(chi: C64, sigma: f64) -> C64 {
    let root = if sigma >= 0.0 { C64::new(sigma.sqrt(), 0.0) } else { C64::new(0.0, (-sigma).sqrt()) };
    let z = chi * root;
    if z.norm() < 0.05 {
        let z2 = z * z;
        return chi * (2.0 / PI.sqrt()) * (1.0 - z2 / 3.0 + z2 * z2 / 10.0 - z2 * z2 * z2 / 42.0);
    }
    cerf(z).unwrap_or(C64::new(f64::NAN, f64::NAN)) / root
}

/// ∫ dσ Ai(σ)erf(χ√σ)/√σ against (2χ/√π)e^{−ξ₁}{(6ξ₁/7)·₁F₁(1; 13/6; ξ₁) + 1}, ξ₁ = χ⁶/3.
///
/// The left side is defined as the ε → 0 limit of the integral weighted by
/// e^{−εσ²}, evaluated at ε0, ε0/2, ε0/4 and Richardson-extrapolated.
pub fn check_airy_erf_identity(chi: C64, eps: f64) -> Result<Flagged<IdentityReport>> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(domain(format!("regulariser must be positive, got {eps}")));
    }
    if !(chi.re.is_finite() && chi.im.is_finite()) {
        return Err(domain(format!("chi not finite: {chi}")));
    }
    let xi1 = chi.powi(6) / 3.0;
    let rhs = z6_rhs(xi1)?;
    let mut flags = rhs.flags;
    let rhs = rhs.value * chi * (2.0 / PI.sqrt());
    let ladder = [eps, 0.5 * eps, 0.25 * eps];
    let growth = (chi * chi).norm();
    let mut values = Vec::with_capacity(3);
    for &e in &ladder {
        // Solve εs² − |χ²|s = 39 for the negative-side cut-off.
        let s_max = (growth + (growth * growth + 4.0 * e * GAUSS_CUT).sqrt()) / (2.0 * e);
        let k_max = (s_max.powf(1.5) / (1.5 * PI)).ceil() as usize;
        let breaks: Vec<f64> = (0..=k_max).rev().map(|k| -half_period(k)).chain([AI_DECAY_CUT]).collect();
        let q = integrate_with_breaks(
            |s| erf_ratio(chi, s) * (ai(s) * (-e * s * s).exp()),
            &breaks,
            Tol { max_panels: 20 * k_max + 4000, ..Tol::new(1e-13, 1e-11) },
        );
        if !q.converged {
            flags.push(Flag::QuadratureLimit { err_est: q.err });
        }
        values.push(q.value);
    }
    let (d1, d2) = ((values[0] - values[1]).norm(), (values[1] - values[2]).norm());
    if d2 > d1 && d2 > 1e-12 * values[2].norm() {
        flags.push(Flag::NotConverged(format!("epsilon ladder {ladder:?} diverges: {values:?}")));
    }
    let r1 = 2.0 * values[1] - values[0];
    let r2 = 2.0 * values[2] - values[1];
    let lhs = (4.0 * r2 - r1) / 3.0;
    let detail = format!("Gaussian weight exp(-eps sigma^2), eps ladder {ladder:?}, Richardson order 2");
    Ok(Flagged::with(IdentityReport::new(lhs, rhs, Some(Regularization { eps: ladder.to_vec(), values }), detail), flags))
}
