//! Free and field propagators, the Volkov homogeneous term and the gauge phase.

use crate::error::domain;
use crate::model::{FieldScales, PhysParams};
use crate::specfun::{erfcx, moshinsky};
use crate::Result;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Arguments of K(x, t | 0, τ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub x: f64,
    pub t: f64,
    pub tau: f64,
}

/// A wavefunction value at (x, t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSample {
    pub x: f64,
    pub t: f64,
    pub value: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeDirection {
    ScalarToVector,
    VectorToScalar,
}

fn elapsed(p: &KernelPoint) -> Result<f64> {
    let s = p.t - p.tau;
    if !(s > 0.0) || !s.is_finite() {
        return Err(domain(format!("kernel needs t > tau, got t = {}, tau = {}", p.t, p.tau)));
    }
    Ok(s)
}

/// √(m/(2πiℏs)) on the principal branch.
pub(crate) fn free_prefactor(params: &PhysParams, s: f64) -> C64 {
    let r = (params.mass / (2.0 * PI * params.hbar * s)).sqrt();
    C64::from_polar(r, -PI / 4.0)
}

/// Cubic field phase e^{−iF²s³/(24mℏ)} of the kernel at coincident points.
pub fn cubic_phase(params: &PhysParams, s: f64) -> C64 {
    let f = params.field;
    C64::from_polar(1.0, -f * f * s * s * s / (24.0 * params.mass * params.hbar))
}

/// K₀(x, t | 0, τ).
pub fn free_kernel(p: KernelPoint, params: &PhysParams) -> Result<C64> {
    let s = elapsed(&p)?;
    let arg = params.mass * p.x * p.x / (2.0 * params.hbar * s);
    Ok(free_prefactor(params, s) * C64::from_polar(1.0, arg))
}

/// K_F(x, t | 0, τ) in the scalar gauge.
pub fn field_kernel(p: KernelPoint, params: &PhysParams) -> Result<C64> {
    let s = elapsed(&p)?;
    let f = params.field;
    let phase = (f * p.x * s / 2.0 - f * f * s * s * s / (24.0 * params.mass)) / params.hbar;
    Ok(free_kernel(p, params)? * C64::from_polar(1.0, phase))
}

/// Vector-gauge kernel K_v(0, t | 0, τ), built from the classical action and
/// displacement accumulated between τ and t.
pub fn vector_kernel_origin(t: f64, tau: f64, params: &PhysParams) -> Result<C64> {
    let s = elapsed(&KernelPoint { x: 0.0, t, tau })?;
    Ok(free_prefactor(params, s) * vector_phase_origin(t, tau, params))
}

/// Unimodular part of [`vector_kernel_origin`]; 1 at t = τ.
pub(crate) fn vector_phase_origin(t: f64, tau: f64, params: &PhysParams) -> C64 {
    let s = t - tau;
    if s <= 0.0 {
        return C64::new(1.0, 0.0);
    }
    let a = FieldScales::at(params, t);
    let b = FieldScales::at(params, tau);
    let dx = a.x_c - b.x_c;
    C64::from_polar(1.0, (-(a.s_c - b.s_c) + params.mass * dx * dx / (2.0 * s)) / params.hbar)
}

/// Volkov term φ_F(x, t): the bound state propagated in the field without the well.
pub fn volkov_phi(x: f64, t: f64, params: &PhysParams) -> Result<C64> {
    if !(t >= 0.0) || !t.is_finite() || !x.is_finite() {
        return Err(domain(format!("volkov_phi needs finite x and t >= 0, got x = {x}, t = {t}")));
    }
    if t == 0.0 {
        return Ok(C64::new(params.bound_state(x), 0.0));
    }
    let b = params.b();
    let sc = FieldScales::at(params, t);
    let k = C64::new(0.0, -b);
    let tr = params.hbar * t / params.mass;
    let m1 = moshinsky(x - sc.x_c, k, tr)?;
    let m2 = moshinsky(sc.x_c - x, k, tr)?;
    Ok(b.sqrt() * C64::from_polar(1.0, (x * sc.p_c - sc.s_c) / params.hbar) * (m1 + m2))
}

/// φ₀(0, t) = √B·e^{−iE_b t/ℏ}·erfc(√(−iE_b t/ℏ)).
pub fn phi0_field_free(t: f64, params: &PhysParams) -> Result<C64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("phi0_field_free needs t >= 0, got {t}")));
    }
    let w = (C64::new(0.0, -params.e_b() * t / params.hbar)).sqrt();
    Ok(params.b().sqrt() * erfcx(w))
}

/// Applies ψ_F = e^{ixp_c/ℏ}·ψ_v or its inverse.
pub fn gauge_transform(sample: WaveSample, params: &PhysParams, dir: GaugeDirection) -> WaveSample {
    let theta = sample.x * params.field * sample.t / params.hbar;
    let phase = match dir {
        GaugeDirection::VectorToScalar => C64::from_polar(1.0, theta),
        GaugeDirection::ScalarToVector => C64::from_polar(1.0, -theta),
    };
    WaveSample { value: sample.value * phase, ..sample }
}
