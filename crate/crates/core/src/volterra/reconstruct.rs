//! ψ(x, t) away from the well, the bound-state overlap and the norm.
//!
//! For x ≠ 0 the kernel carries e^{ia/s}/√s with a = mx²/(2ℏ), which
//! oscillates without bound as s → 0. That factor is integrated exactly
//! against linear interpolants; the remaining field phase and ψ(0, ·) form the
//! interpolated smooth part.

use super::{lambda, VolterraSolution};
use crate::error::domain;
use crate::model::FieldScales;
use crate::propagator::volkov_phi;
use crate::quad::{integrate_with_breaks, Tol};
use crate::specfun::erfcx;
use crate::{Flag, Flagged, PhysParams, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// a/S beyond which the moments come from their asymptotic series.
const ASYM_RATIO: f64 = 36.0;
/// a/S beyond which erfcx goes through its continued fraction.
const CF_RATIO: f64 = 4.0;
const CF_TERMS: usize = 160;
const OVERLAP_REACH: f64 = 40.0;
/// Largest smooth-part phase change allowed across one sub-panel.
const SUB_PHASE: f64 = 0.1;

/// e^{−ia/S}·(∫₀^S s^{−1/2}e^{ia/s} ds, ∫₀^S s^{1/2}e^{ia/s} ds) for a ≥ 0.
fn scaled_moments(a: f64, s: f64) -> (C64, C64) {
    let rs = s.sqrt();
    if a == 0.0 {
        return (C64::new(2.0 * rs, 0.0), C64::new(2.0 / 3.0 * s * rs, 0.0));
    }
    if a >= ASYM_RATIO * s {
        let r = C64::new(0.0, s / a);
        let series = |nu2: f64| {
            let mut term = C64::new(1.0, 0.0);
            let mut sum = term;
            // Divergent series: stop at the smallest term.
            for n in 0..200 {
                let next = term * (-r * (nu2 + n as f64));
                if next.norm() >= term.norm() || next.norm() < 1e-17 * sum.norm() {
                    break;
                }
                term = next;
                sum += term;
            }
            sum
        };
        return (rs * r * series(1.5), s * rs * r * series(2.5));
    }
    let w = C64::from_polar((a / s).sqrt(), -PI / 4.0);
    if a < CF_RATIO * s {
        let r0 = 2.0 * rs * (1.0 - PI.sqrt() * w * erfcx(w));
        let r1 = 2.0 / 3.0 * s * rs * (1.0 - w * w * r0 / rs);
        return (r0, r1);
    }
    // √π·w·erfcx(w) = w/(w + K₁) with K_n = (n/2)/(w + K_{n+1}); the two
    // differences below are rewritten so that nothing cancels.
    let mut k = [C64::new(0.0, 0.0); 3];
    for n in (1..=CF_TERMS).rev() {
        k[0] = (n as f64 / 2.0) / (w + k[0]);
        if n <= 2 {
            k[n] = k[0];
        }
    }
    let (k1, k2) = (k[1], k[2]);
    let r0 = 2.0 * rs * k1 / (w + k1);
    let r1 = 2.0 / 3.0 * s * rs * (1.0 + 2.0 * w * k2) / (2.0 * (w + k2) * (w + k1));
    (r0, r1)
}

fn moments(a: f64, s: f64) -> (C64, C64) {
    if s == 0.0 {
        return (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    }
    let (r0, r1) = scaled_moments(a, s);
    let e = C64::from_polar(1.0, a / s);
    (e * r0, e * r1)
}

/// ψ(0, τ) by linear interpolation between nodes.
fn psi0_at(sol: &VolterraSolution, tau: f64) -> C64 {
    let h = sol.grid().h();
    let psi = sol.psi0();
    let u = (tau / h).max(0.0);
    let j = (u.floor() as usize).min(psi.len() - 2);
    let w = u - j as f64;
    psi[j] * (1.0 - w) + psi[j + 1] * w
}

/// ψ_F(x, t_node) from the solved ψ(0, ·).
pub fn reconstruct_psi_x(sol: &VolterraSolution, params: &PhysParams, x: f64, node: usize) -> Result<C64> {
    psi_x(sol, params, x, node, x.abs())
}

/// Sub-panels are sized for |x| = `x_scale`, so that within one window the
/// result is a smooth function of x.
fn psi_x(sol: &VolterraSolution, params: &PhysParams, x: f64, node: usize, x_scale: f64) -> Result<C64> {
    let grid = sol.grid();
    if node >= grid.len() {
        return Err(domain(format!("node {node} outside grid of {} nodes", grid.len())));
    }
    if x == 0.0 {
        return Ok(sol.psi0()[node]);
    }
    if node == 0 {
        return Ok(C64::new(params.bound_state(x), 0.0));
    }
    let t = grid.node(node);
    let h = grid.h();
    let (hb, m, f) = (params.hbar, params.mass, params.field);
    let a = m * x * x / (2.0 * hb);
    let smooth = |s: f64| {
        let phase = (f * x * s / 2.0 - f * f * s * s * s / (24.0 * m)) / hb;
        C64::from_polar(1.0, phase) * psi0_at(sol, t - s)
    };
    let mut acc = C64::new(0.0, 0.0);
    let mut j_prev = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    let mut g_prev = smooth(0.0);
    for k in 0..node {
        let sa = k as f64 * h;
        let sb = if k + 1 == node { t } else { (k + 1) as f64 * h };
        let rate = ((f * x_scale).abs() / 2.0 + f * f * sb * sb / (8.0 * m)) / hb;
        let sub = ((rate * (sb - sa) / SUB_PHASE).ceil() as usize).max(1);
        let d = (sb - sa) / sub as f64;
        for l in 0..sub {
            let u0 = sa + l as f64 * d;
            let u1 = if l + 1 == sub { sb } else { sa + (l + 1) as f64 * d };
            let j1 = moments(a, u1);
            let m0 = j1.0 - j_prev.0;
            let m1 = j1.1 - j_prev.1;
            let g1 = smooth(u1);
            acc += (g_prev * (u1 * m0 - m1) + g1 * (m1 - u0 * m0)) / (u1 - u0);
            j_prev = j1;
            g_prev = g1;
        }
    }
    Ok(volkov_phi(x, t, params)? + lambda(params) * acc)
}

/// Spatial cut-off x_c(t) + 40/B + 10√(ℏt/m).
fn spatial_cutoff(params: &PhysParams, t: f64) -> (f64, f64) {
    let xc = FieldScales::at(params, t).x_c;
    (xc, xc + 40.0 / params.b() + 10.0 * (params.hbar * t / params.mass).sqrt())
}

fn breaks(params: &PhysParams, t: f64, reach: f64) -> Vec<f64> {
    let (xc, l) = spatial_cutoff(params, t);
    let l = l.min(reach);
    let mut b = vec![-l, 0.0];
    if xc > 0.0 && xc < l {
        b.push(xc);
    }
    b.push(l);
    b
}

/// ⟨ψ_b | ψ_F(t_node)⟩ by adaptive quadrature on the truncated line. The
/// weight ψ_b is below e^{−40} beyond |x| = 40/B, which bounds the window.
pub fn bound_overlap(sol: &VolterraSolution, params: &PhysParams, node: usize) -> Result<Flagged<C64>> {
    let t = sol.grid().node(node);
    if node == 0 {
        return Ok(Flagged::clean(C64::new(1.0, 0.0)));
    }
    let b = breaks(params, t, OVERLAP_REACH / params.b());
    let scale = b[b.len() - 1];
    let mut failure = None;
    let res = integrate_with_breaks(
        |x| match psi_x(sol, params, x, node, scale) {
            Ok(v) => v * params.bound_state(x),
            Err(e) => {
                failure.get_or_insert(e);
                C64::new(0.0, 0.0)
            }
        },
        &b,
        Tol::new(1e-9, 1e-9),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let flags = if res.converged { vec![] } else { vec![Flag::QuadratureLimit { err_est: res.err }] };
    Ok(Flagged::with(res.value, flags))
}

/// Ionization probability 1 − |⟨ψ_b|ψ_F(t)⟩|².
pub fn ionization(sol: &VolterraSolution, params: &PhysParams, node: usize) -> Result<Flagged<f64>> {
    Ok(bound_overlap(sol, params, node)?.map(|o| 1.0 - o.norm_sqr()))
}

/// ∫|ψ_F(x, t_node)|² dx on the truncated line.
pub fn norm_at(sol: &VolterraSolution, params: &PhysParams, node: usize) -> Result<Flagged<f64>> {
    let t = sol.grid().node(node);
    let b = breaks(params, t, f64::INFINITY);
    let scale = b[b.len() - 1];
    let mut failure = None;
    let res = integrate_with_breaks(
        |x| match psi_x(sol, params, x, node, scale) {
            Ok(v) => C64::new(v.norm_sqr(), 0.0),
            Err(e) => {
                failure.get_or_insert(e);
                C64::new(0.0, 0.0)
            }
        },
        &b,
        Tol::new(1e-8, 1e-8),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let flags = if res.converged { vec![] } else { vec![Flag::QuadratureLimit { err_est: res.err }] };
    Ok(Flagged::with(res.value.re, flags))
}
