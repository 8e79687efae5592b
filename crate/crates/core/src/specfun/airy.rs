//! Airy function Ai on the real line.
//!
//! On [−30, 12] values come from a table of (Ai, Ai′) at spacing 0.5 and a
//! Taylor re-expansion about the nearest node, using the recurrence implied by
//! y″ = xy. The table is seeded with the exact values at 0 and marched towards
//! −30. The decaying side is seeded at 12 from the asymptotic expansion and
//! marched back towards 0, the direction in which Ai dominates Bi. Beyond the
//! table the asymptotic expansions take over.

use crate::error::domain;
use crate::Result;
use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

const AI0: f64 = 0.355_028_053_887_817_239_3;
const AIP0: f64 = -0.258_819_403_792_806_798_4;
const LO: f64 = -30.0;
const HI: f64 = 12.0;
const STEP: f64 = 0.5;
const NODES: usize = 85;

/// Taylor expansion of the Airy ODE solution through (a, y, y′), evaluated at a + d.
fn taylor(a: f64, y: f64, yp: f64, d: f64) -> (f64, f64) {
    let mut c = [0.0f64; 3];
    c[0] = y;
    c[1] = yp;
    c[2] = 0.5 * a * y;
    let mut val = y + yp * d + c[2] * d * d;
    let mut der = yp + 2.0 * c[2] * d;
    let mut dn = d * d;
    let scale = y.abs() + yp.abs() + f64::MIN_POSITIVE;
    let mut small = 0;
    for n in 3..200 {
        let cn = (a * c[(n - 2) % 3] + c[(n - 3) % 3]) / (n as f64 * (n - 1) as f64);
        c[n % 3] = cn;
        let dterm = n as f64 * cn * dn;
        der += dterm;
        dn *= d;
        let term = cn * dn;
        val += term;
        if term.abs().max(dterm.abs()) < 1e-18 * scale {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (val, der)
}

fn u_coeffs(n: usize) -> Vec<f64> {
    let mut u = vec![1.0];
    for k in 1..n {
        let kf = k as f64;
        let prev = u[k - 1];
        u.push(prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / (216.0 * kf * (2.0 * kf - 1.0)));
    }
    u
}

fn v_coeff(u: &[f64], k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        let kf = k as f64;
        -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k]
    }
}

/// Sums Σ(−1)^j c_k ζ^{−k} over k = offset, offset + 2, …,
/// stopping at the smallest term.
fn asym_sum(coef: impl Fn(usize) -> f64, zeta: f64, offset: usize, nmax: usize) -> f64 {
    let mut s = 0.0;
    let mut last = f64::INFINITY;
    let mut sign = 1.0;
    let mut k = offset;
    while k < nmax {
        let t = coef(k) / zeta.powi(k as i32);
        if t.abs() > last {
            break;
        }
        s += sign * t;
        last = t.abs();
        if last < 1e-17 * s.abs() {
            break;
        }
        sign = -sign;
        k += 2;
    }
    s
}

fn asym_pos(x: f64) -> (f64, f64) {
    let u = u_coeffs(60);
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let q = x.sqrt().sqrt();
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let mut su = 0.0;
    let mut sv = 0.0;
    let mut last = f64::INFINITY;
    for k in 0..60 {
        let zk = zeta.powi(-(k as i32));
        let tu = u[k] * zk;
        if tu.abs() > last {
            break;
        }
        last = tu.abs();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        su += sign * tu;
        sv += sign * v_coeff(&u, k) * zk;
        if last < 1e-17 {
            break;
        }
    }
    (e / q * su, -e * q * sv)
}

fn asym_neg(x: f64) -> (f64, f64) {
    let z = -x;
    let u = u_coeffs(80);
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let q = z.sqrt().sqrt();
    let (s, c) = (zeta - FRAC_PI_4).sin_cos();
    let n = u.len();
    let ue = asym_sum(|k| u[k], zeta, 0, n);
    let uo = asym_sum(|k| u[k], zeta, 1, n);
    let ve = asym_sum(|k| v_coeff(&u, k), zeta, 0, n);
    let vo = asym_sum(|k| v_coeff(&u, k), zeta, 1, n);
    let rp = PI.sqrt();
    (
        (c * ue + s * uo) / (rp * q),
        q / rp * (s * ve - c * vo),
    )
}

fn table() -> &'static [(f64, f64); NODES] {
    static TABLE: OnceLock<[(f64, f64); NODES]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [(0.0, 0.0); NODES];
        let zero = ((0.0 - LO) / STEP).round() as usize;
        t[zero] = (AI0, AIP0);
        for k in (0..zero).rev() {
            let a = LO + (k + 1) as f64 * STEP;
            let (y, yp) = t[k + 1];
            t[k] = taylor(a, y, yp, -STEP);
        }
        t[NODES - 1] = asym_pos(HI);
        for k in (zero + 1..NODES - 1).rev() {
            let a = LO + (k + 1) as f64 * STEP;
            let (y, yp) = t[k + 1];
            t[k] = taylor(a, y, yp, -STEP);
        }
        t
    })
}

/// (Ai(s), Ai′(s)).
pub fn airy_ai_pair(s: f64) -> Result<(f64, f64)> {
    if !s.is_finite() {
        return Err(domain(format!("airy_ai argument not finite: {s}")));
    }
    if s > HI {
        return Ok(asym_pos(s));
    }
    if s < LO {
        return Ok(asym_neg(s));
    }
    let k = ((s - LO) / STEP).round() as usize;
    let a = LO + k as f64 * STEP;
    let (y, yp) = table()[k];
    Ok(taylor(a, y, yp, s - a))
}

/// Ai(s).
pub fn airy_ai(s: f64) -> Result<f64> {
    airy_ai_pair(s).map(|p| p.0)
}
