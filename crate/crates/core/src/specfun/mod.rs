//! Special functions: complex erfc, Airy Ai, ₁F₁(1; b; z) and the Moshinsky function.

mod airy;
mod hyp;

pub use airy::{airy_ai, airy_ai_pair};
pub use hyp::hyp1f1_one;

use crate::error::domain;
use crate::{Error, Result};
use errorfunctions::ComplexErrorFunctions;
use num_complex::Complex64 as C64;

/// Scaled complementary error function e^{z²}·erfc(z).
///
/// Bounded by 1/(|z|√π) asymptotically in the right half-plane. On the left
/// half-plane it grows like 2e^{z²}.
pub fn erfcx(z: C64) -> C64 {
    z.erfcx()
}

/// e^{e}·erfc(w), evaluated without forming erfc(w) on its own.
///
/// The exponent e − w² is combined before exponentiation, so a huge prefactor
/// and a tiny erfc never meet as separate floating-point numbers.
pub fn exp_times_erfc(e: C64, w: C64) -> C64 {
    if w.re >= 0.0 {
        (e - w * w).exp() * w.erfcx()
    } else {
        2.0 * e.exp() - (e - w * w).exp() * (-w).erfcx()
    }
}

/// erfc(z). Results below the normal range return 0.
pub fn cerfc(z: C64) -> Result<C64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(domain(format!("cerfc argument not finite: {z}")));
    }
    let v = exp_times_erfc(C64::new(0.0, 0.0), z);
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Overflow(format!("erfc({z})")));
    }
    Ok(v)
}

/// erf(z).
pub fn cerf(z: C64) -> Result<C64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(domain(format!("cerf argument not finite: {z}")));
    }
    let v = z.erf();
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Overflow(format!("erf({z})")));
    }
    Ok(v)
}

/// Moshinsky function M(x; k; t) = ½·e^{i(kx − k²t/2)}·erfc((x − kt)/√(2it)).
pub fn moshinsky(x: f64, k: C64, t: f64) -> Result<C64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain(format!("moshinsky needs t > 0, got {t}")));
    }
    let i = C64::i();
    let root = (2.0 * i * t).sqrt();
    let w = (x - k * t) / root;
    let e = i * (k * x - 0.5 * k * k * t);
    let v = 0.5 * exp_times_erfc(e, w);
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Overflow(format!("M({x}; {k}; {t})")));
    }
    Ok(v)
}

/// Limit of M(x; k; t) as t → 0⁺: e^{ikx} for x < 0, 0 for x > 0, half at x = 0.
pub fn moshinsky_t0(x: f64, k: C64) -> C64 {
    let plane = (C64::i() * k * x).exp();
    if x < 0.0 {
        plane
    } else if x > 0.0 {
        C64::new(0.0, 0.0)
    } else {
        0.5 * plane
    }
}
