//! Confluent hypergeometric function ₁F₁(1; b; z).

use crate::error::domain;
use crate::quad::{integrate, Tol};
use crate::{Flag, Flagged, Result};
use num_complex::Complex64 as C64;

/// Series condition number Σ|term|/|sum| above which the integral form is used.
const COND_SWITCH: f64 = 1e3;
/// Cancellation left after the fallback above which the result is flagged.
const COND_FLAG: f64 = 1e4;

/// Forward series and its condition number.
fn series(b: f64, z: C64) -> (C64, f64) {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_sum = 1.0;
    let mut k = 0usize;
    loop {
        term *= z / (b + k as f64);
        sum += term;
        abs_sum += term.norm();
        k += 1;
        let past_peak = (k as f64) + b > z.norm();
        if past_peak && term.norm() < 1e-17 * sum.norm() || k > 5000 {
            break;
        }
    }
    (sum, abs_sum / sum.norm())
}

/// 6(b−1)∫₀¹ e^{z(1−v⁶)} v^{6b−7} dv, valid for b > 1.
fn integral(b: f64, z: C64) -> (C64, bool) {
    let p = 6.0 * b - 7.0;
    // The integrand is bounded by e^{max(Re z, 0)}.
    let scale = z.re.max(0.0).exp();
    let int = integrate(
        |v| (z * (1.0 - v.powi(6))).exp() * v.powf(p),
        0.0,
        1.0,
        Tol::new(1e-15 * scale, 1e-14),
    );
    (int.value * (6.0 * (b - 1.0)), int.converged)
}

/// ₁F₁(1; b; z) for b > 0.
///
/// The forward series is used while it is well conditioned. Otherwise b > 1
/// goes through the integral representation (smooth on [0, 1] for the
/// b families m + 7/6, n + 3/2, m + 11/6) and 0 < b ≤ 1 through
/// ₁F₁(1; b; z) = 1 + (z/b)·₁F₁(1; b + 1; z).
pub fn hyp1f1_one(b: f64, z: C64) -> Result<Flagged<C64>> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(domain(format!("hyp1f1_one needs b > 0, got {b}")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(domain(format!("hyp1f1_one argument not finite: {z}")));
    }
    let (s, cond) = series(b, z);
    if cond <= COND_SWITCH {
        return Ok(Flagged::clean(s));
    }
    if b > 1.0 {
        let (v, ok) = integral(b, z);
        let flags = if ok {
            vec![]
        } else {
            vec![Flag::PrecisionLoss(format!("1F1(1; {b}; {z}) integral did not converge"))]
        };
        return Ok(Flagged::with(v, flags));
    }
    let up = hyp1f1_one(b + 1.0, z)?;
    let tail = z / b * up.value;
    let v = 1.0 + tail;
    let mut flags = up.flags;
    if (1.0 + tail.norm()) / v.norm() > COND_FLAG {
        flags.push(Flag::PrecisionLoss(format!("1F1(1; {b}; {z}) recurrence cancels")));
    }
    Ok(Flagged::with(v, flags))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_matches_series_where_both_are_good() {
        for b in [7.0 / 6.0, 1.5, 11.0 / 6.0, 13.0 / 6.0] {
            for z in [C64::new(1.0, 0.0), C64::new(-2.0, 1.0), C64::new(0.0, 3.0)] {
                let (s, _) = series(b, z);
                let (i, ok) = integral(b, z);
                assert!(ok);
                assert!((s - i).norm() < 1e-13 * s.norm(), "b={b} z={z}: {s} {i}");
            }
        }
    }
}
