//! Decay rates and level shifts from ψ(0, t), the density proxy, ripple
//! detection and the fit of the mixing weight.

use crate::approx::{decay_closed_psi0, DecayAnsatz, DecayForm};
use crate::error::domain;
use crate::{ComplexSeries, Flag, Flagged, PhysParams, Result, TimeGrid};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const TINY_AMPLITUDE: f64 = 1e-12;
/// Phase advance per step above which the grid is taken as unresolved.
const PHASE_STEP_LIMIT: f64 = 0.5 * PI;
/// Half-width of the plateau filter in units of its standard deviation.
const FILTER_REACH: f64 = 4.0;
const PLATEAU_FRACTION: f64 = 0.25;
const SCAN_POINTS: usize = 101;
const C_TOL: f64 = 1e-3;

/// Single-number rate and shift read off the late part of a series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau {
    pub gamma: f64,
    pub delta: f64,
    /// Time window the medians were taken over.
    pub window: (f64, f64),
}

/// Γ_f(t) and Δ_f(t) from ψ(0, t) = √B·e^{−i𝒜(t)/ℏ}, 𝒜 = (E_b + Δ_f − iΓ_f/2)t.
///
/// Node 0 has no defined rate or shift and holds NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct RateShiftSeries {
    pub grid: TimeGrid,
    pub gamma: Vec<f64>,
    pub delta: Vec<f64>,
    pub phase_unwrapped: Vec<f64>,
    pub plateau: Option<Plateau>,
}

/// Continuous phase by nearest-branch continuation. Returns the index of the
/// first step exceeding [`PHASE_STEP_LIMIT`], if any.
fn unwrap_phase(values: &[C64]) -> (Vec<f64>, Option<usize>) {
    let mut out = Vec::with_capacity(values.len());
    let mut jump = None;
    let mut prev = 0.0;
    for (i, v) in values.iter().enumerate() {
        let raw = v.arg();
        let p = if i == 0 {
            raw
        } else {
            let d = raw - prev;
            let d = d - 2.0 * PI * (d / (2.0 * PI)).round();
            if d.abs() > PHASE_STEP_LIMIT && jump.is_none() {
                jump = Some(i);
            }
            prev + d
        };
        out.push(p);
        prev = p;
    }
    (out, jump)
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Plateau Γ̄, Δ̄ from the local rate of the demodulated, Gaussian-smoothed
/// series (filter width ℏ/|E_b|), as medians over the last quarter of the
/// region where the filter fits.
fn plateau(series: &ComplexSeries, params: &PhysParams) -> Option<Plateau> {
    let grid = series.grid;
    let h = grid.h();
    let hb = params.hbar;
    let width = hb / params.e_b().abs();
    let m = (FILTER_REACH * width / h).round() as usize;
    let n = grid.len();
    if n < 2 * m + 8 {
        return None;
    }
    let kernel: Vec<f64> = (0..=2 * m).map(|j| (-0.5 * ((j as f64 - m as f64) * h / width).powi(2)).exp()).collect();
    let norm: f64 = kernel.iter().sum();
    let eb = params.e_b();
    let demod: Vec<C64> =
        series.values.iter().enumerate().map(|(i, v)| v * C64::from_polar(1.0, eb * grid.node(i) / hb)).collect();
    let smooth: Vec<C64> = (m..n - m)
        .map(|c| kernel.iter().enumerate().map(|(j, k)| demod[c + j - m] * *k).sum::<C64>() / norm)
        .collect();
    let (phase, _) = unwrap_phase(&smooth);
    let logmod: Vec<f64> = smooth.iter().map(|v| v.norm().ln()).collect();
    let len = smooth.len();
    let start = ((1.0 - PLATEAU_FRACTION) * len as f64) as usize;
    let start = start.clamp(1, len - 2);
    let mut g = Vec::new();
    let mut d = Vec::new();
    for i in start..len - 1 {
        g.push(-2.0 * hb * (logmod[i + 1] - logmod[i - 1]) / (2.0 * h));
        d.push(-hb * (phase[i + 1] - phase[i - 1]) / (2.0 * h));
    }
    Some(Plateau {
        gamma: median(&mut g),
        delta: median(&mut d),
        window: (grid.node(m + start), grid.node(m + len - 2)),
    })
}

/// Γ_f(t), Δ_f(t) per node and the plateau values.
pub fn extract_rate_shift(series: &ComplexSeries, params: &PhysParams) -> Result<Flagged<RateShiftSeries>> {
    let rb = params.b().sqrt();
    if (series.values[0] - rb).norm() > 1e-9 {
        return Err(domain(format!("series must start at sqrt(B) = {rb}, got {}", series.values[0])));
    }
    let mut flags = Vec::new();
    if let Some(node) = series.values.iter().position(|v| v.norm() < TINY_AMPLITUDE) {
        flags.push(Flag::TinyAmplitude { node });
    }
    let (phase, jump) = unwrap_phase(&series.values);
    if let Some(node) = jump {
        flags.push(Flag::PhaseJump { node });
    }
    let hb = params.hbar;
    let eb = params.e_b();
    let mut gamma = vec![f64::NAN; series.values.len()];
    let mut delta = vec![f64::NAN; series.values.len()];
    for i in 1..series.values.len() {
        let t = series.grid.node(i);
        // 𝒜 = iℏ·Log(ψ/√B): Re 𝒜 = −ℏ·phase, Im 𝒜 = ℏ·ln|ψ/√B|.
        let re_a = -hb * (phase[i] - phase[0]);
        let im_a = hb * (series.values[i].norm() / rb).ln();
        delta[i] = re_a / t - eb;
        gamma[i] = -2.0 * im_a / t;
    }
    let value = RateShiftSeries { grid: series.grid, gamma, delta, phase_unwrapped: phase, plateau: plateau(series, params) };
    Ok(Flagged::with(value, flags))
}

/// 1 − |ψ(0, t)|²/B per node.
pub fn density_proxy(series: &ComplexSeries, params: &PhysParams) -> Vec<f64> {
    let b = params.b();
    series.values.iter().map(|v| 1.0 - v.norm_sqr() / b).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Max,
    Min,
}

/// Strict interior extrema of `values` on nodes with t in [t0, t1], from sign
/// changes of the forward difference.
pub fn extrema(values: &[f64], grid: &TimeGrid, t0: f64, t1: f64) -> Vec<(usize, Extremum)> {
    let idx: Vec<usize> = (0..values.len()).filter(|&i| (t0..=t1).contains(&grid.node(i))).collect();
    let mut out = Vec::new();
    for w in idx.windows(3) {
        let (a, b, c) = (values[w[0]], values[w[1]], values[w[2]]);
        if b > a && b > c {
            out.push((w[1], Extremum::Max));
        } else if b < a && b < c {
            out.push((w[1], Extremum::Min));
        }
    }
    out
}

/// True if a local maximum is followed by a local minimum in [t0, t1].
pub fn has_ripple(values: &[f64], grid: &TimeGrid, t0: f64, t1: f64) -> bool {
    let e = extrema(values, grid, t0, t1);
    e.iter().position(|x| x.1 == Extremum::Max).is_some_and(|i| e[i..].iter().any(|x| x.1 == Extremum::Min))
}

/// Mixing weight c ∈ [0, 1] minimising Σ(|combined(t_i; c)|² − |exact(t_i)|²)².
pub fn fit_c(exact: &ComplexSeries, params: &PhysParams, base: &DecayAnsatz) -> Result<Flagged<f64>> {
    // t_max ≥ 10 in natural units, i.e. five times ℏ/|E_b|.
    if exact.grid.t_max() * params.e_b().abs() / params.hbar < 5.0 {
        return Err(domain(format!("fit_c needs a series reaching t >= 10, got {}", exact.grid.t_max())));
    }
    let mut flags = Vec::new();
    let mut add = Vec::with_capacity(exact.values.len());
    let mut mul = Vec::with_capacity(exact.values.len());
    for t in exact.grid.nodes() {
        let a = decay_closed_psi0(params, t, base, DecayForm::Additive)?;
        let m = decay_closed_psi0(params, t, base, DecayForm::Multiplicative)?;
        flags.extend(a.flags);
        flags.extend(m.flags);
        add.push(a.value);
        mul.push(m.value);
    }
    let target = exact.abs2();
    let objective = |c: f64| -> f64 {
        add.iter()
            .zip(&mul)
            .zip(&target)
            .map(|((a, m), e)| ((c * a + (1.0 - c) * m).norm_sqr() - e).powi(2))
            .sum()
    };
    let scan: Vec<f64> = (0..SCAN_POINTS).map(|i| objective(i as f64 / (SCAN_POINTS - 1) as f64)).collect();
    let best = (0..SCAN_POINTS).min_by(|&i, &j| scan[i].total_cmp(&scan[j])).unwrap_or(0);
    let minima = (0..SCAN_POINTS)
        .filter(|&i| (i == 0 || scan[i] < scan[i - 1]) && (i + 1 == SCAN_POINTS || scan[i] < scan[i + 1]))
        .count();
    if minima > 1 {
        flags.push(Flag::Multimodal);
        return Ok(Flagged::with(best as f64 / (SCAN_POINTS - 1) as f64, flags));
    }
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.0, 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (objective(x1), objective(x2));
    while b - a > C_TOL {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = objective(x2);
        }
    }
    let mut c = 0.5 * (a + b);
    // The interval never contains its endpoints exactly; snap to them when
    // the minimum sits there.
    for edge in [0.0, 1.0] {
        if (c - edge).abs() <= C_TOL && objective(edge) <= objective(c) {
            c = edge;
        }
    }
    Ok(Flagged::with(c, flags))
}
