//! The exact engine: ψ(0, t) from the Lippmann–Schwinger equation at the well
//!
//! ψ(0,t) = φ_F(0,t) + λ∫₀ᵗ P(t−τ)·ψ(0,τ)/√(t−τ) dτ,   λ = (i/ℏ)V₀√(m/(2πiℏ)),
//!
//! with P(s) = e^{−iF²s³/(24mℏ)}. Product integration on a uniform grid gives a
//! causal O(N²) recurrence with Toeplitz weights.

mod reconstruct;

pub use reconstruct::{bound_overlap, ionization, norm_at, reconstruct_psi_x};

use crate::error::domain;
use crate::propagator::{cubic_phase, free_prefactor, vector_phase_origin, volkov_phi};
use crate::quad::gauss_legendre;
use crate::{Error, Flag, PhysParams, Result};
use num_complex::Complex64 as C64;

/// Uniform grid 0 = t₀ < … < t_N = t_max.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, n_steps: usize) -> Result<Self> {
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(domain(format!("t_max must be positive and finite, got {t_max}")));
        }
        if n_steps == 0 {
            return Err(domain("n_steps must be positive"));
        }
        Ok(Self { t_max, n_steps })
    }

    /// Grid with step as close to `h` as divides `t_max` evenly.
    pub fn with_step(t_max: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(domain(format!("step must be positive, got {h}")));
        }
        Self::new(t_max, ((t_max / h).round() as usize).max(1))
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn h(&self) -> f64 {
        self.t_max / self.n_steps as f64
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.n_steps {
            self.t_max
        } else {
            i as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.node(i))
    }

    /// The grid with every other node, if the step count is even.
    pub fn coarsened(&self) -> Option<Self> {
        (self.n_steps % 2 == 0 && self.n_steps >= 2)
            .then(|| Self { t_max: self.t_max, n_steps: self.n_steps / 2 })
    }
}

/// Complex samples on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSeries {
    pub grid: TimeGrid,
    pub values: Vec<C64>,
}

impl ComplexSeries {
    pub fn new(grid: TimeGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(domain(format!(
                "series has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite { node: i, t: grid.node(i) });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: TimeGrid, mut f: impl FnMut(f64) -> Result<C64>) -> Result<Self> {
        let values = grid.nodes().map(&mut f).collect::<Result<Vec<_>>>()?;
        Self::new(grid, values)
    }

    pub fn abs2(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }
}

/// How the smooth factor of the integrand is treated on each panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rule {
    /// P(s)·ψ interpolated linearly; only the Abel weight is integrated exactly.
    Linear,
    /// ψ interpolated linearly; the weights integrate P(s)/√s exactly
    /// (16-point Gauss–Legendre in √s per panel).
    #[default]
    PhaseWeighted,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Linear => "linear",
            Rule::PhaseWeighted => "phase-weighted",
        }
    }
}

/// Gauge in which the kernel at the origin is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Gauge {
    /// Lag-only kernel; Toeplitz fast path.
    #[default]
    Scalar,
    /// Kernel phase from the classical action between τ and t, evaluated per
    /// (t, τ) pair.
    Vector,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub rule: Rule,
    pub gauge: Gauge,
    /// Re-solve on the coarsened grid and report a Richardson error estimate.
    pub estimate_error: bool,
    pub err_threshold: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { rule: Rule::default(), gauge: Gauge::default(), estimate_error: true, err_threshold: 1e-3 }
    }
}

/// Phase change per panel above which the linear rule is flagged.
const LINEAR_PHASE_LIMIT: f64 = 0.5;
/// Phase change per panel above which 16-point weights are flagged.
const WEIGHTED_PHASE_LIMIT: f64 = 8.0;

#[derive(Debug, Clone, PartialEq)]
pub struct VolterraSolution {
    pub series: ComplexSeries,
    pub rule: Rule,
    pub gauge: Gauge,
    pub err_est: Option<f64>,
    pub flags: Vec<Flag>,
}

impl VolterraSolution {
    pub fn grid(&self) -> &TimeGrid {
        &self.series.grid
    }

    pub fn psi0(&self) -> &[C64] {
        &self.series.values
    }
}

/// λ = (i/ℏ)V₀√(m/(2πiℏ)).
pub(crate) fn lambda(params: &PhysParams) -> C64 {
    C64::i() * (params.v0 / params.hbar) * free_prefactor(params, 1.0)
}

/// φ_F(0, t) on the grid.
pub fn forcing(params: &PhysParams, grid: &TimeGrid) -> Result<Vec<C64>> {
    grid.nodes().map(|t| volkov_phi(0.0, t, params)).collect()
}

/// Neumaier-compensated complex sum.
#[derive(Default, Clone, Copy)]
struct Compensated {
    re: (f64, f64),
    im: (f64, f64),
}

impl Compensated {
    fn add(&mut self, z: C64) {
        fn step(acc: &mut (f64, f64), x: f64) {
            let t = acc.0 + x;
            if acc.0.abs() >= x.abs() {
                acc.1 += (acc.0 - t) + x;
            } else {
                acc.1 += (x - t) + acc.0;
            }
            acc.0 = t;
        }
        step(&mut self.re, z.re);
        step(&mut self.im, z.im);
    }

    fn value(&self) -> C64 {
        C64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// Abel weights of the hat functions on panel [kh, (k+1)h]:
/// (∫(s_b − s)/h·s^{−1/2}, ∫(s − s_a)/h·s^{−1/2}).
fn abel_weights(k: usize, h: f64) -> (f64, f64) {
    let a = (k as f64 * h).sqrt();
    let b = ((k + 1) as f64 * h).sqrt();
    let d = h / (a + b);
    (2.0 / 3.0 * d * d * (2.0 * b + a) / h, 2.0 / 3.0 * d * d * (b + 2.0 * a) / h)
}

/// Hat-function weights against q(s)/√s on panel [kh, (k+1)h], by Gauss–Legendre in u = √s.
fn weighted_panel(k: usize, h: f64, rule: &(Vec<f64>, Vec<f64>), q: impl Fn(f64) -> C64) -> (C64, C64) {
    let sa = k as f64 * h;
    let sb = (k + 1) as f64 * h;
    let ua = sa.sqrt();
    let ub = sb.sqrt();
    let half = 0.5 * h / (ua + ub);
    let mid = 0.5 * (ub + ua);
    let mut wa = C64::new(0.0, 0.0);
    let mut wb = C64::new(0.0, 0.0);
    for (x, w) in rule.0.iter().zip(&rule.1) {
        let u = mid + half * x;
        let s = u * u;
        let g = q(s) * (2.0 * w * half / h);
        wa += g * (sb - s);
        wb += g * (s - sa);
    }
    (wa, wb)
}

/// Toeplitz weights: c[k] multiplies ψ at lag k (k ≥ 0), `end[k]` is the
/// weight of ψ₀ when it sits at lag k + 1 (only the last panel touches it).
fn toeplitz_weights(params: &PhysParams, grid: &TimeGrid, rule: Rule) -> (Vec<C64>, Vec<C64>) {
    let n = grid.n_steps();
    let h = grid.h();
    let lam = lambda(params);
    let mut wa = vec![C64::new(0.0, 0.0); n];
    let mut wb = vec![C64::new(0.0, 0.0); n];
    match rule {
        Rule::Linear => {
            for k in 0..n {
                let (a, b) = abel_weights(k, h);
                wa[k] = cubic_phase(params, k as f64 * h) * a;
                wb[k] = cubic_phase(params, (k + 1) as f64 * h) * b;
            }
        }
        Rule::PhaseWeighted => {
            let gl = gauss_legendre(16);
            for k in 0..n {
                (wa[k], wb[k]) = weighted_panel(k, h, &gl, |s| cubic_phase(params, s));
            }
        }
    }
    let mut c = vec![C64::new(0.0, 0.0); n];
    c[0] = lam * wa[0];
    for k in 1..n {
        c[k] = lam * (wa[k] + wb[k - 1]);
    }
    let end = wb.iter().map(|w| lam * w).collect();
    (c, end)
}

fn phase_check(params: &PhysParams, grid: &TimeGrid, rule: Rule) -> Option<Flag> {
    let f = params.field;
    let per_panel = f * f * grid.t_max() * grid.t_max() * grid.h() / (8.0 * params.mass * params.hbar);
    let limit = match rule {
        Rule::Linear => LINEAR_PHASE_LIMIT,
        Rule::PhaseWeighted => WEIGHTED_PHASE_LIMIT,
    };
    (per_panel > limit).then_some(Flag::PhaseResolution { per_panel, limit })
}

fn march_toeplitz(params: &PhysParams, grid: &TimeGrid, rule: Rule, phi: &[C64]) -> Result<Vec<C64>> {
    let (c, end) = toeplitz_weights(params, grid, rule);
    let n = grid.n_steps();
    let mut psi = vec![C64::new(0.0, 0.0); n + 1];
    psi[0] = C64::new(params.b().sqrt(), 0.0);
    let diag = C64::new(1.0, 0.0) - c[0];
    for i in 1..=n {
        let mut acc = Compensated::default();
        acc.add(phi[i]);
        acc.add(end[i - 1] * psi[0]);
        for j in 1..i {
            acc.add(c[i - j] * psi[j]);
        }
        psi[i] = acc.value() / diag;
        if !(psi[i].re.is_finite() && psi[i].im.is_finite()) {
            return Err(Error::NonFinite { node: i, t: grid.node(i) });
        }
    }
    Ok(psi)
}

/// Per-pair assembly with the vector-gauge phase; O(N²) weights.
fn march_general(params: &PhysParams, grid: &TimeGrid, rule: Rule, phi: &[C64]) -> Result<Vec<C64>> {
    let n = grid.n_steps();
    let h = grid.h();
    let lam = lambda(params);
    let gl = gauss_legendre(16);
    let phase = |t: f64, tau: f64| vector_phase_origin(t, tau, params);
    let mut psi = vec![C64::new(0.0, 0.0); n + 1];
    psi[0] = C64::new(params.b().sqrt(), 0.0);
    let mut wa = vec![C64::new(0.0, 0.0); n];
    let mut wb = vec![C64::new(0.0, 0.0); n];
    for i in 1..=n {
        let t = grid.node(i);
        for k in 0..i {
            (wa[k], wb[k]) = match rule {
                Rule::Linear => {
                    let (a, b) = abel_weights(k, h);
                    (phase(t, t - k as f64 * h) * a, phase(t, t - (k + 1) as f64 * h) * b)
                }
                Rule::PhaseWeighted => weighted_panel(k, h, &gl, |s| phase(t, t - s)),
            };
        }
        let mut acc = Compensated::default();
        acc.add(phi[i]);
        acc.add(lam * wb[i - 1] * psi[0]);
        for j in 1..i {
            let k = i - j;
            acc.add(lam * (wa[k] + wb[k - 1]) * psi[j]);
        }
        psi[i] = acc.value() / (C64::new(1.0, 0.0) - lam * wa[0]);
        if !(psi[i].re.is_finite() && psi[i].im.is_finite()) {
            return Err(Error::NonFinite { node: i, t });
        }
    }
    Ok(psi)
}

fn march(params: &PhysParams, grid: &TimeGrid, opts: &SolveOptions, phi: &[C64]) -> Result<Vec<C64>> {
    match opts.gauge {
        Gauge::Scalar => march_toeplitz(params, grid, opts.rule, phi),
        Gauge::Vector => march_general(params, grid, opts.rule, phi),
    }
}

/// Solves for ψ(0, ·) with the forcing φ_F(0, ·).
pub fn solve_psi0(params: &PhysParams, grid: &TimeGrid, opts: &SolveOptions) -> Result<VolterraSolution> {
    let phi = forcing(params, grid)?;
    solve_with_forcing(params, grid, &phi, opts)
}

/// Solves with an arbitrary forcing sampled on the grid.
///
/// The error estimate re-solves on the coarsened grid using every other
/// forcing sample.
pub fn solve_with_forcing(
    params: &PhysParams,
    grid: &TimeGrid,
    phi: &[C64],
    opts: &SolveOptions,
) -> Result<VolterraSolution> {
    if phi.len() != grid.len() {
        return Err(domain(format!("forcing has {} samples for {} nodes", phi.len(), grid.len())));
    }
    let psi = march(params, grid, opts, phi)?;
    let mut flags: Vec<Flag> = phase_check(params, grid, opts.rule).into_iter().collect();
    let mut err_est = None;
    if opts.estimate_error {
        if let Some(coarse) = grid.coarsened() {
            let phi2: Vec<C64> = phi.iter().step_by(2).copied().collect();
            let psi2 = march(params, &coarse, opts, &phi2)?;
            let e = psi2
                .iter()
                .enumerate()
                .map(|(j, v)| (psi[2 * j] - v).norm())
                .fold(0.0, f64::max)
                / 3.0;
            if e > opts.err_threshold {
                flags.push(Flag::CoarseStep { err_est: e, threshold: opts.err_threshold });
            }
            err_est = Some(e);
        }
    }
    Ok(VolterraSolution {
        series: ComplexSeries::new(*grid, psi)?,
        rule: opts.rule,
        gauge: opts.gauge,
        err_est,
        flags,
    })
}
