use std::fmt;

/// Hard failures. Soft numerical problems are reported as [`Flag`]s instead.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("value not representable in f64: {0}")]
    Overflow(String),
    #[error("non-finite value at node {node} (t = {t})")]
    NonFinite { node: usize, t: f64 },
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

/// A numerical warning attached to an otherwise usable value.
#[derive(Debug, Clone, PartialEq)]
pub enum Flag {
    /// Requested accuracy could not be reached; the payload says where.
    PrecisionLoss(String),
    /// Estimated discretisation error above its threshold.
    CoarseStep { err_est: f64, threshold: f64 },
    /// Cubic kernel phase changes too much across one panel.
    PhaseResolution { per_panel: f64, limit: f64 },
    /// Adaptive quadrature hit its subdivision limit.
    QuadratureLimit { err_est: f64 },
    /// A finite-difference stencil crossed the branch point of β_f.
    StencilBranch { sigma: f64 },
    /// Multiplicative form has a vanishing denominator.
    Singular { t: f64 },
    /// |ψ| too small to take a logarithm.
    TinyAmplitude { node: usize },
    /// Phase advanced by more than π/2 between adjacent nodes.
    PhaseJump { node: usize },
    /// Objective sampled with more than one local minimum.
    Multimodal,
    /// Sequence acceleration or extrapolation did not settle.
    NotConverged(String),
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::PrecisionLoss(s) => write!(f, "precision loss: {s}"),
            Flag::CoarseStep { err_est, threshold } => {
                write!(f, "coarse step: err_est {err_est:.3e} > {threshold:.1e}")
            }
            Flag::PhaseResolution { per_panel, limit } => {
                write!(f, "kernel phase {per_panel:.3} rad per panel exceeds {limit}")
            }
            Flag::QuadratureLimit { err_est } => {
                write!(f, "quadrature subdivision limit, err_est {err_est:.3e}")
            }
            Flag::StencilBranch { sigma } => write!(f, "stencil crosses branch point at sigma = {sigma}"),
            Flag::Singular { t } => write!(f, "singular denominator at t = {t}"),
            Flag::TinyAmplitude { node } => write!(f, "|psi| below 1e-12 at node {node}"),
            Flag::PhaseJump { node } => write!(f, "phase step above pi/2 at node {node}"),
            Flag::Multimodal => write!(f, "objective not unimodal"),
            Flag::NotConverged(s) => write!(f, "not converged: {s}"),
        }
    }
}

/// A value together with the warnings raised while computing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Flagged<T> {
    pub value: T,
    pub flags: Vec<Flag>,
}

impl<T> Flagged<T> {
    pub fn clean(value: T) -> Self {
        Self { value, flags: Vec::new() }
    }

    pub fn with(value: T, flags: Vec<Flag>) -> Self {
        Self { value, flags }
    }

    pub fn is_clean(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Flagged<U> {
        Flagged { value: f(self.value), flags: self.flags }
    }
}
