//! Physical parameters and the kinematic scales induced by the field.

use crate::error::domain;
use crate::Result;

/// Parameters of the delta well −V0·δ(x) with a field F switched on at t = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub hbar: f64,
    pub mass: f64,
    pub v0: f64,
    pub field: f64,
}

impl PhysParams {
    pub fn new(hbar: f64, mass: f64, v0: f64, field: f64) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("mass", mass), ("V0", v0), ("F", field)] {
            if !v.is_finite() {
                return Err(domain(format!("{name} must be finite, got {v}")));
            }
        }
        if hbar <= 0.0 || mass <= 0.0 || v0 <= 0.0 {
            return Err(domain("hbar, mass and V0 must be positive"));
        }
        if field < 0.0 {
            return Err(domain(format!("F must be non-negative, got {field}")));
        }
        Ok(Self { hbar, mass, v0, field })
    }

    /// ℏ = m = B = 1 with relative field `f` (so F = f).
    pub fn natural(f: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, f)
    }

    /// Inverse localisation length B = mV0/ℏ².
    pub fn b(&self) -> f64 {
        self.mass * self.v0 / (self.hbar * self.hbar)
    }

    /// Bound-state energy −ℏ²B²/(2m).
    pub fn e_b(&self) -> f64 {
        let b = self.b();
        -self.hbar * self.hbar * b * b / (2.0 * self.mass)
    }

    /// Relative field strength mF/(ℏ²B³).
    pub fn f(&self) -> f64 {
        let b = self.b();
        self.mass * self.field / (self.hbar * self.hbar * b * b * b)
    }

    /// Bound state √B·e^{−B|x|}.
    pub fn bound_state(&self, x: f64) -> f64 {
        let b = self.b();
        b.sqrt() * (-b * x.abs()).exp()
    }

    pub fn field_scales(&self, t: f64) -> Result<FieldScales> {
        if !(t >= 0.0) {
            return Err(domain(format!("t must be non-negative, got {t}")));
        }
        Ok(FieldScales::at(self, t))
    }

    /// Dimensionless time η = ½(F²/(ℏm))^{1/3}·elapsed.
    pub fn eta(&self, elapsed: f64) -> f64 {
        0.5 * (self.field * self.field / (self.hbar * self.mass)).cbrt() * elapsed
    }
}

/// Classical momentum, displacement and action gained in the field by time t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldScales {
    pub p_c: f64,
    pub x_c: f64,
    pub s_c: f64,
}

impl FieldScales {
    pub(crate) fn at(p: &PhysParams, t: f64) -> Self {
        let f = p.field;
        Self {
            p_c: f * t,
            x_c: f * t * t / (2.0 * p.mass),
            s_c: f * f * t * t * t / (6.0 * p.mass),
        }
    }
}
