use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Method {
    Exact,
    FirstScheme,
    DecayAdditive,
    DecayMultiplicative,
    DecayCombined,
    ExpAnsatz,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::FirstScheme => "first_scheme",
            Method::DecayAdditive => "decay_additive",
            Method::DecayMultiplicative => "decay_multiplicative",
            Method::DecayCombined => "decay_combined",
            Method::ExpAnsatz => "exp_ansatz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Mixing weight: fixed, or fitted against the exact solve on [0, 10].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CSetting {
    Fixed(f64),
    Fit,
}

/// Where Γ and Δ of the decay ansatz come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnsatzSource {
    Wkb,
    /// Plateau of the exact solve.
    Fit,
    Explicit { gamma: f64, delta: f64 },
}

impl fmt::Display for CSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CSetting::Fixed(c) => write!(f, "{c}"),
            CSetting::Fit => write!(f, "fit"),
        }
    }
}

impl fmt::Display for AnsatzSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnsatzSource::Wkb => write!(f, "wkb"),
            AnsatzSource::Fit => write!(f, "fit"),
            AnsatzSource::Explicit { gamma, delta } => write!(f, "{gamma},{delta}"),
        }
    }
}

pub fn parse_c(s: &str) -> Result<CSetting, String> {
    if s == "fit" {
        return Ok(CSetting::Fit);
    }
    match s.parse::<f64>() {
        Ok(c) if (0.0..=1.0).contains(&c) => Ok(CSetting::Fixed(c)),
        _ => Err(format!("c: expected a number in [0, 1] or \"fit\", got {s:?}")),
    }
}

pub fn parse_ansatz(s: &str) -> Result<AnsatzSource, String> {
    match s {
        "wkb" => return Ok(AnsatzSource::Wkb),
        "fit" => return Ok(AnsatzSource::Fit),
        _ => {}
    }
    let bad = || format!("ansatz: expected wkb, fit or GAMMA,DELTA, got {s:?}");
    let (g, d) = s.split_once(',').ok_or_else(bad)?;
    let gamma: f64 = g.trim().parse().map_err(|_| bad())?;
    let delta: f64 = d.trim().parse().map_err(|_| bad())?;
    if !(gamma >= 0.0) || !delta.is_finite() {
        return Err(format!("ansatz: need gamma >= 0 and finite delta, got {s:?}"));
    }
    Ok(AnsatzSource::Explicit { gamma, delta })
}

/// Flat key-value document accepted by `--config`. Every key is optional;
/// `c` and `ansatz` take the same strings as the flags, and `c` also a number.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub f: Option<f64>,
    pub t_max: Option<f64>,
    pub n_steps: Option<usize>,
    pub methods: Option<Vec<Method>>,
    pub c: Option<serde_json::Value>,
    pub ansatz: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("config: cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("config: {}: {e}", path.display()))
    }
}

/// Partially specified scenario; later layers override earlier ones.
#[derive(Debug, Clone, Default)]
pub struct Layer {
    pub f: Option<f64>,
    pub t_max: Option<f64>,
    pub n_steps: Option<usize>,
    pub methods: Option<Vec<Method>>,
    pub c: Option<CSetting>,
    pub ansatz: Option<AnsatzSource>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Layer {
    pub fn over(self, base: Layer) -> Layer {
        Layer {
            f: self.f.or(base.f),
            t_max: self.t_max.or(base.t_max),
            n_steps: self.n_steps.or(base.n_steps),
            methods: self.methods.or(base.methods),
            c: self.c.or(base.c),
            ansatz: self.ansatz.or(base.ansatz),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
        }
    }
}

impl TryFrom<ConfigFile> for Layer {
    type Error = String;

    fn try_from(file: ConfigFile) -> Result<Self, String> {
        let c = match file.c {
            None => None,
            Some(serde_json::Value::Number(n)) => Some(parse_c(&n.to_string())?),
            Some(serde_json::Value::String(s)) => Some(parse_c(&s)?),
            Some(v) => return Err(format!("c: expected a number or \"fit\", got {v}")),
        };
        Ok(Layer {
            f: file.f,
            t_max: file.t_max,
            n_steps: file.n_steps,
            methods: file.methods,
            c,
            ansatz: file.ansatz.as_deref().map(parse_ansatz).transpose()?,
            out: file.out,
            format: file.format,
        })
    }
}

/// Fully resolved run description.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub f: f64,
    pub t_max: f64,
    pub n_steps: usize,
    pub methods: Vec<Method>,
    pub c: CSetting,
    pub ansatz: AnsatzSource,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// Grid spacing used when only t_max is given; keeps the f = 0 error below 1e-6.
const DEFAULT_STEP: f64 = 0.005;
const PRESET_STEP: f64 = 0.01;

impl ScenarioConfig {
    pub fn resolve(layer: Layer) -> Result<Self, String> {
        let f = layer.f.ok_or("f: missing (pass --f or set it in the config file)")?;
        if !(f >= 0.0) || !f.is_finite() {
            return Err(format!("f: must be finite and >= 0, got {f}"));
        }
        let t_max = layer.t_max.unwrap_or(10.0);
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(format!("t_max: must be positive, got {t_max}"));
        }
        let n_steps = layer.n_steps.unwrap_or((t_max / DEFAULT_STEP).round() as usize);
        if n_steps < 10 {
            return Err(format!("n_steps: must be >= 10, got {n_steps}"));
        }
        let mut methods = layer.methods.unwrap_or_else(|| vec![Method::Exact]);
        methods.sort();
        methods.dedup();
        if methods.is_empty() {
            return Err("methods: at least one method is required".into());
        }
        Ok(Self {
            f,
            t_max,
            n_steps,
            methods,
            c: layer.c.unwrap_or(CSetting::Fit),
            ansatz: layer.ansatz.unwrap_or(if f <= 0.2 { AnsatzSource::Wkb } else { AnsatzSource::Fit }),
            out: layer.out,
            format: layer.format.unwrap_or_default(),
        })
    }

    /// True if a selected method is built on the decay ansatz.
    pub fn uses_ansatz(&self) -> bool {
        self.methods.iter().any(|m| !matches!(m, Method::Exact | Method::FirstScheme))
    }

    pub fn needs_exact(&self) -> bool {
        self.methods.contains(&Method::Exact)
            || (self.c == CSetting::Fit && self.methods.contains(&Method::DecayCombined))
    }
}

#[derive(Debug, Serialize)]
pub struct ConfigRecord {
    pub f: f64,
    pub t_max: f64,
    pub n_steps: usize,
    pub methods: Vec<Method>,
    pub c: String,
    pub ansatz: String,
    pub units: &'static str,
}

impl From<&ScenarioConfig> for ConfigRecord {
    fn from(c: &ScenarioConfig) -> Self {
        Self {
            f: c.f,
            t_max: c.t_max,
            n_steps: c.n_steps,
            methods: c.methods.clone(),
            c: c.c.to_string(),
            ansatz: c.ansatz.to_string(),
            units: "hbar=m=B=1",
        }
    }
}

/// Caption parameters (f, c, Γ_f, Δ_f) of panels a–d.
const PANELS: [(char, f64, f64, f64, f64); 4] = [
    ('a', 0.1, 1.0, 0.0010, -0.0072),
    ('b', 0.5, 0.65, 0.1896, -0.0738),
    ('c', 1.0, 0.45, 0.52916, -0.10722),
    ('d', 2.0, 0.45, 1.2115, -0.11235),
];

pub const PRESET_NAMES: [&str; 12] = [
    "fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig3d",
];

/// Figures 1–3 share their panel parameters and differ in the plotted column
/// (gamma, delta, abs2). f = 0.1 decays slowly and runs to t = 200; at f = 2
/// |ψ|² reaches the solver's error level near t = 27, so that run stops at 25.
pub fn preset(name: &str) -> Result<Layer, String> {
    let bad = || format!("unknown preset {name:?}; expected one of {}", PRESET_NAMES.join(", "));
    let rest = name.strip_prefix("fig").ok_or_else(bad)?;
    let mut chars = rest.chars();
    let (fig, panel) = (chars.next().ok_or_else(bad)?, chars.next().ok_or_else(bad)?);
    if chars.next().is_some() || !matches!(fig, '1'..='3') {
        return Err(bad());
    }
    let &(_, f, c, gamma, delta) = PANELS.iter().find(|p| p.0 == panel).ok_or_else(bad)?;
    let t_max = match panel {
        'a' => 200.0,
        'd' => 25.0,
        _ => 30.0,
    };
    Ok(Layer {
        f: Some(f),
        t_max: Some(t_max),
        n_steps: Some((t_max / PRESET_STEP).round() as usize),
        methods: Some(vec![Method::Exact, Method::FirstScheme, Method::DecayCombined, Method::ExpAnsatz]),
        c: Some(CSetting::Fixed(c)),
        ansatz: Some(AnsatzSource::Explicit { gamma, delta }),
        out: None,
        format: None,
    })
}
