use crate::config::{AnsatzSource, CSetting, ConfigRecord, Format, Method, ScenarioConfig};
use serde::Serialize;
use stark_delta::analysis::{density_proxy, extract_rate_shift, fit_c};
use stark_delta::approx::{decay_closed_psi0, first_scheme_psi0, DecayAnsatz, DecayForm};
use stark_delta::volterra::{solve_psi0, SolveOptions};
use stark_delta::{ComplexSeries, Error, Flag, PhysParams, TimeGrid};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Fits of c use the figure window t ∈ [0, 10].
const FIT_WINDOW: f64 = 10.0;
/// A fitted ansatz takes its plateau from a run at least this long.
const PLATEAU_HORIZON: f64 = 25.0;

#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => RunError::Usage(e.to_string()),
            _ => RunError::Numerical(e.to_string()),
        }
    }
}

pub struct MethodData {
    pub method: Method,
    pub series: ComplexSeries,
    pub gamma: Vec<f64>,
    pub delta: Vec<f64>,
    pub proxy: Vec<f64>,
    pub summary: MethodSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodSummary {
    pub method: Method,
    pub plateau_gamma: Option<f64>,
    pub plateau_delta: Option<f64>,
    pub err_est: Option<f64>,
    pub flags: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct AnsatzRecord {
    pub gamma: f64,
    pub delta: f64,
    pub c: f64,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub config: ConfigRecord,
    pub ansatz: Option<AnsatzRecord>,
    pub fitted_c: Option<f64>,
    pub methods: Vec<MethodSummary>,
    /// Flags raised outside any single method (ansatz, fit).
    pub flags: Vec<String>,
}

impl Summary {
    pub fn flagged(&self) -> bool {
        !self.flags.is_empty() || self.methods.iter().any(|m| !m.flags.is_empty())
    }
}

pub struct Outcome {
    pub data: Vec<MethodData>,
    pub summary: Summary,
}

fn strings(flags: &[Flag]) -> Vec<String> {
    flags.iter().map(|f| f.to_string()).collect()
}

/// Leading part of a series up to t = `t_end`.
fn prefix(series: &ComplexSeries, t_end: f64) -> Result<ComplexSeries, Error> {
    let h = series.grid.h();
    let k = ((t_end / h) + 1e-9).floor() as usize;
    if k >= series.grid.n_steps() {
        return Ok(series.clone());
    }
    ComplexSeries::new(TimeGrid::new(k as f64 * h, k)?, series.values[..=k].to_vec())
}

fn analyse(method: Method, series: ComplexSeries, params: &PhysParams, mut flags: Vec<Flag>, err_est: Option<f64>) -> MethodData {
    let n = series.values.len();
    let proxy = density_proxy(&series, params);
    let (gamma, delta, plateau) = match extract_rate_shift(&series, params) {
        Ok(r) => {
            flags.extend(r.flags);
            (r.value.gamma, r.value.delta, r.value.plateau)
        }
        Err(e) => {
            flags.push(Flag::NotConverged(format!("rate extraction: {e}")));
            (vec![f64::NAN; n], vec![f64::NAN; n], None)
        }
    };
    let summary = MethodSummary {
        method,
        plateau_gamma: plateau.map(|p| p.gamma),
        plateau_delta: plateau.map(|p| p.delta),
        err_est,
        flags: strings(&flags),
    };
    MethodData { method, series, gamma, delta, proxy, summary }
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Outcome, RunError> {
    let params = PhysParams::natural(cfg.f)?;
    let grid = TimeGrid::new(cfg.t_max, cfg.n_steps)?;
    let exact = if cfg.needs_exact() { Some(solve_psi0(&params, &grid, &SolveOptions::default())?) } else { None };
    let mut extra_flags = Vec::new();

    let mut fitted_c = None;
    let mut record = None;
    let mut ansatz = None;
    if cfg.uses_ansatz() {
        let (gamma, delta) = match cfg.ansatz {
            AnsatzSource::Wkb => {
                let a = DecayAnsatz::wkb(&params, 0.0)?;
                (a.gamma, a.delta)
            }
            AnsatzSource::Explicit { gamma, delta } => (gamma, delta),
            AnsatzSource::Fit => {
                let long;
                let series = match &exact {
                    Some(ex) if cfg.t_max >= PLATEAU_HORIZON => &ex.series,
                    _ => {
                        long = solve_psi0(&params, &TimeGrid::with_step(PLATEAU_HORIZON, grid.h())?, &SolveOptions::default())?;
                        extra_flags.extend(long.flags.iter().cloned());
                        &long.series
                    }
                };
                let rs = extract_rate_shift(series, &params)?;
                extra_flags.extend(rs.flags);
                let p = rs.value.plateau.ok_or_else(|| RunError::Numerical("ansatz: no plateau found in the exact solve".into()))?;
                (p.gamma, p.delta)
            }
        };
        let base = DecayAnsatz::new(&params, gamma, delta, 0.0)?;
        let c = match cfg.c {
            CSetting::Fixed(c) => c,
            CSetting::Fit if cfg.methods.contains(&Method::DecayCombined) => {
                let ex = exact.as_ref().expect("exact solve present");
                let r = fit_c(&prefix(&ex.series, FIT_WINDOW)?, &params, &base)?;
                extra_flags.extend(r.flags);
                fitted_c = Some(r.value);
                r.value
            }
            CSetting::Fit => 0.0,
        };
        ansatz = Some(base.with_c(c)?);
        record = Some(AnsatzRecord { gamma, delta, c });
    }

    let mut data = Vec::new();
    for &method in &cfg.methods {
        let d = match method {
            Method::Exact => {
                let ex = exact.as_ref().expect("exact solve present");
                analyse(method, ex.series.clone(), &params, ex.flags.clone(), ex.err_est)
            }
            Method::FirstScheme => {
                let s = ComplexSeries::from_fn(grid, |t| first_scheme_psi0(&params, t))?;
                analyse(method, s, &params, Vec::new(), None)
            }
            _ => {
                let form = match method {
                    Method::DecayAdditive => DecayForm::Additive,
                    Method::DecayMultiplicative => DecayForm::Multiplicative,
                    Method::DecayCombined => DecayForm::Combined,
                    _ => DecayForm::AnsatzOnly,
                };
                let ansatz = ansatz.as_ref().expect("ansatz resolved");
                let mut flags = Vec::new();
                let s = ComplexSeries::from_fn(grid, |t| {
                    let v = decay_closed_psi0(&params, t, ansatz, form)?;
                    flags.extend(v.flags);
                    Ok(v.value)
                })?;
                analyse(method, s, &params, flags, None)
            }
        };
        data.push(d);
    }
    let summary = Summary {
        config: cfg.into(),
        ansatz: record,
        fitted_c,
        methods: data.iter().map(|d| d.summary.clone()).collect(),
        flags: strings(&extra_flags),
    };
    Ok(Outcome { data, summary })
}

#[derive(Serialize)]
struct Row {
    t: f64,
    re: f64,
    im: f64,
    abs2: f64,
    gamma: f64,
    delta: f64,
    proxy: f64,
    method: Method,
}

fn rows(data: &[MethodData]) -> impl Iterator<Item = Row> + '_ {
    data.iter().flat_map(|d| {
        d.series.values.iter().enumerate().map(move |(i, v)| Row {
            t: d.series.grid.node(i),
            re: v.re,
            im: v.im,
            abs2: v.re * v.re + v.im * v.im,
            gamma: d.gamma[i],
            delta: d.delta[i],
            proxy: d.proxy[i],
            method: d.method,
        })
    })
}

pub fn render_csv(outcome: &Outcome) -> String {
    let mut s = String::new();
    let cfg = serde_json::to_string(&outcome.summary.config).expect("config serialises");
    writeln!(s, "# stark-delta {}", env!("CARGO_PKG_VERSION")).unwrap();
    writeln!(s, "# config {cfg}").unwrap();
    writeln!(s, "t,re,im,abs2,gamma,delta,proxy,method").unwrap();
    for r in rows(&outcome.data) {
        writeln!(s, "{},{},{},{},{},{},{},{}", r.t, r.re, r.im, r.abs2, r.gamma, r.delta, r.proxy, r.method.name()).unwrap();
    }
    s
}

pub fn render_json(outcome: &Outcome) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        summary: &'a Summary,
        rows: Vec<Row>,
    }
    let doc = Doc { summary: &outcome.summary, rows: rows(&outcome.data).collect() };
    serde_json::to_string_pretty(&doc).expect("dataset serialises") + "\n"
}

pub fn summary_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".summary.json");
    out.with_file_name(name)
}

/// Writes the dataset; CSV output to a file also gets a JSON summary sidecar.
pub fn emit(outcome: &Outcome, format: Format, out: Option<&Path>) -> Result<(), RunError> {
    let body = match format {
        Format::Csv => render_csv(outcome),
        Format::Json => render_json(outcome),
    };
    match out {
        None => print!("{body}"),
        Some(path) => {
            write_file(path, &body)?;
            if format == Format::Csv {
                let sum = serde_json::to_string_pretty(&outcome.summary).expect("summary serialises") + "\n";
                write_file(&summary_path(path), &sum)?;
            }
        }
    }
    Ok(())
}

pub fn write_file(path: &Path, body: &str) -> Result<(), RunError> {
    std::fs::write(path, body).map_err(|e| RunError::Io(format!("cannot write {}: {e}", path.display())))
}
