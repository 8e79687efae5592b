use crate::run::RunError;
use clap::ValueEnum;
use num_complex::Complex64 as C64;
use serde::Serialize;
use stark_delta::identities::{check_airy_erf_identity, check_airy_fourier, check_z6_identity, IdentityReport};
use stark_delta::Flagged;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Selector {
    AiryFourier,
    Z6,
    AiryErf,
}

impl Selector {
    fn name(self) -> &'static str {
        match self {
            Selector::AiryFourier => "airy_fourier",
            Selector::Z6 => "z6",
            Selector::AiryErf => "airy_erf",
        }
    }

    pub fn default_grid(self) -> Vec<C64> {
        let r = |x: f64| C64::new(x, 0.0);
        match self {
            Selector::AiryFourier => vec![r(0.0), r(1.0), r(-1.0), r(2.0)],
            Selector::Z6 => vec![r(0.1), r(1.0), r(2.0), C64::new(0.0, 5.0), C64::new(1.0, 3.0)],
            Selector::AiryErf => vec![r(0.0), r(0.3), C64::from_polar(0.3, std::f64::consts::PI / 12.0)],
        }
    }
}

/// Parses "1.5", "-2i", "1+3i", "0.3-0.1i".
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let bad = || format!("grid: cannot read {s:?} as a number like 1, 5i or 1+3i");
    let t = s.trim();
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|x| C64::new(x, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(C64::new(re, im))
}

#[derive(Debug, Serialize)]
pub struct Row {
    pub selector: Selector,
    pub param_re: f64,
    pub param_im: f64,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub flags: Vec<String>,
    pub detail: String,
}

impl Row {
    /// Flagged rows are inconclusive and do not count as failures.
    pub fn ok(&self) -> bool {
        self.pass || !self.flags.is_empty()
    }
}

fn row(selector: Selector, p: C64, r: Flagged<IdentityReport>, tolerance: f64, use_abs: bool) -> Row {
    let v = r.value;
    let err = if use_abs { v.abs_err } else { v.rel_err };
    Row {
        selector,
        param_re: p.re,
        param_im: p.im,
        lhs_re: v.lhs.re,
        lhs_im: v.lhs.im,
        rhs_re: v.rhs.re,
        rhs_im: v.rhs.im,
        abs_err: v.abs_err,
        rel_err: v.rel_err,
        tolerance,
        pass: err <= tolerance,
        flags: r.flags.iter().map(|f| f.to_string()).collect(),
        detail: v.detail,
    }
}

pub fn run(selector: Selector, grid: &[C64], eps: f64) -> Result<Vec<Row>, RunError> {
    let mut out = Vec::with_capacity(grid.len());
    for &p in grid {
        let r = match selector {
            Selector::AiryFourier => {
                if p.im != 0.0 {
                    return Err(RunError::Usage(format!("grid: airy_fourier needs real eta, got {p}")));
                }
                row(selector, p, check_airy_fourier(p.re)?, 1e-6, true)
            }
            Selector::Z6 => row(selector, p, check_z6_identity(p)?, 1e-9, false),
            Selector::AiryErf => {
                let tol = if p.im == 0.0 { 1e-3 } else { 1e-2 };
                row(selector, p, check_airy_erf_identity(p, eps)?, tol, false)
            }
        };
        out.push(r);
    }
    Ok(out)
}

pub fn render_csv(rows: &[Row]) -> String {
    let mut s = String::from("selector,param_re,param_im,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,tolerance,pass,flags\n");
    for r in rows {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.selector.name(),
            r.param_re,
            r.param_im,
            r.lhs_re,
            r.lhs_im,
            r.rhs_re,
            r.rhs_im,
            r.abs_err,
            r.rel_err,
            r.tolerance,
            r.pass,
            r.flags.join("; ").replace(',', " ")
        )
        .unwrap();
    }
    s
}
