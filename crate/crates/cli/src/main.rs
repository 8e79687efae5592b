//! Command-line scenario runner for the delta-well decay model.

mod config;
mod identity;
mod run;

use clap::{Args, Parser, Subcommand};
use config::{parse_ansatz, parse_c, preset, AnsatzSource, CSetting, ConfigFile, Format, Layer, Method, ScenarioConfig};
use identity::{parse_complex, Selector};
use run::RunError;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "stark-delta", version, about = "Delta-well bound state in a suddenly switched uniform field")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the Volterra equation for ψ(0, t).
    Solve(ScenarioArgs),
    /// Evaluate closed-form approximations (default: decay_combined).
    Approx(ScenarioArgs),
    /// Fit the mixing weight c against the exact solve on t ∈ [0, 10].
    FitC(ScenarioArgs),
    /// Check the Airy integral identities on a parameter grid.
    IdentityCheck(IdentityArgs),
    /// Run a figure preset (fig1a … fig3d); other flags override it.
    Figures {
        preset: String,
        #[command(flatten)]
        args: ScenarioArgs,
    },
}

#[derive(Args, Clone, Default)]
struct ScenarioArgs {
    /// Relative field strength f = mF/(ℏ²B³).
    #[arg(long, allow_hyphen_values = true)]
    f: Option<f64>,
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Number of time steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Comma-separated method list.
    #[arg(long, value_enum, value_delimiter = ',')]
    method: Vec<Method>,
    /// Mixing weight in [0, 1], or "fit".
    #[arg(long, value_parser = parse_c)]
    c: Option<CSetting>,
    /// Decay constants: "wkb", "fit" or GAMMA,DELTA [default: wkb for f <= 0.2, else fit].
    #[arg(long, value_parser = parse_ansatz, allow_hyphen_values = true)]
    ansatz: Option<AnsatzSource>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// JSON file with the same keys; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(value_enum)]
    selector: Selector,
    /// Grid points (real or complex such as 1+3i); defaults per identity.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    grid: Vec<String>,
    /// Largest regulariser of the erf–Airy ε ladder.
    #[arg(long, default_value_t = 0.02)]
    eps: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl ScenarioArgs {
    fn layer(&self) -> Layer {
        Layer {
            f: self.f,
            t_max: self.t_max,
            n_steps: self.steps,
            methods: (!self.method.is_empty()).then(|| self.method.clone()),
            c: self.c,
            ansatz: self.ansatz,
            out: self.out.clone(),
            format: self.format,
        }
    }

    /// Flags over config file over `base`.
    fn resolve(&self, base: Layer) -> Result<ScenarioConfig, RunError> {
        let file = match &self.config {
            Some(path) => Layer::try_from(ConfigFile::load(path).map_err(RunError::Usage)?).map_err(RunError::Usage)?,
            None => Layer::default(),
        };
        ScenarioConfig::resolve(self.layer().over(file.over(base))).map_err(RunError::Usage)
    }
}

fn methods(m: &[Method]) -> Layer {
    Layer { methods: Some(m.to_vec()), ..Layer::default() }
}

/// Exit status 2 when any numerical flag was raised.
fn scenario(cfg: ScenarioConfig) -> Result<bool, RunError> {
    let outcome = run::run_scenario(&cfg)?;
    run::emit(&outcome, cfg.format, cfg.out.as_deref())?;
    for m in &outcome.summary.methods {
        for f in &m.flags {
            eprintln!("warning: {}: {f}", m.method.name());
        }
    }
    for f in &outcome.summary.flags {
        eprintln!("warning: {f}");
    }
    Ok(!outcome.summary.flagged())
}

fn fit_c_cmd(cfg: ScenarioConfig) -> Result<bool, RunError> {
    let cfg = ScenarioConfig { methods: vec![Method::DecayCombined], c: CSetting::Fit, ..cfg };
    let outcome = run::run_scenario(&cfg)?;
    let s = &outcome.summary;
    let a = s.ansatz.as_ref().expect("decay_combined resolves the ansatz");
    let body = match cfg.format {
        Format::Csv => format!("f,gamma,delta,c\n{},{},{},{}\n", cfg.f, a.gamma, a.delta, a.c),
        Format::Json => serde_json::to_string_pretty(s).expect("summary serialises") + "\n",
    };
    match &cfg.out {
        Some(p) => run::write_file(p, &body)?,
        None => print!("{body}"),
    }
    for f in &s.flags {
        eprintln!("warning: {f}");
    }
    Ok(s.flags.is_empty())
}

fn identity_cmd(args: IdentityArgs) -> Result<bool, RunError> {
    let grid = if args.grid.is_empty() {
        args.selector.default_grid()
    } else {
        args.grid.iter().map(|g| parse_complex(g)).collect::<Result<_, _>>().map_err(RunError::Usage)?
    };
    let rows = identity::run(args.selector, &grid, args.eps)?;
    let body = match args.format {
        Format::Csv => identity::render_csv(&rows),
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                rows: &'a [identity::Row],
            }
            serde_json::to_string_pretty(&Doc { rows: &rows }).expect("rows serialise") + "\n"
        }
    };
    match &args.out {
        Some(p) => run::write_file(p, &body)?,
        None => print!("{body}"),
    }
    Ok(rows.iter().all(identity::Row::ok))
}

fn dispatch(cli: Cli) -> Result<bool, RunError> {
    match cli.command {
        Command::Solve(a) => scenario(a.resolve(methods(&[Method::Exact]))?),
        Command::Approx(a) => scenario(a.resolve(methods(&[Method::DecayCombined]))?),
        Command::FitC(a) => fit_c_cmd(a.resolve(Layer::default())?),
        Command::IdentityCheck(a) => identity_cmd(a),
        Command::Figures { preset: name, args } => scenario(args.resolve(preset(&name).map_err(RunError::Usage)?)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(RunError::Usage(m)) | Err(RunError::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(RunError::Numerical(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
