//! Flags, the optional JSON config file, and their merge into one resolved
//! configuration. Flags override the file; the file overrides defaults.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Deserializer};

use crate::table::format_float;
use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "focklaser", version, about = "Spectra, gain and photon statistics of deep-strong-coupling Fock lasers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Analytic levels `(n, σ, E, gap)`.
    Spectrum,
    /// Emission probability per photon number after time `--t`.
    Blockade,
    /// Gain coefficient, loss and nonlinearity per photon number.
    GainLoss,
    /// Steady-state photon distribution.
    SteadyState,
    /// Mean and noise against pump rate, for one or more couplings.
    Sweep,
    /// Distribution shape over an `(r, Γ)` grid.
    RegimeMap,
    /// Moments of the rate-equation evolution from a Fock state.
    Transient,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Blockade => "blockade",
            Command::GainLoss => "gain-loss",
            Command::SteadyState => "steady-state",
            Command::Sweep => "sweep",
            Command::RegimeMap => "regime-map",
            Command::Transient => "transient",
        }
    }
}

#[derive(ValueEnum, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Rate,
    Direct,
    Liouvillian,
}

/// `a` is the bare quadrature `a + a†`, `b` the displaced `b + b†`.
#[derive(ValueEnum, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Operator {
    A,
    B,
}

#[derive(ValueEnum, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Loss {
    Harmonic,
    MatrixElement,
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<f64>>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(f64),
        Many(Vec<f64>),
    }
    Ok(Option::<OneOrMany>::deserialize(d)?.map(|v| match v {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(v) => v,
    }))
}

/// Every flag, all optional. The JSON config file uses the same kebab-case
/// names.
#[derive(Args, Deserialize, Debug, Clone, Default)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Flags {
    /// JSON file with any of these flags as keys.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Coupling g/ω; a comma-separated list for `sweep`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "one_or_many")]
    pub g: Option<Vec<f64>>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Emitter detuning δ, with emitter frequency ω(1 + δ).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega0_detuning: Option<f64>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Emitter linewidth Γ; a list for `regime-map`.
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many")]
    pub gamma: Option<Vec<f64>>,
    /// Log-spaced Γ grid `lo..hi:count`.
    #[arg(long, global = true)]
    pub gamma_log: Option<String>,
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    /// Pump rate; a list for `sweep` and `regime-map`.
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many")]
    pub r: Option<Vec<f64>>,
    /// Log-spaced pump grid `lo..hi:count`.
    #[arg(long, global = true)]
    pub r_log: Option<String>,
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    #[arg(long, global = true)]
    pub n_fock: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub interaction: Option<Operator>,
    #[arg(long, global = true, value_enum)]
    pub jump: Option<Operator>,
    #[arg(long, global = true, value_enum)]
    pub method: Option<Method>,
    #[arg(long, global = true, value_enum)]
    pub loss: Option<Loss>,
    /// Bath-level decay over lasing-level decay for `--method direct`.
    #[arg(long, global = true)]
    pub bath_ratio: Option<f64>,
    /// Energy-conserving emitter coupling in the Liouvillian.
    #[arg(long, global = true)]
    pub rwa: Option<bool>,
    #[arg(long, global = true)]
    pub allow_degenerate: Option<bool>,
    /// Interaction time for `blockade`, final time for `transient`.
    #[arg(long, global = true)]
    pub t: Option<f64>,
    /// Output times for `transient`, excluding t = 0.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Initial Fock state for `transient`.
    #[arg(long, global = true)]
    pub n0: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Reserved; every method is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

macro_rules! overlay {
    ($hi:expr, $lo:expr, $($f:ident),*) => {
        Flags { config: $hi.config.clone(), $($f: $hi.$f.clone().or($lo.$f.clone())),* }
    };
}

impl Flags {
    /// Fields of `self` win over `file`.
    pub fn over(&self, file: &Flags) -> Flags {
        overlay!(
            self, file, g, lambda, omega0_detuning, epsilon, gamma, gamma_log, kappa, r, r_log, n_max, n_fock, interaction,
            jump, method, loss, bath_ratio, rwa, allow_degenerate, t, samples, n0, format, out, jobs, seed
        )
    }

    pub fn load(&self) -> Result<Flags, CliError> {
        match &self.config {
            None => Ok(self.clone()),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                let file: Flags =
                    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
                Ok(self.over(&file))
            }
        }
    }
}

/// Parses `lo..hi:count` into `count` log-spaced values including both ends.
pub fn log_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("expected lo..hi:count, got `{spec}`"));
    let (range, count) = spec.split_once(':').ok_or_else(bad)?;
    let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) || count < 2 {
        return Err(CliError::Usage(format!("log grid needs 0 < lo < hi and count >= 2, got `{spec}`")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|i| match i {
            0 => lo,
            _ if i == count - 1 => hi,
            _ => (a + (b - a) * i as f64 / (count - 1) as f64).exp(),
        })
        .collect())
}

/// Fully resolved parameters for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub command: Command,
    pub g: Vec<f64>,
    pub lambda: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub gamma: Vec<f64>,
    pub kappa: f64,
    pub r: Vec<f64>,
    pub n_max: Option<usize>,
    pub n_fock: usize,
    pub interaction: Operator,
    pub jump: Operator,
    pub method: Method,
    pub loss: Loss,
    pub bath_ratio: f64,
    pub rwa: bool,
    pub allow_degenerate: bool,
    pub t: Option<f64>,
    pub samples: usize,
    pub n0: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub seed: Option<u64>,
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| format_float(*x)).collect::<Vec<_>>().join(",")
}

fn enum_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

impl Resolved {
    pub fn new(command: Command, f: &Flags) -> Result<Self, CliError> {
        let g = f.g.clone().ok_or_else(|| CliError::Usage("--g is required".into()))?;
        if g.is_empty() {
            return Err(CliError::Usage("--g needs at least one value".into()));
        }
        if g.len() > 1 && command != Command::Sweep {
            return Err(CliError::Usage(format!("`{}` takes a single --g", command.name())));
        }
        let r = match (&f.r, &f.r_log) {
            (Some(_), Some(_)) => return Err(CliError::Usage("give either --r or --r-log".into())),
            (_, Some(spec)) => log_grid(spec)?,
            (Some(v), None) => v.clone(),
            (None, None) => vec![1e-2],
        };
        let gamma = match (&f.gamma, &f.gamma_log) {
            (Some(_), Some(_)) => return Err(CliError::Usage("give either --gamma or --gamma-log".into())),
            (_, Some(spec)) => log_grid(spec)?,
            (Some(v), None) => v.clone(),
            (None, None) => vec![1e-3],
        };
        let multi_r = matches!(command, Command::Sweep | Command::RegimeMap);
        if r.is_empty() || (!multi_r && r.len() > 1) {
            return Err(CliError::Usage(format!("`{}` takes a single --r", command.name())));
        }
        if gamma.is_empty() || (command != Command::RegimeMap && gamma.len() > 1) {
            return Err(CliError::Usage(format!("`{}` takes a single --gamma", command.name())));
        }
        let jobs = f.jobs.unwrap_or(1);
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        Ok(Resolved {
            command,
            g,
            lambda: f.lambda.unwrap_or(0.0),
            delta: f.omega0_detuning.unwrap_or(0.0),
            epsilon: f.epsilon.unwrap_or(1e-5),
            gamma,
            kappa: f.kappa.unwrap_or(1e-8),
            r,
            n_max: f.n_max,
            n_fock: f.n_fock.unwrap_or(30),
            interaction: f.interaction.unwrap_or(Operator::B),
            jump: f.jump.unwrap_or(Operator::B),
            method: f.method.unwrap_or(Method::Rate),
            loss: f.loss.unwrap_or(Loss::Harmonic),
            bath_ratio: f.bath_ratio.unwrap_or(100.0),
            rwa: f.rwa.unwrap_or(true),
            allow_degenerate: f.allow_degenerate.unwrap_or(false),
            t: f.t,
            samples: f.samples.unwrap_or(50),
            n0: f.n0.unwrap_or(0),
            format: f.format.unwrap_or(Format::Csv),
            out: f.out.clone(),
            jobs,
            seed: f.seed,
        })
    }

    /// Parameters that determine the output, keyed by flag name.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("command", self.command.name().into());
        put("g", list(&self.g));
        put("lambda", format_float(self.lambda));
        put("omega0-detuning", format_float(self.delta));
        put("epsilon", format_float(self.epsilon));
        put("gamma", list(&self.gamma));
        put("kappa", format_float(self.kappa));
        put("r", list(&self.r));
        put("n-max", self.n_max.map_or("auto".into(), |n| n.to_string()));
        put("units", "omega".into());
        match self.command {
            Command::SteadyState | Command::Sweep => {
                put("method", enum_name(self.method));
            }
            _ => {}
        }
        if matches!(self.command, Command::SteadyState | Command::Sweep | Command::Transient | Command::GainLoss)
            && self.method != Method::Liouvillian
        {
            put("loss", enum_name(self.loss));
        }
        if self.method == Method::Direct {
            put("bath-ratio", format_float(self.bath_ratio));
        }
        if self.command == Command::SteadyState && self.method == Method::Liouvillian {
            put("n-fock", self.n_fock.to_string());
            put("interaction", enum_name(self.interaction));
            put("jump", enum_name(self.jump));
            put("rwa", self.rwa.to_string());
            put("allow-degenerate", self.allow_degenerate.to_string());
        }
        if let Some(t) = self.t {
            put("t", format_float(t));
        }
        if self.command == Command::Transient {
            put("samples", self.samples.to_string());
            put("n0", self.n0.to_string());
        }
        if let Some(s) = self.seed {
            put("seed", s.to_string());
        }
        m
    }
}
