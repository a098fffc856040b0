use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use qsl_disturb::presets::Preset;
use qsl_disturb::qsl::Route;

use crate::UsageError;

/// Dephasing, non-Markovianity and quantum speed limits of a qubit in a
/// bath disturbed by an auxiliary qubit.
#[derive(Debug, Parser)]
#[command(name = "qsl-disturb", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample f(t), G_R, G_I and the l1 coherence on a time grid.
    Traj(RunArgs),
    /// Non-Markovianity N at one parameter point or along a sweep.
    Nonmark(RunArgs),
    /// Quantum speed limit at one window start or along a tau sweep.
    Qsl(RunArgs),
    /// Check the closed-form decoherence functions against quadrature.
    Validate(ValidateArgs),
    /// Search the auxiliary interaction time that reproduces the onset thresholds.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BathKind {
    Ohmic,
    Lorentzian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    ClosedForm,
    Generic,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::ClosedForm => Route::ClosedForm,
            RouteArg::Generic => Route::Generic,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct RunArgs {
    /// Read `key = value` lines (keys as the long flags) as defaults.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Figure recipe: fig2a..fig2c, fig3a, fig3b, fig4a..fig4c, fig5.
    #[arg(long)]
    pub preset: Option<Preset>,

    #[arg(long, value_enum)]
    pub bath: Option<BathKind>,
    /// Ohmic coupling strength [default: 1].
    #[arg(long)]
    pub eta: Option<f64>,
    /// Ohmicity [default: 1].
    #[arg(long)]
    pub s: Option<f64>,
    /// Ohmic cutoff frequency [default: 1].
    #[arg(long)]
    pub omega_c: Option<f64>,
    /// Lorentzian coupling strength [default: 10].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Lorentzian width [default: 1].
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Lorentzian centre frequency.
    #[arg(long, conflicts_with = "delta_over_lambda")]
    pub delta: Option<f64>,
    /// Lorentzian centre in units of the width [default: 1].
    #[arg(long)]
    pub delta_over_lambda: Option<f64>,

    /// <σ_z> of the auxiliary qubit; switches the disturbance on.
    #[arg(long)]
    pub sz_a: Option<f64>,
    /// Auxiliary interaction time [default: calibrated per bath family].
    #[arg(long)]
    pub ta: Option<f64>,
    /// Free precession frequency of the probe [default: 0].
    #[arg(long)]
    pub omega_s: Option<f64>,

    /// Initial Bloch vector. Unset components are 0; with none set the
    /// state is (1/√2, 1/√2, 0).
    #[arg(long)]
    pub r1: Option<f64>,
    #[arg(long)]
    pub r2: Option<f64>,
    #[arg(long)]
    pub r3: Option<f64>,

    /// Time horizon [default: 20].
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Time steps on [0, t_max] [default: 4000].
    #[arg(long)]
    pub n_steps: Option<usize>,
    /// Driving time of the speed-limit window [default: 1].
    #[arg(long)]
    pub tau_d: Option<f64>,
    /// Window start for a single speed-limit evaluation [default: 0].
    #[arg(long)]
    pub tau: Option<f64>,
    /// Sweep as `name:start:stop:step`, e.g. `eta:0:6:0.05` or `tau:0:5:0.05`.
    #[arg(long, value_name = "SPEC")]
    pub sweep: Option<String>,
    /// Simpson panels per speed-limit window [default: 1000].
    #[arg(long)]
    pub qsl_steps: Option<usize>,
    /// Formula for the tau_qsl columns [default: closed-form].
    #[arg(long, value_enum)]
    pub route: Option<RouteArg>,

    /// Output CSV [default: stdout].
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Also compute the undisturbed reference.
    #[arg(long)]
    pub paired: bool,
    /// Write a gnuplot script next to the CSV.
    #[arg(long)]
    pub plot: bool,
    /// Exit with status 3 when numerical warnings were raised.
    #[arg(long)]
    pub strict: bool,
    /// Worker threads [default: available processors].
    #[arg(long, env = "QSL_DISTURB_JOBS")]
    pub jobs: Option<usize>,
}

macro_rules! fill {
    ($dst:ident, $src:ident; $($opt:ident),*; $($flag:ident),*) => {
        $( if $dst.$opt.is_none() { $dst.$opt = $src.$opt.take(); } )*
        $( $dst.$flag |= $src.$flag; )*
    };
}

impl RunArgs {
    /// Fill every unset option from `defaults`.
    fn fill_from(&mut self, mut defaults: RunArgs) {
        // Either spelling of the Lorentzian centre on the command line
        // replaces both spellings in the file.
        if self.delta.is_some() || self.delta_over_lambda.is_some() {
            defaults.delta = None;
            defaults.delta_over_lambda = None;
        }
        let this = self;
        fill!(this, defaults;
            preset, bath, eta, s, omega_c, gamma, lambda, delta, delta_over_lambda,
            sz_a, ta, omega_s, r1, r2, r3, t_max, n_steps, tau_d, tau, sweep,
            qsl_steps, route, out, jobs;
            paired, plot, strict);
    }

    /// Merge the `--config` file, if any, underneath the explicit flags.
    pub fn with_config_file(mut self) -> anyhow::Result<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let defaults = read_config(&path)?;
        self.fill_from(defaults);
        Ok(self)
    }
}

#[derive(Debug, Parser)]
#[command(name = "config", no_binary_name = true, allow_negative_numbers = true)]
struct ConfigFile {
    #[command(flatten)]
    args: RunArgs,
}

fn read_config(path: &Path) -> anyhow::Result<RunArgs> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config file {}", path.display()))?;
    let mut argv = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| UsageError(format!("{}:{}: expected `key = value`", path.display(), k + 1)))?;
        if key == "config" {
            return Err(UsageError(format!(
                "{}:{}: nested config files are not supported",
                path.display(),
                k + 1
            ))
            .into());
        }
        match value {
            "true" => argv.push(format!("--{key}")),
            "false" => {}
            _ => {
                argv.push(format!("--{key}"));
                argv.push(value.to_string());
            }
        }
    }
    ConfigFile::try_parse_from(&argv).map(|c| c.args).map_err(|e| {
        UsageError(format!(
            "config file {}: {}",
            path.display(),
            e.render().to_string().trim()
        ))
        .into()
    })
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Exit with status 3 when a Lorentzian check disagrees.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CalibrateArgs {
    /// Candidate auxiliary interaction times as `start:stop:step`.
    #[arg(long, default_value = "0.1:5:0.1", value_name = "SPEC")]
    pub ta_range: String,
    /// Accepted distance between found and reported onset.
    #[arg(long, default_value_t = 0.5)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 4000)]
    pub n_steps: usize,
    /// Output CSV [default: stdout].
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, env = "QSL_DISTURB_JOBS")]
    pub jobs: Option<usize>,
}
