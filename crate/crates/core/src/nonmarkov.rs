//! Coherence-based non-Markovianity.
//!
//! `N` is the total growth of the l1 coherence of a maximally coherent
//! probe, `∫_{dC/dt > 0} dC/dt dt`. On a sampled trajectory this is the
//! positive variation `Σ_k max(0, C_{k+1} - C_k)`, which stays exact across
//! the kinks `|cos G_I|` develops when `cos G_I` changes sign.
//!
//! Maximally coherent states differ only by the phase of `ρ_eg`, and
//! `C_l1(t) = |f(t)|` does not depend on it, so the maximisation over
//! initial states is trivial and no optimiser is run.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dynamics::{coherence_trajectory, ModelConfig, Trajectory};
use crate::error::{invalid, Error, Result};
use crate::output::fmt_float;
use crate::spectral::SpectralDensity;
use crate::state::QubitState;

/// Coherence increments smaller than this are treated as zero.
pub const DEFAULT_REVIVAL_FLOOR: f64 = 1e-12;
/// A sweep point counts as non-Markovian when `N` exceeds this.
pub const ONSET_THRESHOLD: f64 = 1e-6;
/// Default integration horizon in natural bath time units.
pub const DEFAULT_T_MAX: f64 = 20.0;
pub const DEFAULT_N_STEPS: usize = 4000;

#[derive(Debug, Clone, PartialEq)]
pub struct NonMarkovResult {
    pub n_value: f64,
    /// Maximal runs of growing coherence, `(t_start, t_end)`, sorted.
    pub revival_intervals: Vec<(f64, f64)>,
    pub t_max_used: f64,
    /// `C(t_max) / C(0)`; a large value means the horizon truncates dynamics.
    pub coherence_remaining: f64,
}

impl NonMarkovResult {
    pub fn n_revivals(&self) -> usize {
        self.revival_intervals.len()
    }

    pub fn is_non_markovian(&self) -> bool {
        self.n_value > ONSET_THRESHOLD
    }
}

pub fn measure_from_trajectory(traj: &Trajectory) -> Result<NonMarkovResult> {
    measure_from_trajectory_with(traj, DEFAULT_REVIVAL_FLOOR)
}

pub fn measure_from_trajectory_with(traj: &Trajectory, revival_floor: f64) -> Result<NonMarkovResult> {
    let (t, c) = (traj.t(), traj.c_l1());
    if t.len() < 3 {
        return Err(Error::TrajectoryTooShort(t.len()));
    }

    let mut n_value = 0.0;
    let mut intervals = Vec::new();
    let mut run_start: Option<usize> = None;
    for k in 0..c.len() - 1 {
        let step = c[k + 1] - c[k];
        if step > revival_floor {
            n_value += step;
            run_start.get_or_insert(k);
        } else if let Some(start) = run_start.take() {
            intervals.push((t[start], t[k]));
        }
    }
    if let Some(start) = run_start {
        intervals.push((t[start], t[c.len() - 1]));
    }

    let c0 = c[0];
    Ok(NonMarkovResult {
        n_value,
        revival_intervals: intervals,
        t_max_used: t[t.len() - 1],
        coherence_remaining: if c0 > 0.0 { c[c.len() - 1] / c0 } else { 0.0 },
    })
}

/// `N` for the model, evaluated on `[0, t_max]` with `n_steps` steps.
pub fn measure(cfg: &ModelConfig, t_max: f64, n_steps: usize) -> Result<NonMarkovResult> {
    let traj = coherence_trajectory(cfg, &QubitState::maximally_coherent(0.0), t_max, n_steps)?;
    measure_from_trajectory(&traj)
}

/// Scalar model parameter a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    Eta,
    Gamma,
    DeltaOverLambda,
    S,
    SzA,
    TA,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 6] = [
        SweepAxis::Eta,
        SweepAxis::Gamma,
        SweepAxis::DeltaOverLambda,
        SweepAxis::S,
        SweepAxis::SzA,
        SweepAxis::TA,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Eta => "eta",
            SweepAxis::Gamma => "gamma",
            SweepAxis::DeltaOverLambda => "delta_over_lambda",
            SweepAxis::S => "s",
            SweepAxis::SzA => "sz_a",
            SweepAxis::TA => "t_a",
        }
    }

    /// Copy of `template` with this parameter set to `value`. Sweeping
    /// `sz_a` or `t_a` switches the disturbance on.
    pub fn apply(&self, template: &ModelConfig, value: f64) -> Result<ModelConfig> {
        if !value.is_finite() {
            return Err(invalid("sweep value", format!("{value} is not finite")));
        }
        let mut cfg = *template;
        let not_applicable = || Error::AxisNotApplicable {
            axis: self.name(),
            bath: template.bath.kind(),
        };
        match (self, &mut cfg.bath) {
            (SweepAxis::Eta, SpectralDensity::Ohmic { eta, .. }) => *eta = value,
            (SweepAxis::S, SpectralDensity::Ohmic { s, .. }) => *s = value,
            (SweepAxis::Gamma, SpectralDensity::Lorentzian { gamma, .. }) => *gamma = value,
            (SweepAxis::DeltaOverLambda, SpectralDensity::Lorentzian { lambda, delta, .. }) => *delta = value * *lambda,
            (SweepAxis::SzA, _) => {
                cfg.dist.enabled = true;
                cfg.dist.sz_a = value;
            }
            (SweepAxis::TA, _) => {
                cfg.dist.enabled = true;
                cfg.dist.t_a = value;
            }
            _ => return Err(not_applicable()),
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepAxis::ALL
            .into_iter()
            .find(|axis| axis.name() == s)
            .ok_or_else(|| Error::UnknownAxis(s.to_string()))
    }
}

/// Evaluate `N` at every value of `axis`. Points run in parallel on the
/// current rayon pool; results come back in input order.
pub fn sweep(
    template: &ModelConfig,
    axis: SweepAxis,
    values: &[f64],
    t_max: f64,
    n_steps: usize,
) -> Result<Vec<(f64, NonMarkovResult)>> {
    let configs = values
        .iter()
        .map(|&v| axis.apply(template, v))
        .collect::<Result<Vec<_>>>()?;
    configs
        .par_iter()
        .zip(values.par_iter())
        .map(|(cfg, &v)| measure(cfg, t_max, n_steps).map(|r| (v, r)))
        .collect()
}

/// Smallest swept value with `N > ONSET_THRESHOLD`.
pub fn onset(rows: &[(f64, NonMarkovResult)]) -> Option<f64> {
    rows.iter().find(|(_, r)| r.is_non_markovian()).map(|(v, _)| *v)
}

/// Write `axis_value, n_value, n_revivals, onset_flag`. With a reference
/// sweep (same axis values, disturbance off) three more columns follow:
/// `n_value_reference, n_revivals_reference, onset_flag_reference`.
pub fn write_sweep_csv<W: Write>(
    writer: W,
    rows: &[(f64, NonMarkovResult)],
    reference: Option<&[(f64, NonMarkovResult)]>,
) -> Result<()> {
    if let Some(reference) = reference {
        if reference.len() != rows.len() {
            return Err(invalid("reference", "sweep lengths differ"));
        }
    }
    let mut out = csv::Writer::from_writer(writer);
    let mut header = vec!["axis_value", "n_value", "n_revivals", "onset_flag"];
    if reference.is_some() {
        header.extend(["n_value_reference", "n_revivals_reference", "onset_flag_reference"]);
    }
    out.write_record(&header)?;

    let flag = |r: &NonMarkovResult| if r.is_non_markovian() { "1" } else { "0" }.to_string();
    for (k, (value, result)) in rows.iter().enumerate() {
        let mut record = vec![
            fmt_float(*value),
            fmt_float(result.n_value),
            result.n_revivals().to_string(),
            flag(result),
        ];
        if let Some(reference) = reference {
            let r = &reference[k].1;
            record.extend([fmt_float(r.n_value), r.n_revivals().to_string(), flag(r)]);
        }
        out.write_record(&record)?;
    }
    out.flush()?;
    Ok(())
}
