//! Reduced dynamics of the probe qubit in the disturbed bath.
//!
//! The probe's coherence is multiplied by
//!
//! ```text
//! f(t) = [cos G_I(t) - i⟨σ_z^a⟩ sin G_I(t)] · exp(iω_s t - G_R(t))
//! ```
//!
//! while its populations stay fixed. All times are measured from the moment
//! the probe starts interacting with the bath.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{check_time, invalid, Error, Result};
use crate::output::fmt_float;
use crate::spectral::{CrossTerm, Decoherence, DisturbanceConfig, SpectralDensity};
use crate::state::QubitState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConfig {
    pub bath: SpectralDensity,
    pub dist: DisturbanceConfig,
    /// Free precession frequency of the probe. Zero works in the
    /// interaction picture.
    pub omega_s: f64,
}

impl ModelConfig {
    pub fn new(bath: SpectralDensity, dist: DisturbanceConfig) -> Self {
        Self {
            bath,
            dist,
            omega_s: 0.0,
        }
    }

    pub fn undisturbed(bath: SpectralDensity) -> Self {
        Self::new(bath, DisturbanceConfig::off())
    }

    pub fn with_omega_s(mut self, omega_s: f64) -> Self {
        self.omega_s = omega_s;
        self
    }

    /// Same bath and probe frequency, disturbance switched off.
    pub fn without_disturbance(&self) -> Self {
        Self {
            dist: DisturbanceConfig::off(),
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.bath.validate()?;
        self.dist.validate()?;
        if !(self.omega_s >= 0.0 && self.omega_s.is_finite()) {
            return Err(invalid(
                "omega_s",
                format!("must be finite and >= 0, got {}", self.omega_s),
            ));
        }
        Ok(())
    }
}

/// Samples of the dephasing factor and its ingredients at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorSample {
    pub f: Complex64,
    pub g_r: f64,
    pub g_i: f64,
}

/// A validated model with all time-independent constants resolved.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Propagator {
    deco: Decoherence,
    cross: Option<CrossTerm>,
    sz_a: f64,
    omega_s: f64,
}

impl Propagator {
    pub(crate) fn new(cfg: &ModelConfig) -> Result<Self> {
        cfg.validate()?;
        let deco = Decoherence::new(&cfg.bath)?;
        Ok(Self {
            cross: CrossTerm::new(&deco, &cfg.dist),
            deco,
            sz_a: cfg.dist.sz_a,
            omega_s: cfg.omega_s,
        })
    }

    pub(crate) fn sample(&self, t: f64) -> FactorSample {
        let g_r = self.deco.g_real(t);
        let g_i = self.cross.map_or(0.0, |c| c.value(&self.deco, t));
        let (sin, cos) = g_i.sin_cos();
        let disturbance = Complex64::new(cos, -self.sz_a * sin);
        let envelope = Complex64::new(-g_r, self.omega_s * t).exp();
        let f = if self.cross.is_some() {
            disturbance * envelope
        } else {
            envelope
        };
        FactorSample { f, g_r, g_i }
    }

    pub(crate) fn factor(&self, t: f64) -> Complex64 {
        self.sample(t).f
    }

    /// Analytic `df/dt`.
    pub(crate) fn rate(&self, t: f64) -> Complex64 {
        let g_r = self.deco.g_real(t);
        let g_r_rate = self.deco.g_real_rate(t);
        let envelope = Complex64::new(-g_r, self.omega_s * t).exp();
        let envelope_log_rate = Complex64::new(-g_r_rate, self.omega_s);
        match self.cross {
            None => envelope * envelope_log_rate,
            Some(cross) => {
                let g_i = cross.value(&self.deco, t);
                let g_i_rate = cross.rate(&self.deco, t);
                let (sin, cos) = g_i.sin_cos();
                let disturbance = Complex64::new(cos, -self.sz_a * sin);
                let disturbance_rate = Complex64::new(-sin, -self.sz_a * cos) * g_i_rate;
                (disturbance_rate + disturbance * envelope_log_rate) * envelope
            }
        }
    }
}

/// The disturbed dephasing factor `f(t)`; `f(0) = 1`.
pub fn dephasing_factor(cfg: &ModelConfig, t: f64) -> Result<Complex64> {
    check_time(t)?;
    Ok(Propagator::new(cfg)?.factor(t))
}

/// Analytic time derivative of [`dephasing_factor`].
pub fn dephasing_factor_rate(cfg: &ModelConfig, t: f64) -> Result<Complex64> {
    check_time(t)?;
    Ok(Propagator::new(cfg)?.rate(t))
}

/// Finite-difference estimate of `df/dt` with step `h`: central where
/// `t ≥ h`, second-order one-sided otherwise (f is not defined for t < 0).
pub fn dephasing_factor_rate_fd(cfg: &ModelConfig, t: f64, h: f64) -> Result<Complex64> {
    check_time(t)?;
    if !(h > 0.0) {
        return Err(invalid("h", format!("step must be > 0, got {h}")));
    }
    let p = Propagator::new(cfg)?;
    Ok(finite_difference(&p, t, h))
}

pub(crate) fn finite_difference(p: &Propagator, t: f64, h: f64) -> Complex64 {
    if t >= h {
        (p.factor(t + h) - p.factor(t - h)) / (2.0 * h)
    } else {
        (-3.0 * p.factor(t) + 4.0 * p.factor(t + h) - p.factor(t + 2.0 * h)) / (2.0 * h)
    }
}

/// State of the probe at time `t`: populations unchanged, coherence
/// multiplied by `f(t)`.
pub fn evolve_state(cfg: &ModelConfig, initial: &QubitState, t: f64) -> Result<QubitState> {
    check_time(t)?;
    let f = Propagator::new(cfg)?.factor(t);
    Ok(initial.scaled_coherence(f))
}

/// Uniform grid `t_k = k · t_max / n_steps`, `k = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, n_steps: usize) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(invalid("t_max", format!("must be finite and > 0, got {t_max}")));
        }
        if n_steps < 2 {
            return Err(invalid("n_steps", format!("must be >= 2, got {n_steps}")));
        }
        Ok(Self { t_max, n_steps })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn step(&self) -> f64 {
        self.t_max / self.n_steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.n_steps {
            self.t_max
        } else {
            k as f64 * self.step()
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(|k| self.time(k))
    }
}

/// Sampled dynamics of the probe on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    t: Vec<f64>,
    f: Vec<Complex64>,
    g_r: Vec<f64>,
    g_i: Vec<f64>,
    c_l1: Vec<f64>,
}

impl Trajectory {
    /// Assemble a trajectory from raw samples. The time axis must start at
    /// zero and be uniformly spaced; all columns must have equal length.
    pub fn from_parts(t: Vec<f64>, f: Vec<Complex64>, g_r: Vec<f64>, g_i: Vec<f64>, c_l1: Vec<f64>) -> Result<Self> {
        let n = t.len();
        if [f.len(), g_r.len(), g_i.len(), c_l1.len()].iter().any(|&len| len != n) {
            return Err(invalid("trajectory", "columns have different lengths"));
        }
        if n >= 2 {
            let dt = (t[n - 1] - t[0]) / (n - 1) as f64;
            if !(dt > 0.0) {
                return Err(Error::NonUniformGrid("times must be strictly increasing".into()));
            }
            let slack = 1e-9 * (t[n - 1] - t[0]).abs().max(1.0);
            if let Some(k) = (0..n).find(|&k| (t[k] - t[0] - k as f64 * dt).abs() > slack) {
                return Err(Error::NonUniformGrid(format!(
                    "sample {k} at t = {} is off the grid",
                    t[k]
                )));
            }
        }
        Ok(Self { t, f, g_r, g_i, c_l1 })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn f(&self) -> &[Complex64] {
        &self.f
    }

    pub fn g_r(&self) -> &[f64] {
        &self.g_r
    }

    pub fn g_i(&self) -> &[f64] {
        &self.g_i
    }

    pub fn c_l1(&self) -> &[f64] {
        &self.c_l1
    }

    /// Write `t, re_f, im_f, abs_f, g_r, g_i, c_l1` with a header row.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["t", "re_f", "im_f", "abs_f", "g_r", "g_i", "c_l1"])?;
        for k in 0..self.len() {
            let f = self.f[k];
            out.write_record([
                fmt_float(self.t[k]),
                fmt_float(f.re),
                fmt_float(f.im),
                fmt_float(f.norm()),
                fmt_float(self.g_r[k]),
                fmt_float(self.g_i[k]),
                fmt_float(self.c_l1[k]),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Sample `f`, `G_R`, `G_I` and `C_l1(t) = 2|ρ_eg(0)| |f(t)|` on
/// `n_steps + 1` uniform points in `[0, t_max]`.
pub fn coherence_trajectory(cfg: &ModelConfig, initial: &QubitState, t_max: f64, n_steps: usize) -> Result<Trajectory> {
    let grid = TimeGrid::new(t_max, n_steps)?;
    let p = Propagator::new(cfg)?;
    let c0 = crate::state::coherence_l1(initial);

    let n = n_steps + 1;
    let mut t = Vec::with_capacity(n);
    let mut f = Vec::with_capacity(n);
    let mut g_r = Vec::with_capacity(n);
    let mut g_i = Vec::with_capacity(n);
    let mut c_l1 = Vec::with_capacity(n);
    for time in grid.times() {
        let sample = p.sample(time);
        t.push(time);
        f.push(sample.f);
        g_r.push(sample.g_r);
        g_i.push(sample.g_i);
        c_l1.push(c0 * sample.f.norm());
    }
    Ok(Trajectory { t, f, g_r, g_i, c_l1 })
}
