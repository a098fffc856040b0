//! Quantum speed limits.
//!
//! For open dynamics the distance between `ρ_τ` and `ρ_{τ+τ_D}` is measured
//! by the relative purity `R = tr(ρ_τ ρ_{τ+τ_D}) / tr(ρ_τ²)`. With `σ_i` the
//! singular values of `dρ/dt` and `ρ_i` those of `ρ_τ` (both descending),
//!
//! ```text
//! τ_ML = |R - 1| tr(ρ_τ²) / avg(Σ σ_i ρ_i)
//! τ_MT = |R - 1| tr(ρ_τ²) / avg(√Σ σ_i²)
//! τ_QSL = max(τ_ML, τ_MT)
//! ```
//!
//! where `avg` is the time average over the driving window `[τ, τ + τ_D]`.
//! For pure dephasing the bound has the closed form
//! `C_l1(ρ_0) |f(τ) f(τ+τ_D) - f(τ)²| / avg|df/dt|`, implemented separately
//! in [`qsl_dephasing`] so the two routes can be checked against each other.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::{finite_difference, ModelConfig, Propagator};
use crate::error::{check_time, invalid, Error, Result};
use crate::output::{fmt_float, fmt_opt};
use crate::state::{coherence_l1, QubitState};

/// Denominators below this mean the state does not move.
pub const FROZEN_THRESHOLD: f64 = 1e-14;
/// Tolerance of the Hermiticity check in [`hermitian_singular_values`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
pub const MIN_QSL_STEPS: usize = 8;
pub const DEFAULT_QSL_STEPS: usize = 1000;

type Matrix2 = [[Complex64; 2]; 2];

/// Unified closed-system bound `max(π/2ΔE, π/2E)` with `ħ = 1`.
pub fn closed_system_bound(delta_e: f64, mean_e: f64) -> Result<f64> {
    if !(delta_e > 0.0 && delta_e.is_finite()) {
        return Err(invalid("delta_e", format!("must be finite and > 0, got {delta_e}")));
    }
    if !(mean_e > 0.0 && mean_e.is_finite()) {
        return Err(invalid("mean_e", format!("must be finite and > 0, got {mean_e}")));
    }
    Ok((FRAC_PI_2 / delta_e).max(FRAC_PI_2 / mean_e))
}

fn trace_product(a: &Matrix2, b: &Matrix2) -> f64 {
    (a[0][0] * b[0][0] + a[0][1] * b[1][0] + a[1][0] * b[0][1] + a[1][1] * b[1][1]).re
}

/// `tr(ρ_a ρ_b) / tr(ρ_a²)`.
pub fn relative_purity(rho_a: &QubitState, rho_b: &QubitState) -> f64 {
    trace_product(&rho_a.matrix(), &rho_b.matrix()) / rho_a.purity()
}

/// Singular values of a 2×2 Hermitian matrix, i.e. the absolute values of
/// its eigenvalues, in descending order.
pub fn hermitian_singular_values(m: &Matrix2) -> Result<(f64, f64)> {
    let scale = m.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
    let asymmetry = (m[0][1] - m[1][0].conj())
        .norm()
        .max(m[0][0].im.abs())
        .max(m[1][1].im.abs());
    if !(asymmetry <= HERMITIAN_TOLERANCE * scale) {
        return Err(Error::NotHermitian(asymmetry));
    }
    let (a, d) = (m[0][0].re, m[1][1].re);
    let mean = 0.5 * (a + d);
    let radius = (0.5 * (a - d)).hypot(m[0][1].norm());
    let (x, y) = ((mean + radius).abs(), (mean - radius).abs());
    Ok(if x >= y { (x, y) } else { (y, x) })
}

/// How `df/dt` is evaluated inside the window averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RateMethod {
    #[default]
    Analytic,
    /// Central differences with step `τ_D / n_steps · 1e-3`.
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QslResult {
    /// Start of the driving window.
    pub tau: f64,
    /// Actual driving time.
    pub tau_d: f64,
    pub tau_qsl: f64,
    pub tau_ml: f64,
    pub tau_mt: f64,
    pub rel_purity: f64,
    /// Both denominators vanished: the state does not evolve.
    pub frozen: bool,
    /// `tau_qsl > tau_d`, which a valid bound never produces. Reported,
    /// not clamped.
    pub exceeds_window: bool,
}

struct Window {
    tau: f64,
    tau_d: f64,
    n_steps: usize,
}

impl Window {
    fn new(tau: f64, tau_d: f64, n_steps: usize) -> Result<Self> {
        check_time(tau)?;
        if !(tau_d > 0.0 && tau_d.is_finite()) {
            return Err(invalid("tau_d", format!("must be finite and > 0, got {tau_d}")));
        }
        if n_steps < MIN_QSL_STEPS {
            return Err(invalid("n_steps", format!("must be >= {MIN_QSL_STEPS}, got {n_steps}")));
        }
        // Simpson needs an even panel count.
        let n_steps = n_steps + n_steps % 2;
        Ok(Self { tau, tau_d, n_steps })
    }

    fn time(&self, k: usize) -> f64 {
        self.tau + self.tau_d * k as f64 / self.n_steps as f64
    }

    fn fd_step(&self) -> f64 {
        self.tau_d / self.n_steps as f64 * 1e-3
    }

    /// Time average of `g` over the window by composite Simpson.
    fn average<G: FnMut(f64) -> Result<f64>>(&self, mut g: G) -> Result<f64> {
        let mut sum = 0.0;
        for k in 0..=self.n_steps {
            let weight = if k == 0 || k == self.n_steps {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            sum += weight * g(self.time(k))?;
        }
        Ok(sum / (3.0 * self.n_steps as f64))
    }

    fn rate(&self, p: &Propagator, method: RateMethod, t: f64) -> Complex64 {
        match method {
            RateMethod::Analytic => p.rate(t),
            RateMethod::FiniteDifference => finite_difference(p, t, self.fd_step()),
        }
    }
}

/// Relative-purity speed limit from the singular values of `dρ/dt`.
pub fn qsl_generic(cfg: &ModelConfig, initial: &QubitState, tau: f64, tau_d: f64, n_steps: usize) -> Result<QslResult> {
    qsl_generic_with(cfg, initial, tau, tau_d, n_steps, RateMethod::Analytic)
}

pub fn qsl_generic_with(
    cfg: &ModelConfig,
    initial: &QubitState,
    tau: f64,
    tau_d: f64,
    n_steps: usize,
    method: RateMethod,
) -> Result<QslResult> {
    let window = Window::new(tau, tau_d, n_steps)?;
    let p = Propagator::new(cfg)?;

    let rho_start = initial.scaled_coherence(p.factor(tau));
    let rho_end = initial.scaled_coherence(p.factor(tau + tau_d));
    let start = rho_start.matrix();
    let end = rho_end.matrix();
    let mut change = end;
    for (row, start_row) in change.iter_mut().zip(&start) {
        for (z, s) in row.iter_mut().zip(start_row) {
            *z -= s;
        }
    }
    // |R - 1| tr(ρ_τ²) = |tr(ρ_τ (ρ_{τ+τ_D} - ρ_τ))|; the populations cancel
    // exactly in the difference, so no precision is lost for small changes.
    let numerator = trace_product(&start, &change).abs();
    let rel_purity = relative_purity(&rho_start, &rho_end);

    let (r1, r2) = hermitian_singular_values(&start)?;
    let coherence = initial.rho_eg();
    let mut ml = |t: f64| -> Result<f64> {
        let d = coherence * window.rate(&p, method, t);
        let zero = Complex64::new(0.0, 0.0);
        let (s1, s2) = hermitian_singular_values(&[[zero, d], [d.conj(), zero]])?;
        Ok(s1 * r1 + s2 * r2)
    };
    let ml_den = window.average(&mut ml)?;
    let mt_den = window.average(|t| {
        let d = coherence * window.rate(&p, method, t);
        // Both singular values equal |d| for the off-diagonal generator.
        Ok((2.0 * d.norm_sqr()).sqrt())
    })?;

    let frozen = ml_den < FROZEN_THRESHOLD && mt_den < FROZEN_THRESHOLD;
    let bound = |den: f64| if den < FROZEN_THRESHOLD { 0.0 } else { numerator / den };
    let tau_ml = bound(ml_den);
    let tau_mt = bound(mt_den);
    let tau_qsl = tau_ml.max(tau_mt);
    Ok(QslResult {
        tau,
        tau_d,
        tau_qsl,
        tau_ml,
        tau_mt,
        rel_purity,
        frozen,
        exceeds_window: tau_qsl > tau_d * (1.0 + 1e-9),
    })
}

/// Closed-form speed limit for pure dephasing,
/// `C_l1(ρ_0) |f(τ) f(τ+τ_D) - f(τ)²| / avg|df/dt|`. Returns zero for
/// incoherent initial states and frozen dynamics.
pub fn qsl_dephasing(cfg: &ModelConfig, initial: &QubitState, tau: f64, tau_d: f64, n_steps: usize) -> Result<f64> {
    qsl_dephasing_with(cfg, initial, tau, tau_d, n_steps, RateMethod::Analytic)
}

pub fn qsl_dephasing_with(
    cfg: &ModelConfig,
    initial: &QubitState,
    tau: f64,
    tau_d: f64,
    n_steps: usize,
    method: RateMethod,
) -> Result<f64> {
    let window = Window::new(tau, tau_d, n_steps)?;
    let p = Propagator::new(cfg)?;
    let c0 = coherence_l1(initial);
    if c0 == 0.0 {
        return Ok(0.0);
    }
    let f_start = p.factor(tau);
    let f_end = p.factor(tau + tau_d);
    let numerator = c0 * (f_start * f_end - f_start * f_start).norm();
    let denominator = window.average(|t| Ok(window.rate(&p, method, t).norm()))?;
    if denominator < FROZEN_THRESHOLD {
        return Ok(0.0);
    }
    Ok(numerator / denominator)
}

/// Generic bound at each window start `tau`, in input order.
pub fn qsl_sweep(
    cfg: &ModelConfig,
    initial: &QubitState,
    tau_values: &[f64],
    tau_d: f64,
    n_steps: usize,
) -> Result<Vec<(f64, QslResult)>> {
    tau_values
        .par_iter()
        .map(|&tau| qsl_generic(cfg, initial, tau, tau_d, n_steps).map(|r| (tau, r)))
        .collect()
}

/// Which formula fills the `tau_qsl_*` columns of a sweep table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// [`qsl_dephasing`].
    #[default]
    ClosedForm,
    /// [`qsl_generic`].
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QslRow {
    pub tau: f64,
    /// Generic bound of the configured model.
    pub generic: QslResult,
    /// Closed-form bound of the configured model.
    pub closed_form: f64,
    /// Bounds of the same model with the disturbance switched off.
    pub reference: Option<(QslResult, f64)>,
}

impl QslRow {
    pub fn tau_qsl(&self, route: Route) -> f64 {
        match route {
            Route::ClosedForm => self.closed_form,
            Route::Generic => self.generic.tau_qsl,
        }
    }

    pub fn reference_tau_qsl(&self, route: Route) -> Option<f64> {
        self.reference.map(|(generic, closed)| match route {
            Route::ClosedForm => closed,
            Route::Generic => generic.tau_qsl,
        })
    }
}

/// Both routes at every `tau`, plus the undisturbed reference when `paired`.
pub fn qsl_table(
    cfg: &ModelConfig,
    initial: &QubitState,
    tau_values: &[f64],
    tau_d: f64,
    n_steps: usize,
    paired: bool,
) -> Result<Vec<QslRow>> {
    let reference_cfg = cfg.without_disturbance();
    tau_values
        .par_iter()
        .map(|&tau| {
            let generic = qsl_generic(cfg, initial, tau, tau_d, n_steps)?;
            let closed_form = qsl_dephasing(cfg, initial, tau, tau_d, n_steps)?;
            let reference = if paired {
                Some((
                    qsl_generic(&reference_cfg, initial, tau, tau_d, n_steps)?,
                    qsl_dephasing(&reference_cfg, initial, tau, tau_d, n_steps)?,
                ))
            } else {
                None
            };
            Ok(QslRow {
                tau,
                generic,
                closed_form,
                reference,
            })
        })
        .collect()
}

/// Write `tau, tau_qsl_disturbed, tau_qsl_reference, tau_ml, tau_mt,
/// rel_purity`. The reference column is blank for unpaired rows; the last
/// three columns always describe the configured (disturbed) model.
pub fn write_qsl_csv<W: Write>(writer: W, rows: &[QslRow], route: Route) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record([
        "tau",
        "tau_qsl_disturbed",
        "tau_qsl_reference",
        "tau_ml",
        "tau_mt",
        "rel_purity",
    ])?;
    for row in rows {
        out.write_record([
            fmt_float(row.tau),
            fmt_float(row.tau_qsl(route)),
            fmt_opt(row.reference_tau_qsl(route)),
            fmt_float(row.generic.tau_ml),
            fmt_float(row.generic.tau_mt),
            fmt_float(row.generic.rel_purity),
        ])?;
    }
    out.flush()?;
    Ok(())
}
