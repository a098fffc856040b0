//! Figure recipes: bath, disturbance and sweep settings for each published
//! panel.
//!
//! The auxiliary interaction time `T_A` is not part of the published
//! parameter sets. The values below come from the calibration search in
//! [`crate::calibration`] and are expressed in natural time units of each
//! bath family (`1/ω_c` for Ohmic, `1/λ` for Lorentzian).

use std::fmt;
use std::str::FromStr;

use crate::dynamics::ModelConfig;
use crate::error::{invalid, Error, Result};
use crate::nonmarkov::SweepAxis;
use crate::spectral::{DisturbanceConfig, SpectralDensity};

/// `T_A · ω_c` reproducing the Ohmic onset couplings.
pub const OHMIC_CALIBRATED_T_A: f64 = 0.5;
/// `T_A · λ` reproducing the Lorentzian onset coupling.
pub const LORENTZIAN_CALIBRATED_T_A: f64 = 1.5;
/// `⟨σ_z^a⟩` used throughout the figures.
pub const FIGURE_SZ_A: f64 = 0.05;
/// Ohmic coupling for the speed-limit panels (not given with the figures).
pub const QSL_FIGURE_ETA: f64 = 1.0;

/// Calibrated auxiliary interaction time for a bath, in absolute units.
pub fn calibrated_t_a(bath: &SpectralDensity) -> f64 {
    match *bath {
        SpectralDensity::Ohmic { omega_c, .. } => OHMIC_CALIBRATED_T_A / omega_c,
        SpectralDensity::Lorentzian { lambda, .. } => LORENTZIAN_CALIBRATED_T_A / lambda,
    }
}

/// Inclusive arithmetic range `start, start + step, ..., ≤ stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(invalid("sweep", "bounds and step must be finite"));
        }
        if !(step > 0.0) {
            return Err(invalid("sweep", format!("step must be > 0, got {step}")));
        }
        if stop < start {
            return Err(invalid("sweep", format!("stop {stop} is below start {start}")));
        }
        Ok(Self { start, stop, step })
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Points computed as `start + k·step` (no accumulated drift), rounded
    /// to 12 decimals so `0.05 * 3` prints as `0.15`.
    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|k| {
                let v = self.start + k as f64 * self.step;
                (v * 1e12).round() / 1e12
            })
            .collect()
    }
}

/// What a preset computes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Study {
    NonMarkovianity { axis: SweepAxis, range: SweepRange },
    SpeedLimit { taus: SweepRange, tau_d: f64 },
}

/// A fully specified reproduction recipe. Every recipe is a paired run:
/// the disturbed model and the same bath without disturbance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recipe {
    pub cfg: ModelConfig,
    pub study: Study,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig2a,
    Fig2b,
    Fig2c,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig5,
}

impl Preset {
    pub const ALL: [Preset; 9] = [
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig2c,
        Preset::Fig3a,
        Preset::Fig3b,
        Preset::Fig4a,
        Preset::Fig4b,
        Preset::Fig4c,
        Preset::Fig5,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig2c => "fig2c",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
            Preset::Fig4c => "fig4c",
            Preset::Fig5 => "fig5",
        }
    }

    pub fn recipe(&self) -> Recipe {
        let ohmic = |eta: f64, s: f64| SpectralDensity::Ohmic { eta, s, omega_c: 1.0 };
        let lorentzian = |gamma: f64, ratio: f64| SpectralDensity::Lorentzian {
            gamma,
            lambda: 1.0,
            delta: ratio,
        };
        let disturbed = |bath: SpectralDensity| {
            ModelConfig::new(
                bath,
                DisturbanceConfig {
                    enabled: true,
                    t_a: calibrated_t_a(&bath),
                    sz_a: FIGURE_SZ_A,
                },
            )
        };
        let range = |start, stop, step| SweepRange { start, stop, step };
        let eta_sweep = Study::NonMarkovianity {
            axis: SweepAxis::Eta,
            range: range(0.0, 6.0, 0.05),
        };
        let tau_sweep = Study::SpeedLimit {
            taus: range(0.0, 5.0, 0.05),
            tau_d: 1.0,
        };
        let (bath, study) = match self {
            Preset::Fig2a => (ohmic(1.0, 0.5), eta_sweep),
            Preset::Fig2b => (ohmic(1.0, 1.0), eta_sweep),
            Preset::Fig2c => (ohmic(1.0, 2.0), eta_sweep),
            Preset::Fig3a => (
                lorentzian(10.0, 1.0),
                Study::NonMarkovianity {
                    axis: SweepAxis::Gamma,
                    range: range(0.0, 20.0, 0.1),
                },
            ),
            Preset::Fig3b => (
                lorentzian(10.0, 1.0),
                Study::NonMarkovianity {
                    axis: SweepAxis::DeltaOverLambda,
                    range: range(0.0, 6.0, 0.05),
                },
            ),
            Preset::Fig4a => (ohmic(QSL_FIGURE_ETA, 0.5), tau_sweep),
            Preset::Fig4b => (ohmic(QSL_FIGURE_ETA, 1.0), tau_sweep),
            Preset::Fig4c => (ohmic(QSL_FIGURE_ETA, 2.0), tau_sweep),
            Preset::Fig5 => (lorentzian(10.0, 1.0), tau_sweep),
        };
        Recipe {
            cfg: disturbed(bath),
            study,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| invalid("preset", format!("unknown preset `{s}`")))
    }
}
