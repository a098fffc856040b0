//! Search for the auxiliary interaction time `T_A` that reproduces a set of
//! reported onset thresholds.
//!
//! For each candidate `T_A` and each target the axis grid is scanned in
//! order until `N` first exceeds the onset threshold. A target is matched
//! when that onset lies within `tolerance` of the reported value.

use rayon::prelude::*;

use crate::dynamics::ModelConfig;
use crate::error::Result;
use crate::nonmarkov::{measure, SweepAxis};
use crate::presets::{SweepRange, FIGURE_SZ_A};
use crate::spectral::{DisturbanceConfig, SpectralDensity};

#[derive(Debug, Clone, PartialEq)]
pub struct OnsetTarget {
    pub label: &'static str,
    /// Bath at an arbitrary point of the swept axis.
    pub bath: SpectralDensity,
    pub sz_a: f64,
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
    /// Reported onset value.
    pub expected: f64,
}

impl OnsetTarget {
    fn template(&self, t_a: f64) -> ModelConfig {
        ModelConfig::new(
            self.bath,
            DisturbanceConfig {
                enabled: true,
                t_a,
                sz_a: self.sz_a,
            },
        )
    }

    /// First grid value with `N > ONSET_THRESHOLD`, scanning upwards.
    pub fn onset(&self, t_a: f64, t_max: f64, n_steps: usize) -> Result<Option<f64>> {
        let template = self.template(t_a);
        for &value in &self.grid {
            let cfg = self.axis.apply(&template, value)?;
            if measure(&cfg, t_max, n_steps)?.is_non_markovian() {
                return Ok(Some(value));
            }
        }
        Ok(None)
    }
}

/// The four disturbance-induced onsets of the coupling sweeps.
pub fn coupling_onset_targets() -> Vec<OnsetTarget> {
    let eta_grid = SweepRange {
        start: 0.0,
        stop: 6.0,
        step: 0.05,
    }
    .values();
    let gamma_grid = SweepRange {
        start: 0.0,
        stop: 20.0,
        step: 0.1,
    }
    .values();
    let ohmic = |label, s, expected| OnsetTarget {
        label,
        bath: SpectralDensity::Ohmic {
            eta: 1.0,
            s,
            omega_c: 1.0,
        },
        sz_a: FIGURE_SZ_A,
        axis: SweepAxis::Eta,
        grid: eta_grid.clone(),
        expected,
    };
    vec![
        ohmic("ohmic_s0.5_eta", 0.5, 3.6),
        ohmic("ohmic_s1_eta", 1.0, 4.0),
        ohmic("ohmic_s2_eta", 2.0, 2.8),
        OnsetTarget {
            label: "lorentzian_dl1_gamma",
            bath: SpectralDensity::Lorentzian {
                gamma: 10.0,
                lambda: 1.0,
                delta: 1.0,
            },
            sz_a: FIGURE_SZ_A,
            axis: SweepAxis::Gamma,
            grid: gamma_grid,
            expected: 6.2,
        },
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationRow {
    pub t_a: f64,
    /// Onset per target, in target order.
    pub onsets: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationReport {
    pub labels: Vec<&'static str>,
    pub expected: Vec<f64>,
    pub tolerance: f64,
    pub rows: Vec<CalibrationRow>,
}

impl CalibrationReport {
    fn matches(&self, row: &CalibrationRow, target: usize) -> bool {
        row.onsets[target].is_some_and(|v| (v - self.expected[target]).abs() <= self.tolerance)
    }

    /// Candidate `T_A` values that reproduce target `target`.
    pub fn matching_t_a(&self, target: usize) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|row| self.matches(row, target))
            .map(|row| row.t_a)
            .collect()
    }

    /// Candidate `T_A` values that reproduce every target in `targets`.
    pub fn common_t_a(&self, targets: &[usize]) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|row| targets.iter().all(|&k| self.matches(row, k)))
            .map(|row| row.t_a)
            .collect()
    }
}

/// Evaluate every target at every candidate `T_A` (in parallel over the
/// current rayon pool; rows come back in candidate order).
pub fn calibrate(
    targets: &[OnsetTarget],
    t_a_values: &[f64],
    tolerance: f64,
    t_max: f64,
    n_steps: usize,
) -> Result<CalibrationReport> {
    let jobs: Vec<(usize, usize)> = (0..t_a_values.len())
        .flat_map(|i| (0..targets.len()).map(move |k| (i, k)))
        .collect();
    let onsets = jobs
        .par_iter()
        .map(|&(i, k)| targets[k].onset(t_a_values[i], t_max, n_steps))
        .collect::<Result<Vec<_>>>()?;

    let rows = t_a_values
        .iter()
        .enumerate()
        .map(|(i, &t_a)| CalibrationRow {
            t_a,
            onsets: onsets[i * targets.len()..(i + 1) * targets.len()].to_vec(),
        })
        .collect();
    Ok(CalibrationReport {
        labels: targets.iter().map(|t| t.label).collect(),
        expected: targets.iter().map(|t| t.expected).collect(),
        tolerance,
        rows,
    })
}
