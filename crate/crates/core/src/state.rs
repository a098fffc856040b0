//! Qubit density matrices in the `{|e⟩, |g⟩}` basis, `σ_z|e⟩ = |e⟩`.

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Slack allowed on the positivity and Bloch-length checks.
const STATE_TOLERANCE: f64 = 1e-12;

/// Qubit density matrix stored as the excited population and the `e-g`
/// coherence; the remaining entries follow from trace one and hermiticity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    rho_ee: f64,
    rho_eg: Complex64,
}

impl QubitState {
    pub fn new(rho_ee: f64, rho_eg: Complex64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho_ee) {
            return Err(invalid("rho_ee", format!("must lie in [0, 1], got {rho_ee}")));
        }
        if !(rho_eg.re.is_finite() && rho_eg.im.is_finite()) {
            return Err(invalid("rho_eg", "must be finite"));
        }
        if rho_eg.norm_sqr() > rho_ee * (1.0 - rho_ee) + STATE_TOLERANCE {
            return Err(invalid(
                "rho_eg",
                format!(
                    "|rho_eg|^2 = {} exceeds rho_ee * rho_gg = {}",
                    rho_eg.norm_sqr(),
                    rho_ee * (1.0 - rho_ee)
                ),
            ));
        }
        Ok(Self { rho_ee, rho_eg })
    }

    /// `ρ = (I + r·σ) / 2`.
    pub fn from_bloch(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        let len = (r1 * r1 + r2 * r2 + r3 * r3).sqrt();
        if !(len <= 1.0 + STATE_TOLERANCE) {
            return Err(invalid("bloch", format!("vector length {len} exceeds 1")));
        }
        let rho_ee = (0.5 * (1.0 + r3)).clamp(0.0, 1.0);
        Self::new(rho_ee, Complex64::new(0.5 * r1, -0.5 * r2))
    }

    /// `(|e⟩ + e^{-iφ}|g⟩)/√2`, i.e. `ρ_eg = e^{iφ}/2`.
    pub fn maximally_coherent(phase: f64) -> Self {
        Self {
            rho_ee: 0.5,
            rho_eg: Complex64::from_polar(0.5, phase),
        }
    }

    pub fn excited() -> Self {
        Self {
            rho_ee: 1.0,
            rho_eg: Complex64::new(0.0, 0.0),
        }
    }

    pub fn ground() -> Self {
        Self {
            rho_ee: 0.0,
            rho_eg: Complex64::new(0.0, 0.0),
        }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            rho_ee: 0.5,
            rho_eg: Complex64::new(0.0, 0.0),
        }
    }

    pub fn rho_ee(&self) -> f64 {
        self.rho_ee
    }

    pub fn rho_gg(&self) -> f64 {
        1.0 - self.rho_ee
    }

    pub fn rho_eg(&self) -> Complex64 {
        self.rho_eg
    }

    pub fn rho_ge(&self) -> Complex64 {
        self.rho_eg.conj()
    }

    pub fn bloch(&self) -> [f64; 3] {
        [2.0 * self.rho_eg.re, -2.0 * self.rho_eg.im, 2.0 * self.rho_ee - 1.0]
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.rho_ee * self.rho_ee + self.rho_gg() * self.rho_gg() + 2.0 * self.rho_eg.norm_sqr()
    }

    /// Row-major matrix `[[ρ_ee, ρ_eg], [ρ_ge, ρ_gg]]`.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(self.rho_ee, 0.0), self.rho_eg],
            [self.rho_eg.conj(), Complex64::new(self.rho_gg(), 0.0)],
        ]
    }

    /// Same populations, coherence multiplied by `factor`. Callers guarantee
    /// `|factor| ≤ 1` so positivity is preserved.
    pub(crate) fn scaled_coherence(&self, factor: Complex64) -> Self {
        Self {
            rho_ee: self.rho_ee,
            rho_eg: self.rho_eg * factor,
        }
    }
}

/// l1-norm of coherence, `Σ_{i≠j} |ρ_ij| = 2|ρ_eg|`.
pub fn coherence_l1(state: &QubitState) -> f64 {
    2.0 * state.rho_eg.norm()
}
